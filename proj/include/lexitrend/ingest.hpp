#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "lexitrend/calendar.hpp"
#include "lexitrend/matcher.hpp"

namespace lexitrend {

struct TextEvent {
  MinuteStamp event_time = 0;
  std::string text;
  std::optional<std::string> language;
};

using LanguageFilter = std::function<bool(const TextEvent&)>;

/// Keeps events tagged with exactly `code`; untagged events are dropped.
/// An empty code keeps everything.
LanguageFilter keep_language(std::string code);

/// Per-term, per-UTC-day match counts.
class DailyCounts {
 public:
  struct Entry {
    TermId term;
    Day day;
    std::uint64_t count;
  };

  void add(TermId term, Day day, std::uint64_t n = 1);
  std::uint64_t get(TermId term, Day day) const;
  void merge(const DailyCounts& other);
  bool empty() const { return counts_.empty(); }

  /// Entries ordered by (term, day).
  std::vector<Entry> entries() const;
  /// Sum over days of one term.
  std::uint64_t total(TermId term) const;
  std::map<TermId, std::uint64_t> totals() const;
  /// Month totals for one term.
  std::map<Month, std::uint64_t> month_totals(TermId term) const;

  bool operator==(const DailyCounts&) const = default;

 private:
  static std::uint64_t key(TermId term, Day day) {
    return (std::uint64_t{term} << 32) | static_cast<std::uint32_t>(day.serial());
  }
  std::unordered_map<std::uint64_t, std::uint64_t> counts_;
};

/// Which minutes of the window carried at least one event. Backed by one
/// bit per minute.
class MinuteCoverage {
 public:
  MinuteCoverage() = default;
  explicit MinuteCoverage(MonthRange window);

  const MonthRange& window() const { return window_; }
  bool in_window(MinuteStamp minute) const { return minute >= origin_ && minute < end_; }
  /// `minute` must be inside the window.
  void observe(MinuteStamp minute);
  bool observed(MinuteStamp minute) const;

  std::int64_t observed_minutes(Month month) const;
  static std::int64_t expected_minutes(Month month) { return month.minutes(); }
  std::int64_t observed_minutes(Day day) const;

  /// Union; returns how many minutes both sides had observed.
  std::int64_t merge(const MinuteCoverage& other);

  bool operator==(const MinuteCoverage&) const = default;

 private:
  MonthRange window_{};
  MinuteStamp origin_ = 0;
  MinuteStamp end_ = 0;
  std::vector<std::uint64_t> bits_;
};

/// Where to find the fields of an event line.
struct EventFormat {
  std::vector<std::string> time_keys{"created_at", "ts"};
  std::string text_key = "text";
  std::string language_key = "lang";
};

struct IngestOptions {
  MonthRange window{};
  EventFormat format;
  /// Count a term at most once per event.
  bool count_per_doc = false;
  unsigned threads = 1;
};

struct IngestStats {
  std::uint64_t lines = 0;
  std::uint64_t events = 0;  // well-formed, in window
  std::uint64_t malformed_lines = 0;
  std::uint64_t out_of_window = 0;
  std::uint64_t filtered_out = 0;
  std::uint64_t invalid_utf8 = 0;
  std::uint64_t matches = 0;

  IngestStats& operator+=(const IngestStats& o);
  bool operator==(const IngestStats&) const = default;
};

struct Aggregates {
  DailyCounts counts;
  MinuteCoverage coverage;
  IngestStats stats;
};

struct MergeReport {
  std::int64_t overlapping_minutes = 0;
  bool warning() const { return overlapping_minutes > 0; }
};

/// Processes one event file (gzip when the name ends in ".gz"). Throws
/// DataError naming the file when it cannot be read.
Aggregates ingest_file(const std::filesystem::path& file, const Matcher& matcher, const LanguageFilter& filter,
                       const IngestOptions& options);

/// Ingests every file, `options.threads` files at a time, and merges the
/// shards in file order. Either every shard succeeds or a DataError naming
/// the first failed shard is thrown.
Aggregates ingest_stream(std::span<const std::filesystem::path> files, const Matcher& matcher,
                         const LanguageFilter& filter, const IngestOptions& options);

/// Pointwise sum of counts and union of coverage. All parts must share
/// one window.
Aggregates merge_aggregates(std::span<const Aggregates> parts, MergeReport* report = nullptr);

}  // namespace lexitrend
