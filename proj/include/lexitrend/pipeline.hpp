#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lexitrend/calendar.hpp"
#include "lexitrend/correlation.hpp"
#include "lexitrend/dictionary.hpp"
#include "lexitrend/ingest.hpp"

namespace lexitrend {

/// Everything one pipeline run depends on. Built from a key = value config
/// file and/or command-line overrides using the same key names.
struct RunConfig {
  MonthRange window{Month(2012, 1), Month(2019, 9)};
  std::string events_glob;
  std::filesystem::path dictionary;
  std::filesystem::path stopwords;
  std::filesystem::path lexicon;
  std::filesystem::path out_dir;

  SelectionCriteria criteria;  // stopwords are loaded from `stopwords`
  int k_min = -3;
  int k_max = 3;
  double alpha = 0.01;
  double alpha_trend = 0.001;
  std::optional<double> pelt_penalty;  // nullopt: per-series default
  CcfMode ccf_mode = CcfMode::per_lag_pearson;
  bool count_per_doc = false;
  std::string language = "en";
  EventFormat format;
  double error_budget = 0.01;
  std::uint64_t support_floor = 5;
  double log_base = 0;
  int max_missing_days = 14;
  std::uint64_t seed = 1;
  unsigned threads = 1;

  /// Applies one setting. Throws ConfigError for unknown keys or bad values.
  void set(const std::string& key, const std::string& value);
  /// Reads "key = value" lines; '#' starts a comment.
  void load_file(const std::filesystem::path& path);

  /// Every analysis-relevant setting as text (thread count and output
  /// directory excluded, since they do not change results).
  std::map<std::string, std::string> snapshot() const;
  /// FNV-1a 64 of the snapshot, as 16 hex digits.
  std::string hash() const;
};

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed = 14695981039346656037ull);
/// Streams a file through FNV-1a 64. Throws DataError when unreadable.
std::uint64_t hash_file(const std::filesystem::path& path);
std::string hex64(std::uint64_t v);

/// Expands a glob pattern into sorted paths.
std::vector<std::filesystem::path> expand_glob(const std::string& pattern);

struct MatchSummary {
  std::size_t files = 0;
  std::size_t patterns = 0;
  IngestStats stats;
};

/// Scans the event files for dictionary terms and writes daily_counts.csv,
/// coverage.csv, daily_coverage.csv and match_manifest.json into out_dir.
/// On failure no output is left behind.
MatchSummary cmd_match(const RunConfig& config);

struct AnalyzeSummary {
  std::size_t selected = 0;
  std::size_t analyzed = 0;
  std::size_t excluded = 0;
  std::map<Category, std::size_t> categories;
  LagHistogram histogram;
};

/// Runs term selection, series construction, correlation, association,
/// trend detection and contingency statistics over cmd_match's outputs and
/// writes every report into out_dir.
AnalyzeSummary cmd_analyze(const RunConfig& config);

/// Aligned per-term series with normalized values and trending flags over
/// the months both platforms cover. Throws DataError listing the nearest
/// analyzed terms when `term` was not analyzed.
void cmd_plotdata(const RunConfig& config, const std::string& term, std::ostream& out);

/// Single-platform month,value,trending_flag rows for one term.
void cmd_plotdata_platform(const RunConfig& config, const std::string& term, const std::string& platform,
                           std::ostream& out);

}  // namespace lexitrend
