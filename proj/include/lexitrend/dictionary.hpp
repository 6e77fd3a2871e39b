#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lexitrend/calendar.hpp"

namespace lexitrend {

using ActivityLog = std::map<Month, std::int64_t>;

/// One dictionary headword with everything the dictionary side knows
/// about it.
struct TermRecord {
  std::string term;  // normalized headword
  std::set<std::string> tags;
  std::vector<Month> definition_months;  // one entry per definition, sorted
  std::uint64_t upvotes = 0;
  std::uint64_t downvotes = 0;
  std::optional<ActivityLog> activity;
};

struct SelectionCriteria {
  std::uint64_t min_occurrences = 10000;
  int min_overlap_months = 12;
  std::size_t min_term_length = 3;
  std::set<std::string> stopwords;

  /// Throws ConfigError when a correlation could not be computed under
  /// these thresholds.
  void validate() const;
};

/// A malformed record (line > 0) or a term-level conflict (line == 0).
struct LoadIssue {
  std::size_t line = 0;
  std::string term;
  std::string message;
};

struct LoadOptions {
  /// Maximum tolerated fraction of records with issues.
  double error_budget = 0.01;
};

class Dictionary {
 public:
  Dictionary() = default;
  Dictionary(std::vector<TermRecord> terms, std::vector<LoadIssue> issues, std::size_t records);

  const std::vector<TermRecord>& terms() const { return terms_; }
  const std::vector<LoadIssue>& issues() const { return issues_; }
  std::size_t record_count() const { return records_; }
  std::size_t size() const { return terms_.size(); }

  const TermRecord* find(std::string_view term) const;

 private:
  std::vector<TermRecord> terms_;  // sorted by term
  std::vector<LoadIssue> issues_;
  std::size_t records_ = 0;
};

/// Reads newline-delimited JSON dictionary records and merges duplicate
/// headwords. Throws DataError when the share of bad records exceeds the
/// error budget.
Dictionary load_dictionary(std::istream& in, const LoadOptions& options = {});
Dictionary load_dictionary(const std::filesystem::path& path, const LoadOptions& options = {});

/// One entry per line, normalized as a headword; blank lines are skipped.
std::set<std::string> load_word_list(std::istream& in);
std::set<std::string> load_word_list(const std::filesystem::path& path);

/// Terms eligible for matching: long enough and not a whole-string stopword.
std::vector<std::string> filter_terms(std::span<const TermRecord> terms, const SelectionCriteria& criteria);

/// Number of months of `window` covered by the term's activity log.
int activity_overlap_months(const TermRecord& term, const MonthRange& window);

/// Terms kept for cross-platform analysis: enough matcher occurrences and
/// enough months of dictionary activity inside the window. Inclusive
/// thresholds.
std::vector<std::string> select_analysis_terms(std::span<const TermRecord> terms,
                                               const std::map<std::string, std::uint64_t>& totals,
                                               const SelectionCriteria& criteria, const MonthRange& window);

}  // namespace lexitrend
