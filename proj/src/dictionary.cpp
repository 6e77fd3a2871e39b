#include "lexitrend/dictionary.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <unordered_map>

#include <json.hpp>

#include "lexitrend/error.hpp"
#include "lexitrend/text.hpp"

namespace lexitrend {

using nlohmann::json;

namespace {

std::optional<Month> parse_record_month(const json& value) {
  if (!value.is_string()) return std::nullopt;
  auto m = Month::parse(value.get_ref<const std::string&>());
  if (!m || m->year() < 1999) return std::nullopt;
  return m;
}

std::optional<std::uint64_t> parse_count(const json& value) {
  if (value.is_number_unsigned()) return value.get<std::uint64_t>();
  if (value.is_number_integer() && value.get<std::int64_t>() >= 0) return value.get<std::uint64_t>();
  return std::nullopt;
}

// Parses one record; returns an error message on failure.
std::optional<std::string> parse_record(std::string_view line, TermRecord& out) {
  json j = json::parse(line, nullptr, false);
  if (j.is_discarded()) return "invalid JSON";
  if (!j.is_object()) return "record is not a JSON object";

  auto it = j.find("term");
  if (it == j.end() || !it->is_string()) return "missing string field 'term'";
  auto term = text::normalize_headword(it->get_ref<const std::string&>());
  if (!term) return "term is not valid UTF-8";
  if (term->empty()) return "term is empty after normalization";
  out.term = std::move(*term);

  if (auto t = j.find("tags"); t != j.end() && !t->is_null()) {
    if (!t->is_array()) return "'tags' must be an array";
    for (const auto& tag : *t) {
      if (!tag.is_string()) return "tag is not a string";
      const auto& s = tag.get_ref<const std::string&>();
      if (!text::is_valid_utf8(s)) return "tag is not valid UTF-8";
      if (!s.empty()) out.tags.insert(s);
    }
  }
  if (auto d = j.find("definition_months"); d != j.end() && !d->is_null()) {
    if (!d->is_array()) return "'definition_months' must be an array";
    for (const auto& v : *d) {
      auto m = parse_record_month(v);
      if (!m) return "invalid definition month " + v.dump();
      out.definition_months.push_back(*m);
    }
    std::sort(out.definition_months.begin(), out.definition_months.end());
  }
  for (const char* key : {"upvotes", "downvotes"}) {
    if (auto v = j.find(key); v != j.end() && !v->is_null()) {
      auto n = parse_count(*v);
      if (!n) return std::string("'") + key + "' must be a non-negative integer";
      (key[0] == 'u' ? out.upvotes : out.downvotes) = *n;
    }
  }
  if (auto a = j.find("activity"); a != j.end() && !a->is_null()) {
    if (!a->is_object()) return "'activity' must be an object";
    ActivityLog log;
    for (const auto& [key, value] : a->items()) {
      auto m = Month::parse(key);
      if (!m || m->year() < 1999) return "invalid activity month \"" + key + "\"";
      auto n = parse_count(value);
      if (!n) return "activity value for " + key + " must be a non-negative integer";
      log[*m] = static_cast<std::int64_t>(*n);
    }
    out.activity = std::move(log);
  }
  return std::nullopt;
}

}  // namespace

void SelectionCriteria::validate() const {
  if (min_overlap_months < 2) throw ConfigError("min_overlap_months must be at least 2");
  if (min_term_length < 1) throw ConfigError("min_term_length must be positive");
}

Dictionary::Dictionary(std::vector<TermRecord> terms, std::vector<LoadIssue> issues, std::size_t records)
    : terms_(std::move(terms)), issues_(std::move(issues)), records_(records) {
  std::sort(terms_.begin(), terms_.end(), [](const auto& a, const auto& b) { return a.term < b.term; });
}

const TermRecord* Dictionary::find(std::string_view term) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), term,
                             [](const TermRecord& r, std::string_view t) { return r.term < t; });
  return it != terms_.end() && it->term == term ? &*it : nullptr;
}

Dictionary load_dictionary(std::istream& in, const LoadOptions& options) {
  std::vector<TermRecord> terms;
  std::unordered_map<std::string, std::size_t> index;
  std::vector<LoadIssue> issues;
  std::size_t records = 0;
  std::size_t line_no = 0;
  std::string line;

  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    ++records;
    TermRecord rec;
    if (auto err = parse_record(line, rec)) {
      issues.push_back({line_no, {}, *err});
      continue;
    }
    auto [it, inserted] = index.try_emplace(rec.term, terms.size());
    if (inserted) {
      terms.push_back(std::move(rec));
      continue;
    }
    TermRecord& merged = terms[it->second];
    merged.tags.merge(rec.tags);
    merged.upvotes += rec.upvotes;
    merged.downvotes += rec.downvotes;
    merged.definition_months.insert(merged.definition_months.end(), rec.definition_months.begin(),
                                    rec.definition_months.end());
    std::sort(merged.definition_months.begin(), merged.definition_months.end());
    if (rec.activity) {
      if (!merged.activity) {
        merged.activity = std::move(rec.activity);
      } else if (*merged.activity != *rec.activity) {
        issues.push_back({0, merged.term, "conflicting activity logs; keeping the first"});
      }
    }
  }

  if (static_cast<double>(issues.size()) > options.error_budget * static_cast<double>(records)) {
    std::string msg = "dictionary has " + std::to_string(issues.size()) + " bad records out of " +
                      std::to_string(records) + ", above the error budget";
    if (!issues.empty()) {
      const auto& first = issues.front();
      msg += "; first: " + (first.line ? "line " + std::to_string(first.line) : "term '" + first.term + "'") +
             ": " + first.message;
    }
    throw DataError(msg);
  }
  return Dictionary(std::move(terms), std::move(issues), records);
}

Dictionary load_dictionary(const std::filesystem::path& path, const LoadOptions& options) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open dictionary " + path.string());
  return load_dictionary(in, options);
}

std::set<std::string> load_word_list(std::istream& in) {
  std::set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    auto w = text::normalize_headword(line);
    if (w && !w->empty()) words.insert(std::move(*w));
  }
  return words;
}

std::set<std::string> load_word_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open word list " + path.string());
  return load_word_list(in);
}

std::vector<std::string> filter_terms(std::span<const TermRecord> terms, const SelectionCriteria& criteria) {
  std::vector<std::string> out;
  for (const auto& t : terms) {
    if (text::char_length(t.term) < criteria.min_term_length) continue;
    if (criteria.stopwords.contains(t.term)) continue;
    out.push_back(t.term);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

int activity_overlap_months(const TermRecord& term, const MonthRange& window) {
  if (!term.activity) return 0;
  int n = 0;
  for (auto it = term.activity->lower_bound(window.first); it != term.activity->end() && it->first <= window.last;
       ++it)
    ++n;
  return n;
}

std::vector<std::string> select_analysis_terms(std::span<const TermRecord> terms,
                                               const std::map<std::string, std::uint64_t>& totals,
                                               const SelectionCriteria& criteria, const MonthRange& window) {
  std::vector<std::string> out;
  for (const auto& t : terms) {
    auto it = totals.find(t.term);
    if (it == totals.end() || it->second < criteria.min_occurrences) continue;
    if (activity_overlap_months(t, window) < criteria.min_overlap_months) continue;
    out.push_back(t.term);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace lexitrend
