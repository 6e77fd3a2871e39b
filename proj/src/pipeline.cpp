#include "lexitrend/pipeline.hpp"

#include <glob.h>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdio>
#include <deque>
#include <exception>
#include <fstream>
#include <mutex>
#include <json.hpp>
#include <ostream>
#include <sstream>
#include <thread>

#include "lexitrend/association.hpp"
#include "lexitrend/csv.hpp"
#include "lexitrend/error.hpp"
#include "lexitrend/matcher.hpp"
#include "lexitrend/series.hpp"
#include "lexitrend/text.hpp"
#include "lexitrend/trends.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace lexitrend {

namespace {

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

template <class T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  const char* end = value.data() + value.size();
  auto [p, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc{} || p != end) throw ConfigError("invalid value for " + key + ": '" + value + "'");
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
  if (value == "false" || value == "0" || value == "no" || value == "off") return false;
  throw ConfigError("invalid value for " + key + ": '" + value + "' (expected true or false)");
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(value);
  while (std::getline(in, item, ','))
    if (auto t = trim(item); !t.empty()) out.push_back(t);
  return out;
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) {
    if (!out.empty()) out += ',';
    out += s;
  }
  return out;
}

void require_file(const fs::path& path, const char* what) {
  if (path.empty()) throw ConfigError(std::string("missing ") + what + " path");
  std::error_code ec;
  if (!fs::is_regular_file(path, ec)) throw ConfigError(std::string(what) + " not found: " + path.string());
}

void validate_common(const RunConfig& c) {
  if (!(c.window.first < c.window.last)) throw ConfigError("window start must come before its end");
  if (c.out_dir.empty()) throw ConfigError("missing output directory");
  require_file(c.dictionary, "dictionary");
}

// Output files are written under temporary names and renamed only once all
// of them are complete; anything left over on failure is removed.
class OutputSet {
 public:
  explicit OutputSet(fs::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw ConfigError("cannot create output directory " + dir_.string() + ": " + ec.message());
  }
  OutputSet(const OutputSet&) = delete;
  OutputSet& operator=(const OutputSet&) = delete;

  ~OutputSet() {
    std::error_code ec;
    for (auto& f : files_) {
      f.stream.close();
      fs::remove(f.temp, ec);
      if (!committed_) fs::remove(f.final_path, ec);
    }
  }

  std::ofstream& open(const std::string& name) {
    auto& f = files_.emplace_back();
    f.final_path = dir_ / name;
    f.temp = dir_ / ("." + name + ".partial");
    f.stream.open(f.temp, std::ios::binary | std::ios::trunc);
    if (!f.stream) throw DataError("cannot write " + f.temp.string());
    return f.stream;
  }

  void commit() {
    for (auto& f : files_) {
      f.stream.close();
      if (f.stream.fail()) throw DataError("write failed: " + f.final_path.string());
    }
    for (auto& f : files_) {
      std::error_code ec;
      fs::rename(f.temp, f.final_path, ec);
      if (ec) throw DataError("cannot rename into " + f.final_path.string() + ": " + ec.message());
    }
    committed_ = true;
  }

 private:
  struct File {
    fs::path final_path;
    fs::path temp;
    std::ofstream stream;
  };
  fs::path dir_;
  std::deque<File> files_;
  bool committed_ = false;
};

// Runs fn(i) for i in [0, n) on `threads` workers. The first exception is
// rethrown after all workers stop.
template <class Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  std::exception_ptr error;
  std::mutex mu;
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t)
      pool.emplace_back([&] {
        for (std::size_t i; !stop && (i = next.fetch_add(1)) < n;) {
          try {
            fn(i);
          } catch (...) {
            std::lock_guard lock(mu);
            if (!error) error = std::current_exception();
            stop = true;
          }
        }
      });
  }
  if (error) std::rethrow_exception(error);
}

std::size_t levenshtein(std::string_view a, std::string_view b) {
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

Month parse_month_field(const std::string& s, const fs::path& file) {
  auto m = Month::parse(s);
  if (!m) throw DataError(file.string() + ": bad month '" + s + "'");
  return *m;
}

template <class T>
T parse_field(const std::string& s, const fs::path& file) {
  T out{};
  const char* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, out);
  if (ec != std::errc{} || p != end) throw DataError(file.string() + ": bad number '" + s + "'");
  return out;
}

// ----------------------------------------------------------- match files

struct MatchOutputs {
  std::map<std::string, std::map<Month, double>> month_totals;
  std::map<std::string, std::uint64_t> totals;
  CoverageSummary coverage;
  std::string manifest_hash;
};

MatchOutputs read_match_outputs(const fs::path& dir) {
  MatchOutputs out;
  auto counts_path = dir / "daily_counts.csv";
  auto coverage_path = dir / "coverage.csv";
  auto days_path = dir / "daily_coverage.csv";
  for (const auto& p : {counts_path, coverage_path, days_path})
    if (!fs::is_regular_file(p)) throw DataError("missing match output " + p.string() + " (run match first)");

  auto counts = csv::read_file(counts_path);
  auto c_term = counts.column("term_id"), c_day = counts.column("day"), c_count = counts.column("count");
  for (const auto& row : counts.rows) {
    auto day = Day::parse(row[c_day]);
    if (!day) throw DataError(counts_path.string() + ": bad day '" + row[c_day] + "'");
    auto n = parse_field<std::uint64_t>(row[c_count], counts_path);
    out.month_totals[row[c_term]][day->month()] += static_cast<double>(n);
    out.totals[row[c_term]] += n;
  }

  auto cov = csv::read_file(coverage_path);
  auto c_month = cov.column("month"), c_obs = cov.column("observed_minutes");
  if (cov.rows.empty()) throw DataError(coverage_path.string() + " has no months");
  for (const auto& row : cov.rows)
    out.coverage.observed_minutes[parse_month_field(row[c_month], coverage_path)] =
        parse_field<std::int64_t>(row[c_obs], coverage_path);
  out.coverage.window = {out.coverage.observed_minutes.begin()->first, out.coverage.observed_minutes.rbegin()->first};
  if (out.coverage.window.size() != static_cast<int>(out.coverage.observed_minutes.size()))
    throw DataError(coverage_path.string() + " does not cover a contiguous month range");

  auto days = csv::read_file(days_path);
  auto d_day = days.column("day"), d_obs = days.column("observed_minutes");
  for (Month m = out.coverage.window.first; m <= out.coverage.window.last; ++m) out.coverage.missing_days[m] = 0;
  for (const auto& row : days.rows) {
    auto day = Day::parse(row[d_day]);
    if (!day) throw DataError(days_path.string() + ": bad day '" + row[d_day] + "'");
    if (parse_field<std::int64_t>(row[d_obs], days_path) == 0) ++out.coverage.missing_days[day->month()];
  }

  if (std::ifstream mf(dir / "match_manifest.json"); mf) {
    try {
      auto j = json::parse(mf);
      out.manifest_hash = j.value("config_hash", "");
    } catch (const json::exception& e) {
      throw DataError("unreadable match_manifest.json: " + std::string(e.what()));
    }
  }
  return out;
}

// --------------------------------------------------------- analysis files

struct SeriesFile {
  std::map<std::string, MonthlySeries> by_term;
};

SeriesFile read_series(const fs::path& path) {
  if (!fs::is_regular_file(path)) throw DataError("missing analysis output " + path.string() + " (run analyze first)");
  auto t = csv::read_file(path);
  auto c_term = t.column("term_id"), c_month = t.column("month"), c_value = t.column("value"),
       c_prov = t.column("provenance");
  SeriesFile out;
  for (const auto& row : t.rows) {
    auto& s = out.by_term[row[c_term]];
    Month m = parse_month_field(row[c_month], path);
    if (s.empty()) {
      s.term = row[c_term];
      s.first = m;
    } else if (m != s.last() + 1) {
      throw DataError(path.string() + ": months of " + s.term + " are not contiguous");
    }
    s.values.push_back(parse_field<double>(row[c_value], path));
    auto p = parse_provenance(row[c_prov]);
    if (!p) throw DataError(path.string() + ": bad provenance '" + row[c_prov] + "'");
    s.provenance.push_back(*p);
  }
  return out;
}

std::map<std::pair<std::string, std::string>, std::set<Month>> read_trending(const fs::path& path) {
  if (!fs::is_regular_file(path)) throw DataError("missing analysis output " + path.string() + " (run analyze first)");
  auto t = csv::read_file(path);
  auto c_term = t.column("term_id"), c_platform = t.column("platform"), c_month = t.column("month");
  std::map<std::pair<std::string, std::string>, std::set<Month>> out;
  for (const auto& row : t.rows) out[{row[c_term], row[c_platform]}].insert(parse_month_field(row[c_month], path));
  return out;
}

std::optional<MonthRange> intersect(const MonthRange& a, const MonthRange& b) {
  MonthRange r{std::max(a.first, b.first), std::min(a.last, b.last)};
  if (r.empty()) return std::nullopt;
  return r;
}

void write_series(std::ostream& os, const std::vector<const MonthlySeries*>& series) {
  csv::Writer w(os);
  w.row({"term_id", "month", "value", "provenance"});
  for (const auto* s : series)
    for (Month m = s->first; m <= s->last(); ++m)
      w.row({s->term, m.to_string(), csv::format_double(s->at(m)), std::string(to_string(s->provenance_at(m)))});
}

std::vector<std::string> nearest_terms(const std::string& term, const std::vector<std::string>& known) {
  std::vector<std::pair<std::size_t, std::string>> scored;
  for (const auto& k : known) scored.emplace_back(levenshtein(term, k), k);
  std::sort(scored.begin(), scored.end());
  std::vector<std::string> out;
  for (std::size_t i = 0; i < scored.size() && i < 5; ++i) out.push_back(scored[i].second);
  return out;
}

}  // namespace

// ---------------------------------------------------------------- config

void RunConfig::set(const std::string& raw_key, const std::string& raw_value) {
  std::string key = trim(raw_key);
  std::replace(key.begin(), key.end(), '_', '-');
  const std::string value = trim(raw_value);

  if (key == "window") {
    auto w = MonthRange::parse(value);
    if (!w) throw ConfigError("invalid window '" + value + "' (expected YYYY-MM:YYYY-MM)");
    window = *w;
  } else if (key == "events") {
    events_glob = value;
  } else if (key == "dict" || key == "dictionary") {
    dictionary = value;
  } else if (key == "stopwords") {
    stopwords = value;
  } else if (key == "lexicon") {
    lexicon = value;
  } else if (key == "out") {
    out_dir = value;
  } else if (key == "min-occurrences") {
    criteria.min_occurrences = parse_number<std::uint64_t>(key, value);
  } else if (key == "min-overlap-months") {
    criteria.min_overlap_months = parse_number<int>(key, value);
  } else if (key == "min-term-length") {
    criteria.min_term_length = parse_number<std::size_t>(key, value);
  } else if (key == "k-min") {
    k_min = parse_number<int>(key, value);
  } else if (key == "k-max") {
    k_max = parse_number<int>(key, value);
  } else if (key == "alpha") {
    alpha = parse_number<double>(key, value);
    if (!(alpha >= 0 && alpha <= 1)) throw ConfigError("alpha must be in [0, 1]");
  } else if (key == "alpha-trend") {
    alpha_trend = parse_number<double>(key, value);
    if (!(alpha_trend >= 0 && alpha_trend <= 1)) throw ConfigError("alpha-trend must be in [0, 1]");
  } else if (key == "pelt-penalty") {
    if (value == "auto") {
      pelt_penalty.reset();
    } else {
      pelt_penalty = parse_number<double>(key, value);
      if (!(*pelt_penalty > 0)) throw ConfigError("pelt-penalty must be positive");
    }
  } else if (key == "ccf-mode") {
    auto m = parse_ccf_mode(value);
    if (!m) throw ConfigError("invalid ccf-mode '" + value + "' (expected per-lag or global-moments)");
    ccf_mode = *m;
  } else if (key == "count-per-doc") {
    count_per_doc = parse_bool(key, value);
  } else if (key == "lang") {
    language = value;
  } else if (key == "time-keys") {
    format.time_keys = split_list(value);
    if (format.time_keys.empty()) throw ConfigError("time-keys must name at least one key");
  } else if (key == "text-key") {
    format.text_key = value;
  } else if (key == "lang-key") {
    format.language_key = value;
  } else if (key == "error-budget") {
    error_budget = parse_number<double>(key, value);
    if (!(error_budget >= 0 && error_budget <= 1)) throw ConfigError("error-budget must be in [0, 1]");
  } else if (key == "support-floor") {
    support_floor = parse_number<std::uint64_t>(key, value);
  } else if (key == "log-base") {
    log_base = value == "e" ? 0.0 : parse_number<double>(key, value);
    if (log_base != 0 && !(log_base > 1)) throw ConfigError("log-base must be e or a number > 1");
  } else if (key == "max-missing-days") {
    max_missing_days = parse_number<int>(key, value);
  } else if (key == "seed") {
    seed = parse_number<std::uint64_t>(key, value);
  } else if (key == "threads") {
    threads = parse_number<unsigned>(key, value);
    if (threads == 0) throw ConfigError("threads must be at least 1");
  } else {
    throw ConfigError("unknown config key '" + raw_key + "'");
  }
}

void RunConfig::load_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::string line;
  for (int n = 1; std::getline(in, line); ++n) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    if (trim(line).empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(path.string() + ":" + std::to_string(n) + ": expected key = value");
    set(line.substr(0, eq), line.substr(eq + 1));
  }
}

std::map<std::string, std::string> RunConfig::snapshot() const {
  auto num = [](double v) { return csv::format_double(v); };
  return {
      {"window", window.to_string()},
      {"events", events_glob},
      {"dict", dictionary.string()},
      {"stopwords", stopwords.string()},
      {"lexicon", lexicon.string()},
      {"min-occurrences", std::to_string(criteria.min_occurrences)},
      {"min-overlap-months", std::to_string(criteria.min_overlap_months)},
      {"min-term-length", std::to_string(criteria.min_term_length)},
      {"k-min", std::to_string(k_min)},
      {"k-max", std::to_string(k_max)},
      {"alpha", num(alpha)},
      {"alpha-trend", num(alpha_trend)},
      {"pelt-penalty", pelt_penalty ? num(*pelt_penalty) : "auto"},
      {"ccf-mode", std::string(to_string(ccf_mode))},
      {"count-per-doc", count_per_doc ? "true" : "false"},
      {"lang", language},
      {"time-keys", join(format.time_keys)},
      {"text-key", format.text_key},
      {"lang-key", format.language_key},
      {"error-budget", num(error_budget)},
      {"support-floor", std::to_string(support_floor)},
      {"log-base", log_base == 0 ? "e" : num(log_base)},
      {"max-missing-days", std::to_string(max_missing_days)},
      {"seed", std::to_string(seed)},
  };
}

std::string RunConfig::hash() const {
  std::string text;
  for (const auto& [k, v] : snapshot()) text += k + "=" + v + "\n";
  return hex64(fnv1a64(text));
}

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t h) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::uint64_t hash_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read " + path.string());
  std::uint64_t h = 14695981039346656037ull;
  std::vector<char> buf(1 << 20);
  while (in) {
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    h = fnv1a64(std::string_view(buf.data(), static_cast<std::size_t>(in.gcount())), h);
  }
  if (in.bad()) throw DataError("read error on " + path.string());
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::vector<fs::path> expand_glob(const std::string& pattern) {
  glob_t g{};
  int rc = ::glob(pattern.c_str(), 0, nullptr, &g);
  std::vector<fs::path> out;
  if (rc == 0)
    for (std::size_t i = 0; i < g.gl_pathc; ++i) out.emplace_back(g.gl_pathv[i]);
  globfree(&g);
  if (rc != 0 && rc != GLOB_NOMATCH) throw ConfigError("cannot expand glob '" + pattern + "'");
  std::sort(out.begin(), out.end());
  return out;
}

// ----------------------------------------------------------------- match

MatchSummary cmd_match(const RunConfig& config) {
  validate_common(config);
  if (!config.stopwords.empty()) require_file(config.stopwords, "stopwords");
  if (config.events_glob.empty()) throw ConfigError("no input files: events glob is empty");
  auto files = expand_glob(config.events_glob);
  if (files.empty()) throw ConfigError("no input files match '" + config.events_glob + "'");

  SelectionCriteria criteria = config.criteria;
  if (!config.stopwords.empty()) criteria.stopwords = load_word_list(config.stopwords);
  auto dict = load_dictionary(config.dictionary, LoadOptions{config.error_budget});
  auto patterns = filter_terms(dict.terms(), criteria);
  if (patterns.empty()) throw DataError("no dictionary terms survive the length and stopword filters");

  PatternSet set(patterns);
  Matcher matcher(set);
  IngestOptions options{config.window, config.format, config.count_per_doc, config.threads};
  auto agg = ingest_stream(files, matcher, keep_language(config.language), options);

  OutputSet out(config.out_dir);
  {
    auto& os = out.open("daily_counts.csv");
    csv::Writer w(os);
    w.row({"term_id", "day", "count"});
    // entries() orders by term id, which follows the sorted pattern list
    for (const auto& e : agg.counts.entries())
      w.row({set.pattern(e.term), e.day.to_string(), std::to_string(e.count)});
  }
  {
    auto& os = out.open("coverage.csv");
    csv::Writer w(os);
    w.row({"month", "observed_minutes", "expected_minutes"});
    for (Month m = config.window.first; m <= config.window.last; ++m)
      w.row({m.to_string(), std::to_string(agg.coverage.observed_minutes(m)),
             std::to_string(MinuteCoverage::expected_minutes(m))});
  }
  {
    auto& os = out.open("daily_coverage.csv");
    csv::Writer w(os);
    w.row({"day", "observed_minutes"});
    for (Day d = config.window.first.first_day(); d < (config.window.last + 1).first_day(); d = d + 1)
      w.row({d.to_string(), std::to_string(agg.coverage.observed_minutes(d))});
  }
  {
    json inputs = json::array();
    for (const auto& f : files) inputs.push_back({{"path", f.string()}, {"fnv1a64", hex64(hash_file(f))}});
    json manifest = {
        {"config_hash", config.hash()},
        {"config", config.snapshot()},
        {"inputs",
         {{"events", inputs},
          {"dictionary", {{"path", config.dictionary.string()}, {"fnv1a64", hex64(hash_file(config.dictionary))}}},
          {"stopwords", config.stopwords.empty()
                            ? json(nullptr)
                            : json{{"path", config.stopwords.string()},
                                   {"fnv1a64", hex64(hash_file(config.stopwords))}}}}},
        {"dictionary",
         {{"records", dict.record_count()}, {"terms", dict.size()}, {"issues", dict.issues().size()},
          {"patterns", patterns.size()}}},
        {"stats",
         {{"lines", agg.stats.lines},
          {"events", agg.stats.events},
          {"malformed_lines", agg.stats.malformed_lines},
          {"out_of_window", agg.stats.out_of_window},
          {"filtered_out", agg.stats.filtered_out},
          {"invalid_utf8", agg.stats.invalid_utf8},
          {"matches", agg.stats.matches}}},
    };
    out.open("match_manifest.json") << manifest.dump(2) << '\n';
  }
  out.commit();
  return {files.size(), patterns.size(), agg.stats};
}

// --------------------------------------------------------------- analyze

namespace {

struct TermWork {
  const TermRecord* record = nullptr;
  std::optional<MonthlySeries> tw;
  std::optional<MonthlySeries> ud;
  std::optional<CorrelationResult> corr;
  std::optional<MonthRange> overlap;
  std::optional<TrendReport> trend_tw;
  std::optional<TrendReport> trend_ud;
  std::string excluded;
};

void analyze_term(TermWork& w, const MatchOutputs& m, const RunConfig& config, const LagOptions& lag) {
  const auto& term = w.record->term;
  std::map<Month, double> totals;
  for (Month mo = config.window.first; mo <= config.window.last; ++mo) totals[mo] = 0;
  if (auto it = m.month_totals.find(term); it != m.month_totals.end())
    for (const auto& [mo, v] : it->second)
      if (config.window.contains(mo)) totals[mo] = v;

  try {
    auto corrected = apply_correction(term, totals, m.coverage);
    w.tw = daily_average(impute_missing(corrected, m.coverage, config.max_missing_days));
  } catch (const DegenerateSeries& e) {
    w.excluded = "no_observed_months";
    return;
  }
  w.ud = activity_series(*w.record, config.window);
  if (w.ud->empty()) {
    w.excluded = "no_activity";
    return;
  }
  w.overlap = intersect(w.tw->span(), w.ud->span());

  std::string reason;
  w.corr = correlate_term(*w.ud, *w.tw, lag, &reason);
  if (!w.corr) w.excluded = reason;

  if (w.overlap) {
    w.trend_tw = detect_trends(w.tw->slice(*w.overlap), Platform::twitter, config.pelt_penalty);
    w.trend_ud = detect_trends(w.ud->slice(*w.overlap), Platform::ud, config.pelt_penalty);
  }
}

json welch_json(const WelchTest& t, double alpha) {
  if (!t.defined) return {{"defined", false}};
  return {{"defined", true}, {"t", t.t_stat}, {"df", t.df}, {"p_value", t.p_value}, {"significant", t.p_value < alpha}};
}

}  // namespace

AnalyzeSummary cmd_analyze(const RunConfig& config) {
  validate_common(config);
  if (!config.lexicon.empty()) require_file(config.lexicon, "lexicon");
  config.criteria.validate();
  if (config.k_min > config.k_max) throw ConfigError("k-min must not exceed k-max");

  auto matched = read_match_outputs(config.out_dir);
  if (matched.coverage.window != config.window)
    throw ConfigError("analysis window " + config.window.to_string() + " differs from the match window " +
                      matched.coverage.window.to_string());

  auto dict = load_dictionary(config.dictionary, LoadOptions{config.error_budget});
  auto selected = select_analysis_terms(dict.terms(), matched.totals, config.criteria, config.window);
  if (selected.size() < 2) {
    std::size_t by_occ = 0, by_overlap = 0;
    for (const auto& t : dict.terms()) {
      auto it = matched.totals.find(t.term);
      if (it != matched.totals.end() && it->second >= config.criteria.min_occurrences) ++by_occ;
      if (activity_overlap_months(t, config.window) >= config.criteria.min_overlap_months) ++by_overlap;
    }
    throw DataError("only " + std::to_string(selected.size()) + " term(s) selected, need at least 2 (" +
                    std::to_string(dict.size()) + " dictionary terms, " + std::to_string(matched.totals.size()) +
                    " matched, " + std::to_string(by_occ) + " with >= " +
                    std::to_string(config.criteria.min_occurrences) + " occurrences, " + std::to_string(by_overlap) +
                    " with >= " + std::to_string(config.criteria.min_overlap_months) + " activity months)");
  }

  LagOptions lag{config.k_min, config.k_max, config.criteria.min_overlap_months, config.ccf_mode};
  std::vector<TermWork> work(selected.size());
  for (std::size_t i = 0; i < selected.size(); ++i) work[i].record = dict.find(selected[i]);
  parallel_for(work.size(), config.threads, [&](std::size_t i) { analyze_term(work[i], matched, config, lag); });

  std::vector<CorrelationResult> results;
  std::vector<const TermRecord*> result_records;
  for (auto& w : work)
    if (w.corr) {
      results.push_back(*w.corr);
      result_records.push_back(w.record);
    }
  assign_q_values(results, config.alpha);
  auto histogram = categorize(results, config.alpha);

  AnalyzeSummary summary;
  summary.selected = selected.size();
  summary.analyzed = results.size();
  summary.histogram = histogram;
  for (auto c : {Category::positive, Category::negative, Category::none}) summary.categories[c] = 0;
  for (const auto& r : results) ++summary.categories[r.category];

  std::vector<std::set<std::string>> tags;
  std::vector<Category> groups;
  std::vector<std::string> names;
  std::vector<int> lags;
  for (std::size_t i = 0; i < results.size(); ++i) {
    tags.push_back(result_records[i]->tags);
    groups.push_back(results[i].category);
    names.push_back(results[i].term);
    lags.push_back(results[i].best_lag);
  }
  auto pmi = pmi_tags(tags, groups, PmiOptions{config.support_floor, config.log_base});
  std::vector<LexiconCoverage> lexicon;
  if (!config.lexicon.empty()) lexicon = lexicon_coverage(names, groups, lags, load_word_list(config.lexicon));

  std::vector<GridTerm> grid_tw, grid_ud;
  for (const auto& w : work)
    if (w.overlap && w.trend_tw && w.trend_ud) {
      grid_tw.push_back({w.record->term, *w.overlap, w.record->definition_months, w.trend_tw->trending_months});
      grid_ud.push_back({w.record->term, *w.overlap, w.record->definition_months, w.trend_ud->trending_months});
    }
  auto cont_ud = contingency(grid_ud, Platform::ud);
  auto cont_tw = contingency(grid_tw, Platform::twitter);

  const std::string hash = config.hash();
  OutputSet out(config.out_dir);
  {
    std::vector<const MonthlySeries*> tw, ud;
    for (const auto& w : work)
      if (w.tw && w.ud) {
        tw.push_back(&*w.tw);
        ud.push_back(&*w.ud);
      }
    write_series(out.open("series_twitter.csv"), tw);
    write_series(out.open("series_ud.csv"), ud);
  }
  {
    csv::Writer w(out.open("correlations.csv"));
    w.row({"term_id", "best_lag", "r_best", "p_value", "q_value", "category", "overlap_len"});
    for (const auto& r : results)
      w.row({r.term, std::to_string(r.best_lag), csv::format_double(r.r_best), csv::format_double(r.p_value),
             csv::format_double(r.q_value), std::string(to_string(r.category)), std::to_string(r.overlap_len)});
  }
  {
    csv::Writer w(out.open("lag_histogram.csv"));
    w.row({"lag", "category", "count"});
    for (int k = config.k_min; k <= config.k_max; ++k)
      for (auto c : {Category::positive, Category::negative, Category::none}) {
        auto it = histogram.find({k, c});
        w.row({std::to_string(k), std::string(to_string(c)), std::to_string(it == histogram.end() ? 0 : it->second)});
      }
  }
  {
    csv::Writer w(out.open("excluded.csv"));
    w.row({"term_id", "reason"});
    for (const auto& t : work)
      if (!t.excluded.empty()) {
        w.row({t.record->term, t.excluded});
        ++summary.excluded;
      }
  }
  {
    csv::Writer w(out.open("tag_pmi.csv"));
    w.row({"tag", "group", "pmi", "joint", "tag_total", "group_total"});
    for (const auto& a : pmi)
      w.row({a.tag, std::string(to_string(a.group)), csv::format_double(a.pmi), std::to_string(a.joint_count),
             std::to_string(a.tag_count), std::to_string(a.group_count)});
  }
  if (!config.lexicon.empty()) {
    csv::Writer w(out.open("lexicon_coverage.csv"));
    w.row({"group", "lag_bucket", "fraction", "n"});
    for (const auto& c : lexicon)
      w.row({c.group, c.lag_bucket, csv::format_double(c.defined_fraction()), std::to_string(c.n_terms)});
  }
  {
    csv::Writer seg(out.open("segments.csv"));
    seg.row({"term_id", "platform", "seg_start", "seg_end", "slope", "trending", "imputed_only"});
    for (const auto& t : work)
      for (const auto* rep : {&t.trend_ud, &t.trend_tw})
        if (*rep)
          for (const auto& s : (*rep)->segments)
            seg.row({t.record->term, std::string(to_string((*rep)->platform)), s.start.to_string(), s.end.to_string(),
                     csv::format_double(s.slope), s.trending ? "1" : "0", s.imputed_only ? "1" : "0"});
  }
  {
    csv::Writer w(out.open("trending_months.csv"));
    w.row({"term_id", "platform", "month"});
    for (const auto& t : work)
      for (const auto* rep : {&t.trend_ud, &t.trend_tw})
        if (*rep)
          for (Month m : (*rep)->trending_months)
            w.row({t.record->term, std::string(to_string((*rep)->platform)), m.to_string()});
  }
  {
    csv::Writer w(out.open("contingency.csv"));
    w.row({"platform", "quantity", "value", "p_value"});
    for (const auto* c : {&cont_ud, &cont_tw}) {
      std::string p(to_string(c->platform));
      auto pv = [](const WelchTest& t) { return t.defined ? csv::format_double(t.p_value) : std::string(); };
      w.row({p, "p(d|u)", csv::format_optional(c->p_d_given_u), pv(c->d_test)});
      w.row({p, "p(d|~u)", csv::format_optional(c->p_d_given_not_u), pv(c->d_test)});
      w.row({p, "p(u|d)", csv::format_optional(c->p_u_given_d), pv(c->u_test)});
      w.row({p, "p(u|~d)", csv::format_optional(c->p_u_given_not_d), pv(c->u_test)});
    }
  }
  {
    json hist = json::array();
    for (const auto& [key, n] : histogram)
      hist.push_back({{"lag", key.first}, {"category", std::string(to_string(key.second))}, {"count", n}});
    json cont = json::object();
    for (const auto* c : {&cont_ud, &cont_tw})
      cont[std::string(to_string(c->platform))] = {
          {"n", {{"d0u0", c->n[0][0]}, {"d0u1", c->n[0][1]}, {"d1u0", c->n[1][0]}, {"d1u1", c->n[1][1]}}},
          {"d_test", welch_json(c->d_test, config.alpha_trend)},
          {"u_test", welch_json(c->u_test, config.alpha_trend)},
      };
    json s = {
        {"config_hash", hash},
        {"match_config_hash", matched.manifest_hash},
        {"config", config.snapshot()},
        {"terms",
         {{"dictionary", dict.size()},
          {"matched", matched.totals.size()},
          {"selected", summary.selected},
          {"analyzed", summary.analyzed},
          {"excluded", summary.excluded}}},
        {"categories",
         {{"positive", summary.categories[Category::positive]},
          {"negative", summary.categories[Category::negative]},
          {"none", summary.categories[Category::none]}}},
        {"lag_histogram", hist},
        {"contingency", cont},
    };
    out.open("summary.json") << s.dump(2) << '\n';
  }
  out.commit();
  return summary;
}

// -------------------------------------------------------------- plotdata

namespace {

struct PlotInputs {
  MonthlySeries tw;
  MonthlySeries ud;
  MonthRange overlap;
  std::set<Month> tw_trending;
  std::set<Month> ud_trending;
};

PlotInputs load_plot_inputs(const RunConfig& config, const std::string& raw_term) {
  if (config.out_dir.empty()) throw ConfigError("missing output directory");
  auto tw = read_series(config.out_dir / "series_twitter.csv");
  auto ud = read_series(config.out_dir / "series_ud.csv");
  auto trending = read_trending(config.out_dir / "trending_months.csv");

  std::string term = text::normalize_headword(raw_term).value_or(raw_term);
  auto t = tw.by_term.find(term);
  auto u = ud.by_term.find(term);
  std::optional<MonthRange> overlap;
  if (t != tw.by_term.end() && u != ud.by_term.end()) overlap = intersect(t->second.span(), u->second.span());
  if (!overlap) {
    std::vector<std::string> known;
    for (const auto& [name, s] : tw.by_term)
      if (ud.by_term.count(name)) known.push_back(name);
    std::string msg = "term '" + raw_term + "' was not analyzed";
    auto near = nearest_terms(term, known);
    if (!near.empty()) {
      msg += "; nearest analyzed terms:";
      for (const auto& n : near) msg += " " + n;
    }
    throw DataError(msg);
  }
  return {t->second, u->second, *overlap, trending[{term, "twitter"}], trending[{term, "ud"}]};
}

std::vector<std::string> normalized_column(const MonthlySeries& s, const MonthRange& span) {
  std::vector<std::string> out(static_cast<std::size_t>(span.size()));
  try {
    auto n = normalize(s, span);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = csv::format_double(n.values[i]);
  } catch (const DegenerateSeries&) {
    // constant over the span: no z-scores, columns stay empty
  }
  return out;
}

}  // namespace

void cmd_plotdata(const RunConfig& config, const std::string& term, std::ostream& os) {
  auto in = load_plot_inputs(config, term);
  auto tw_norm = normalized_column(in.tw, in.overlap);
  auto ud_norm = normalized_column(in.ud, in.overlap);
  csv::Writer w(os);
  w.row({"month", "ud_value", "twitter_value", "ud_norm", "twitter_norm", "ud_trending", "twitter_trending"});
  std::size_t i = 0;
  for (Month m = in.overlap.first; m <= in.overlap.last; ++m, ++i)
    w.row({m.to_string(), csv::format_double(in.ud.at(m)), csv::format_double(in.tw.at(m)), ud_norm[i], tw_norm[i],
           in.ud_trending.count(m) ? "1" : "0", in.tw_trending.count(m) ? "1" : "0"});
}

void cmd_plotdata_platform(const RunConfig& config, const std::string& term, const std::string& platform,
                           std::ostream& os) {
  if (platform != "ud" && platform != "twitter")
    throw ConfigError("invalid platform '" + platform + "' (expected ud or twitter)");
  auto in = load_plot_inputs(config, term);
  const auto& s = platform == "ud" ? in.ud : in.tw;
  const auto& trending = platform == "ud" ? in.ud_trending : in.tw_trending;
  csv::Writer w(os);
  w.row({"month", "value", "trending_flag"});
  for (Month m = in.overlap.first; m <= in.overlap.last; ++m)
    w.row({m.to_string(), csv::format_double(s.at(m)), trending.count(m) ? "1" : "0"});
}

}  // namespace lexitrend
