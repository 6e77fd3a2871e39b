#include "lexitrend/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "lexitrend/error.hpp"

namespace lexitrend::synth {

namespace fs = std::filesystem;
using nlohmann::json;

void SynthSpec::validate() const {
  if (window.empty() || window.size() < 24) throw ConfigError("synthetic window must span at least 24 months");
  if (!(dropout >= 0 && dropout < 1)) throw ConfigError("dropout must be in [0, 1)");
  if (noise < 0) throw ConfigError("noise must be non-negative");
  if (ramp_length < 1) throw ConfigError("ramp_length must be positive");
  for (int lag : lags)
    if (lag < -3 || lag > 3) throw ConfigError("planted lags must lie in [-3, 3]");
  for (const auto& [m, days] : outage_days) {
    if (!window.contains(m)) throw ConfigError("outage month " + m.to_string() + " lies outside the window");
    if (days < 0 || days > m.days()) throw ConfigError("outage for " + m.to_string() + " exceeds the month");
  }
  // Each ramp needs its own months plus a baseline gap on either side.
  const int needed = ramps_per_term * (ramp_length + 3) + 4;
  if (ramps_per_term > 0 && needed > window.size())
    throw ConfigError("planted ramps do not fit inside the window");
  if (p_def_trending < 0 || p_def_trending > 1 || p_def_baseline < 0 || p_def_baseline > 1)
    throw ConfigError("definition probabilities must be in [0, 1]");
}

namespace {

// Start offsets of non-overlapping ramps, each at least 2 months from the
// edges and 3 months from one another.
std::vector<int> place_ramps(int months, int n_ramps, int len, std::mt19937_64& rng) {
  for (int attempt = 0; attempt < 1000; ++attempt) {
    std::vector<int> starts;
    std::uniform_int_distribution<int> pick(2, months - len - 2);
    for (int i = 0; i < n_ramps; ++i) starts.push_back(pick(rng));
    std::sort(starts.begin(), starts.end());
    bool ok = true;
    for (std::size_t i = 1; i < starts.size(); ++i)
      if (starts[i] - starts[i - 1] < len + 3) ok = false;
    if (ok) return starts;
  }
  throw ConfigError("could not place planted ramps");
}

std::string random_word(std::mt19937_64& rng, int min_len, int max_len) {
  std::uniform_int_distribution<int> len(min_len, max_len);
  std::uniform_int_distribution<int> letter('a', 'z');
  std::string w(static_cast<std::size_t>(len(rng)), 'a');
  for (char& c : w) c = static_cast<char>(letter(rng));
  return w;
}

void append_json_string(std::string& out, std::string_view s) {
  out.push_back('"');
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
}

}  // namespace

GroundTruth generate(const SynthSpec& spec, const fs::path& out_dir) {
  spec.validate();
  fs::create_directories(out_dir);
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  GroundTruth truth;
  truth.spec = spec;
  const MonthRange& window = spec.window;
  const int months = window.size();

  // Unique letter-only headwords; two-word terms for every fifth term.
  std::set<std::string> used{"is", "the", "ab"};
  auto fresh = [&](int lo, int hi) {
    for (;;) {
      auto w = random_word(rng, lo, hi);
      if (used.insert(w).second) return w;
    }
  };

  const std::vector<std::string> common_tags{"#funny", "#slang", "#internet", "#love", "#music", "#school"};
  std::vector<std::vector<double>> latent(spec.n_terms);
  for (std::size_t i = 0; i < spec.n_terms; ++i) {
    PlantedTerm t;
    t.term = i % 5 == 4 ? fresh(4, 7) + " " + fresh(4, 7) : fresh(6, 10);
    t.lag = i < spec.lags.size() ? spec.lags[i] : std::uniform_int_distribution<int>(-3, 3)(rng);
    t.sign = unit(rng) < spec.negative_fraction ? -1 : 1;

    // Latent daily intensity over the window extended by 3 months each side.
    const double b = spec.base_daily;
    std::vector<double> s(static_cast<std::size_t>(months + 6));
    for (auto& v : s) v = std::max(0.2 * b, b * (1 + 0.3 * gauss(rng)));
    for (int start : place_ramps(months, spec.ramps_per_term, spec.ramp_length, rng)) {
      for (int j = 0; j < spec.ramp_length; ++j) {
        s[static_cast<std::size_t>(start + j + 3)] = b + (j + 1) * spec.ramp_gain * b;
        t.trending_months.insert(window.first + start + j);
      }
    }
    const double s_max = *std::max_element(s.begin(), s.end());
    for (int k = 0; k < months; ++k) {
      Month m = window.first + k;
      double x = s[static_cast<std::size_t>(k + 3 - t.lag)] / s_max;
      double a = 100.0 * (t.sign > 0 ? x : 1.0 - x) + 1.0;
      if (spec.noise > 0) a *= 1.0 + spec.noise * gauss(rng);
      t.activity[m] = static_cast<std::int64_t>(std::llround(std::max(0.0, a)));
    }
    t.definition_months = plant_definitions(window, t.trending_months, spec.p_def_trending, spec.p_def_baseline, rng);
    t.tags.insert(common_tags[static_cast<std::size_t>(rng() % common_tags.size())]);
    if (unit(rng) < 0.8) t.tags.insert(t.sign > 0 ? "#meme" : "#explicit");
    latent[i].assign(s.begin() + 3, s.end() - 3);
    truth.terms.push_back(std::move(t));
  }

  // Dictionary, stopwords and lexicon.
  truth.dictionary = out_dir / "dictionary.jsonl";
  {
    std::ofstream out(truth.dictionary, std::ios::binary);
    for (const auto& t : truth.terms) {
      json rec;
      rec["term"] = t.term;
      rec["tags"] = t.tags;
      json defs = json::array();
      for (Month m : t.definition_months) defs.push_back(m.to_string());
      rec["definition_months"] = defs;
      rec["upvotes"] = rng() % 500;
      rec["downvotes"] = rng() % 100;
      json act = json::object();
      for (const auto& [m, v] : t.activity) act[m.to_string()] = v;
      rec["activity"] = act;
      out << rec.dump() << '\n';
    }
    for (std::size_t i = 0; i < spec.n_filler_terms; ++i) {
      json rec;
      rec["term"] = fresh(5, 12);
      rec["tags"] = json::array({common_tags[static_cast<std::size_t>(rng() % common_tags.size())]});
      out << rec.dump() << '\n';
    }
    for (const char* w : {"is", "the", "ab"}) out << json{{"term", w}}.dump() << '\n';
  }
  truth.stopwords = out_dir / "stopwords.txt";
  std::ofstream(truth.stopwords) << "is\nthe\nin\nme\n";
  truth.lexicon = out_dir / "lexicon.txt";
  {
    std::ofstream out(truth.lexicon);
    out << "lol\n";
    for (std::size_t i = 0; i < truth.terms.size(); i += 2) out << truth.terms[i].term << '\n';
  }

  // Event files, one per month. Only observed minutes carry an event; the
  // per-event text budget is re-aimed each month from the bytes written.
  auto observed_minutes = [&](Month m) {
    auto outage = spec.outage_days.find(m);
    int days = m.days() - (outage == spec.outage_days.end() ? 0 : std::min(outage->second, m.days()));
    return 1440.0 * days * (1 - spec.dropout);
  };
  double remaining_minutes = 0;
  for (Month m = window.first; m <= window.last; ++m) remaining_minutes += observed_minutes(m);
  double overhead_sum = 0, overhead_lines = 0;  // line bytes beyond the text budget
  std::size_t text_budget = 16;
  std::vector<std::string> filler;
  for (int i = 0; i < 4096; ++i) filler.push_back("w" + std::to_string(i));

  std::vector<std::vector<std::uint32_t>> mentions(1440);
  std::string line, text;
  for (int k = 0; k < months; ++k) {
    const Month m = window.first + k;
    fs::path file = out_dir / ("events-" + m.to_string() + ".jsonl");
    std::FILE* out = std::fopen(file.c_str(), "wb");
    if (!out) throw DataError("cannot write " + file.string());
    auto outage = spec.outage_days.find(m);
    const int dead_days = outage == spec.outage_days.end() ? 0 : outage->second;
    if (spec.target_bytes > 0) {
      const double overhead = overhead_lines > 0 ? overhead_sum / overhead_lines : 70;
      const double left = static_cast<double>(spec.target_bytes) - static_cast<double>(truth.event_bytes);
      text_budget = static_cast<std::size_t>(
          std::max<std::int64_t>(16, std::llround(left / std::max(remaining_minutes, 1.0) - overhead)));
      remaining_minutes -= observed_minutes(m);
    }

    for (int d = 0; d < m.days(); ++d) {
      const Day day = m.first_day() + d;
      for (auto& v : mentions) v.clear();
      for (std::size_t i = 0; i < truth.terms.size(); ++i) {
        double c = latent[i][static_cast<std::size_t>(k)];
        if (spec.noise > 0) c *= 1.0 + spec.noise * gauss(rng);
        auto count = static_cast<std::uint64_t>(std::llround(std::max(0.0, c)));
        truth.terms[i].monthly_totals[m] += count;
        for (std::uint64_t j = 0; j < count; ++j) mentions[rng() % 1440].push_back(static_cast<std::uint32_t>(i));
      }
      for (int minute = 0; minute < 1440; ++minute) {
        const bool dropped = d < dead_days || (spec.dropout > 0 && unit(rng) < spec.dropout);
        if (dropped) continue;
        const MinuteStamp stamp = first_minute(day) + minute;
        const int second = static_cast<int>(rng() % 60);

        text.clear();
        auto& here = mentions[static_cast<std::size_t>(minute)];
        std::size_t next_mention = 0;
        while (text.size() < text_budget || next_mention < here.size()) {
          if (!text.empty()) text.push_back(' ');
          if (next_mention < here.size() && rng() % 3 == 0) {
            text += truth.terms[here[next_mention++]].term;
          } else {
            text += filler[rng() % filler.size()];
          }
        }
        if (!truth.terms.empty() && rng() % 50 == 0) {
          const auto& decoy = truth.terms[rng() % truth.terms.size()].term;
          text += rng() % 2 ? " @" + decoy : " " + decoy + "7";
        }

        line.clear();
        if (rng() % 10 == 0) {
          line += "{\"ts\":" + std::to_string(stamp * 60 + second);
        } else {
          line += "{\"created_at\":\"" + format_timestamp(stamp);
          line.replace(line.size() - 3, 2, (second < 10 ? "0" : "") + std::to_string(second));
          line += "\"";
        }
        line += ",\"lang\":\"en\",\"text\":";
        append_json_string(line, text);
        line += "}\n";
        if (!truth.terms.empty() && rng() % 33 == 0) {
          line += "{\"created_at\":\"" + format_timestamp(stamp) + "\",\"lang\":\"id\",\"text\":";
          append_json_string(line, "nih " + truth.terms[rng() % truth.terms.size()].term);
          line += "}\n";
        }
        std::fwrite(line.data(), 1, line.size(), out);
        truth.event_bytes += line.size();
        overhead_sum += static_cast<double>(line.size()) - static_cast<double>(text_budget);
        overhead_lines += 1;
      }
    }
    std::fclose(out);
    truth.event_files.push_back(file);
  }

  truth.manifest = out_dir / "manifest.json";
  json man;
  man["seed"] = spec.seed;
  man["window"] = window.to_string();
  man["dropout"] = spec.dropout;
  man["noise"] = spec.noise;
  json outages = json::object();
  for (const auto& [m, n] : spec.outage_days) outages[m.to_string()] = n;
  man["outage_days"] = outages;
  json terms = json::array();
  for (const auto& t : truth.terms) {
    json jt;
    jt["term"] = t.term;
    jt["lag"] = t.lag;
    jt["sign"] = t.sign;
    json tm = json::array(), dm = json::array(), totals = json::object();
    for (Month mm : t.trending_months) tm.push_back(mm.to_string());
    for (Month mm : t.definition_months) dm.push_back(mm.to_string());
    for (const auto& [mm, v] : t.monthly_totals) totals[mm.to_string()] = v;
    jt["trending_months"] = tm;
    jt["definition_months"] = dm;
    jt["monthly_totals"] = totals;
    terms.push_back(jt);
  }
  man["terms"] = terms;
  std::ofstream(truth.manifest) << man.dump(1) << '\n';
  return truth;
}

LagPair make_lag_pair(int months, int lag, double noise, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> x(static_cast<std::size_t>(months + 6));
  for (auto& v : x) v = gauss(rng);
  LagPair p;
  p.ud = {"ud", Month(2012, 1), {}, {}};
  p.tw = {"tw", Month(2012, 1), {}, {}};
  for (int i = 0; i < months; ++i) {
    p.tw.values.push_back(x[static_cast<std::size_t>(i + 3)]);
    p.ud.values.push_back(x[static_cast<std::size_t>(i + 3 - lag)] + noise * gauss(rng));
  }
  p.ud.provenance.assign(p.ud.values.size(), Provenance::observed);
  p.tw.provenance.assign(p.tw.values.size(), Provenance::observed);
  return p;
}

TrendSeries make_trend_series(int months, int n_ramps, int ramp_length, double noise_frac, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  constexpr double baseline = 0.2;
  constexpr double step = 1.0;
  TrendSeries out;
  out.series = {"trend", Month(2012, 1), std::vector<double>(static_cast<std::size_t>(months), baseline), {}};
  for (int start : place_ramps(months, n_ramps, ramp_length, rng))
    for (int j = 0; j < ramp_length; ++j) {
      out.series.values[static_cast<std::size_t>(start + j)] = baseline + (j + 1) * step;
      out.planted.insert(out.series.first + start + j);
    }
  const double sigma = noise_frac * *std::max_element(out.series.values.begin(), out.series.values.end());
  for (auto& v : out.series.values) v += sigma * gauss(rng);
  out.series.provenance.assign(out.series.values.size(), Provenance::observed);
  return out;
}

std::vector<Month> plant_definitions(const MonthRange& span, const std::set<Month>& trending, double p_trending,
                                     double p_baseline, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Month> out;
  for (Month m = span.first; m <= span.last; ++m)
    if (unit(rng) < (trending.contains(m) ? p_trending : p_baseline)) out.push_back(m);
  return out;
}

}  // namespace lexitrend::synth
