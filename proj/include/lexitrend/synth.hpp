#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "lexitrend/calendar.hpp"
#include "lexitrend/series.hpp"

namespace lexitrend::synth {

/// Parameters of a synthetic two-platform corpus.
struct SynthSpec {
  MonthRange window{Month(2012, 1), Month(2013, 12)};
  std::size_t n_terms = 20;         // active terms with activity logs
  std::size_t n_filler_terms = 0;   // dictionary entries that never occur
  /// Per-term lag in [-3, 3]; missing entries are drawn at random.
  std::vector<int> lags;
  /// Fraction of active terms whose dictionary activity is anti-correlated.
  double negative_fraction = 0.25;
  double noise = 0;    // relative noise on daily counts and activity values
  double dropout = 0;  // probability a minute carries no events
  /// Whole missing days planted at the start of a month.
  std::map<Month, int> outage_days;
  int ramps_per_term = 1;
  int ramp_length = 2;
  double base_daily = 4;  // baseline mentions per day
  double ramp_gain = 5;   // per-month ramp increment, in units of base_daily
  double p_def_trending = 0.3;
  double p_def_baseline = 0.1;
  /// Approximate corpus size in bytes; 0 keeps event text minimal.
  std::uint64_t target_bytes = 0;
  std::uint64_t seed = 1;

  /// Throws ConfigError for infeasible parameters.
  void validate() const;
};

struct PlantedTerm {
  std::string term;
  int lag = 0;
  int sign = 1;
  std::set<Month> trending_months;  // matcher-side ramp months
  std::vector<Month> definition_months;
  std::map<Month, std::uint64_t> monthly_totals;  // planted mentions before dropout
  std::map<Month, std::int64_t> activity;
  std::set<std::string> tags;
};

struct GroundTruth {
  SynthSpec spec;
  std::vector<PlantedTerm> terms;
  std::vector<std::filesystem::path> event_files;
  std::filesystem::path dictionary;
  std::filesystem::path stopwords;
  std::filesystem::path lexicon;
  std::filesystem::path manifest;
  std::uint64_t event_bytes = 0;
};

/// Writes events-YYYY-MM.jsonl files, dictionary.jsonl, stopwords.txt,
/// lexicon.txt and manifest.json into `out_dir`. Deterministic in the seed.
GroundTruth generate(const SynthSpec& spec, const std::filesystem::path& out_dir);

// -------------------------------------------------- series-level generators

/// A dictionary/matcher pair over the same span where the matcher series is
/// white noise and the dictionary series repeats it `lag` months later,
/// plus Gaussian noise of the given standard deviation.
struct LagPair {
  MonthlySeries ud;
  MonthlySeries tw;
};
LagPair make_lag_pair(int months, int lag, double noise, std::mt19937_64& rng);

/// A baseline series with planted ramps (ramp_length months climbing by a
/// fixed increment, then back to baseline) and Gaussian noise with standard
/// deviation noise_frac * max of the clean series.
struct TrendSeries {
  MonthlySeries series;
  std::set<Month> planted;
};
TrendSeries make_trend_series(int months, int n_ramps, int ramp_length, double noise_frac, std::mt19937_64& rng);

/// Definition months drawn with p_trending inside `trending` and
/// p_baseline elsewhere.
std::vector<Month> plant_definitions(const MonthRange& span, const std::set<Month>& trending, double p_trending,
                                     double p_baseline, std::mt19937_64& rng);

}  // namespace lexitrend::synth
