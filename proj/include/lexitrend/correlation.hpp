#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lexitrend/series.hpp"

namespace lexitrend {

enum class CcfMode {
  /// Pearson correlation recomputed over each lag's overlap window.
  per_lag_pearson,
  /// Unnormalized sum of products of series z-scored over their full span.
  global_moments,
};

std::string_view to_string(CcfMode mode);
std::optional<CcfMode> parse_ccf_mode(std::string_view s);

struct LagOptions {
  int k_min = -3;
  int k_max = 3;
  int min_overlap = 12;
  CcfMode mode = CcfMode::per_lag_pearson;
};

struct LagCorrelation {
  double r = 0;
  int overlap = 0;
};

enum class LagOmission { short_overlap, zero_variance };
std::string_view to_string(LagOmission reason);

struct CrossCorrelation {
  std::map<int, LagCorrelation> by_lag;
  std::map<int, LagOmission> omitted;
};

/// Correlation between the dictionary series moved by k months and the
/// matcher series, for k in [k_min, k_max]: the pairs are
/// (ud[M + k], tw[M]). Positive k means the matcher series leads.
CrossCorrelation cross_correlation(const MonthlySeries& ud, const MonthlySeries& tw, const LagOptions& options = {});

/// The paired values used for lag k, in month order of the matcher series.
std::pair<std::vector<double>, std::vector<double>> lag_pairs(const MonthlySeries& ud, const MonthlySeries& tw,
                                                              int k);

/// Pearson correlation of two equal-length samples; nullopt when either
/// side is constant.
std::optional<double> pearson(std::span<const double> x, std::span<const double> y);

struct BestLag {
  int lag = 0;
  double r = 0;
};

/// argmax_k |r|; ties go to the smallest |k|, then to the negative lag.
BestLag best_lag(const std::map<int, LagCorrelation>& by_lag);
BestLag best_lag(const std::map<int, double>& by_lag);

/// Two-sided p-value of H0: rho = 0 from the t statistic
/// r * sqrt((n - 2) / (1 - r^2)) with n - 2 degrees of freedom. Throws
/// DataError for n < 3.
double significance(double r, int n);

struct BhResult {
  std::vector<double> q_values;
  std::vector<bool> rejected;
};

/// Benjamini-Hochberg step-up procedure. Output order matches input order.
BhResult benjamini_hochberg(std::span<const double> p_values, double alpha = 0.01);

enum class Category { positive, negative, none };
std::string_view to_string(Category c);
std::optional<Category> parse_category(std::string_view s);

struct CorrelationResult {
  std::string term;
  std::map<int, LagCorrelation> r_by_lag;
  int best_lag = 0;
  double r_best = 0;
  int overlap_len = 0;  // at best_lag
  double p_value = 1;
  double q_value = 1;
  Category category = Category::none;
};

/// Runs cross_correlation, best_lag and significance for one term. Returns
/// nullopt with `reason` set when the term cannot be tested.
std::optional<CorrelationResult> correlate_term(const MonthlySeries& ud, const MonthlySeries& tw,
                                                const LagOptions& options, std::string* reason = nullptr);

/// Counts per (lag, category).
using LagHistogram = std::map<std::pair<int, Category>, int>;

/// Fills q-values with Benjamini-Hochberg across all results.
void assign_q_values(std::vector<CorrelationResult>& results, double alpha);

/// Sets each category from the sign of r_best when q <= alpha and returns
/// the lag histogram.
LagHistogram categorize(std::vector<CorrelationResult>& results, double alpha = 0.01);

}  // namespace lexitrend
