#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lexitrend/series.hpp"

namespace lexitrend {

enum class Platform { ud, twitter };
std::string_view to_string(Platform p);

// ----------------------------------------------------------------- PELT

/// Sum of squared deviations from the mean of x[begin, end).
double segment_cost(std::span<const double> x, std::size_t begin, std::size_t end);

/// Total segment cost plus penalty per change point. A change point is the
/// index where a new segment starts.
double segmentation_cost(std::span<const double> x, std::span<const std::size_t> change_points, double penalty);

struct PeltResult {
  std::vector<std::size_t> change_points;  // strictly increasing, in (0, n)
  double cost = 0;                         // segment costs + penalty * #change points
  std::string reason;                      // non-empty when segmentation was skipped
};

/// Penalized optimal segmentation under the piecewise-constant-mean
/// squared-error cost, computed with PELT pruning. Segments are at least
/// `min_segment` long. Series shorter than 4 points are returned
/// unsegmented with a reason. Throws ConfigError for penalty <= 0.
PeltResult pelt_changepoints(std::span<const double> x, double penalty, std::size_t min_segment = 2);

/// 2 * sigma^2 * ln(n), with sigma estimated robustly from first
/// differences (MAD, falling back to the standard deviation).
double default_penalty(std::span<const double> x);

// ------------------------------------------------------------- segments

struct OlsFit {
  double slope = 0;
  double intercept = 0;
};

/// Least-squares line through (x0 + i, y[i]).
OlsFit ols_fit(std::span<const double> y, double x0 = 0);

struct Segment {
  Month start;
  Month end;  // inclusive
  double slope = 0;
  double intercept = 0;  // at the series' first month
  bool trending = false;
  bool single_point = false;
  bool imputed_only = false;
};

/// max(values) / 4
double trend_threshold(std::span<const double> values);

/// One OLS line per segment; a segment trends when its slope is strictly
/// greater than `tau`.
std::vector<Segment> fit_segments(const MonthlySeries& series, std::span<const std::size_t> change_points,
                                  double tau);

struct TrendReport {
  std::string term;
  Platform platform = Platform::twitter;
  std::vector<Month> change_points;
  std::vector<Segment> segments;
  std::set<Month> trending_months;
  double tau = 0;
  double penalty = 0;
};

/// Union of the month ranges of the trending segments.
std::set<Month> trending_months(const TrendReport& report);

/// PELT segmentation, OLS fits and tau = max/4 thresholding for one series.
/// Uses default_penalty when `penalty` is not given.
TrendReport detect_trends(const MonthlySeries& series, Platform platform,
                          std::optional<double> penalty = std::nullopt);

// ---------------------------------------------------------- contingency

struct WelchTest {
  bool defined = false;
  double t_stat = 0;
  double df = 0;
  double p_value = 1;
};

/// Welch's unequal-variance two-sample t-test on two 0/1 samples given as
/// success counts.
WelchTest welch_bernoulli(std::uint64_t successes_a, std::uint64_t n_a, std::uint64_t successes_b,
                          std::uint64_t n_b);

/// One term's row block of the term-month grid.
struct GridTerm {
  std::string term;
  MonthRange span;
  std::vector<Month> definition_months;
  std::set<Month> trending_months;
};

struct ContingencyStats {
  Platform platform = Platform::twitter;
  std::uint64_t n[2][2] = {{0, 0}, {0, 0}};  // n[d][u]
  std::optional<double> p_d_given_u;
  std::optional<double> p_d_given_not_u;
  std::optional<double> p_u_given_d;
  std::optional<double> p_u_given_not_d;
  WelchTest d_test;  // p(d|u) vs p(d|~u)
  WelchTest u_test;  // p(u|d) vs p(u|~d)

  std::uint64_t grid_size() const { return n[0][0] + n[0][1] + n[1][0] + n[1][1]; }
};

/// Cross-tabulates "new definition this month" (d) against "trending this
/// month" (u) over every (term, month) cell of the grid.
ContingencyStats contingency(std::span<const GridTerm> grid, Platform platform);

}  // namespace lexitrend
