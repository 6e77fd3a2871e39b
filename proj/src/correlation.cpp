#include "lexitrend/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/distributions/students_t.hpp>

namespace lexitrend {

std::string_view to_string(CcfMode mode) {
  return mode == CcfMode::per_lag_pearson ? "per-lag" : "global-moments";
}

std::optional<CcfMode> parse_ccf_mode(std::string_view s) {
  if (s == "per-lag") return CcfMode::per_lag_pearson;
  if (s == "global-moments") return CcfMode::global_moments;
  return std::nullopt;
}

std::string_view to_string(LagOmission reason) {
  return reason == LagOmission::short_overlap ? "short_overlap" : "zero_variance";
}

std::string_view to_string(Category c) {
  switch (c) {
    case Category::positive:
      return "positive";
    case Category::negative:
      return "negative";
    case Category::none:
      return "none";
  }
  return "?";
}

std::optional<Category> parse_category(std::string_view s) {
  if (s == "positive") return Category::positive;
  if (s == "negative") return Category::negative;
  if (s == "none") return Category::none;
  return std::nullopt;
}

std::optional<double> pearson(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = std::min(x.size(), y.size());
  if (n < 2) return std::nullopt;
  auto [xlo, xhi] = std::minmax_element(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(n));
  auto [ylo, yhi] = std::minmax_element(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(n));
  if (*xlo == *xhi || *ylo == *yhi) return std::nullopt;

  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  return sxy / std::sqrt(sxx * syy);
}

std::pair<std::vector<double>, std::vector<double>> lag_pairs(const MonthlySeries& ud, const MonthlySeries& tw,
                                                              int k) {
  std::pair<std::vector<double>, std::vector<double>> out;
  if (ud.empty() || tw.empty()) return out;
  Month from = std::max(tw.first, ud.first - k);
  Month to = std::min(tw.last(), ud.last() - k);
  for (Month m = from; m <= to; ++m) {
    out.first.push_back(ud.at(m + k));
    out.second.push_back(tw.at(m));
  }
  return out;
}

namespace {

std::vector<double> zscores(const std::vector<double>& v) {
  const double n = static_cast<double>(v.size());
  double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
  double ss = 0;
  for (double x : v) ss += (x - mean) * (x - mean);
  double sd = std::sqrt(ss / n);
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = sd > 0 ? (v[i] - mean) / sd : 0.0;
  return out;
}

}  // namespace

CrossCorrelation cross_correlation(const MonthlySeries& ud, const MonthlySeries& tw, const LagOptions& options) {
  CrossCorrelation out;

  MonthlySeries ud_z = ud, tw_z = tw;
  if (options.mode == CcfMode::global_moments) {
    ud_z.values = zscores(ud.values);
    tw_z.values = zscores(tw.values);
  }

  for (int k = options.k_min; k <= options.k_max; ++k) {
    auto [x, y] = lag_pairs(ud, tw, k);
    const int n = static_cast<int>(x.size());
    if (n < options.min_overlap || n < 2) {
      out.omitted[k] = LagOmission::short_overlap;
      continue;
    }
    auto r = pearson(x, y);
    if (!r) {
      out.omitted[k] = LagOmission::zero_variance;
      continue;
    }
    if (options.mode == CcfMode::global_moments) {
      auto [zx, zy] = lag_pairs(ud_z, tw_z, k);
      double sum = 0;
      for (std::size_t i = 0; i < zx.size(); ++i) sum += zx[i] * zy[i];
      out.by_lag[k] = {sum, n};
    } else {
      out.by_lag[k] = {*r, n};
    }
  }
  return out;
}

namespace {

// Candidate a beats incumbent b.
bool better(int ka, double ra, int kb, double rb) {
  const double a = std::fabs(ra), b = std::fabs(rb);
  if (a != b) return a > b;
  if (std::abs(ka) != std::abs(kb)) return std::abs(ka) < std::abs(kb);
  return ka < kb;
}

}  // namespace

BestLag best_lag(const std::map<int, LagCorrelation>& by_lag) {
  std::map<int, double> r;
  for (const auto& [k, v] : by_lag) r[k] = v.r;
  return best_lag(r);
}

BestLag best_lag(const std::map<int, double>& by_lag) {
  BestLag best;
  bool first = true;
  for (const auto& [k, r] : by_lag) {
    if (first || better(k, r, best.lag, best.r)) best = {k, r};
    first = false;
  }
  return best;
}

double significance(double r, int n) {
  if (n < 3) throw DataError("significance needs at least 3 paired months, got " + std::to_string(n));
  const double a = std::fabs(r);
  if (a >= 1.0) return 0.0;
  if (a == 0.0) return 1.0;
  const double t = a * std::sqrt((n - 2) / (1.0 - r * r));
  boost::math::students_t dist(n - 2);
  return std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(dist, t)));
}

BhResult benjamini_hochberg(std::span<const double> p, double alpha) {
  const std::size_t m = p.size();
  BhResult out{std::vector<double>(m, 1.0), std::vector<bool>(m, false)};
  if (m == 0) return out;

  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return p[a] < p[b]; });

  // Largest rank i (1-based) with p_(i) <= i * alpha / m.
  std::size_t cutoff = 0;
  for (std::size_t i = m; i >= 1 && alpha > 0; --i) {
    if (p[order[i - 1]] <= static_cast<double>(i) * alpha / static_cast<double>(m)) {
      cutoff = i;
      break;
    }
  }
  for (std::size_t i = 0; i < cutoff; ++i) out.rejected[order[i]] = true;

  double running = 1.0;
  for (std::size_t i = m; i >= 1; --i) {
    const double q = static_cast<double>(m) / static_cast<double>(i) * p[order[i - 1]];
    running = std::min(running, q);
    out.q_values[order[i - 1]] = std::clamp(running, 0.0, 1.0);
  }
  return out;
}

std::optional<CorrelationResult> correlate_term(const MonthlySeries& ud, const MonthlySeries& tw,
                                                const LagOptions& options, std::string* reason) {
  auto fail = [&](std::string why) -> std::optional<CorrelationResult> {
    if (reason) *reason = std::move(why);
    return std::nullopt;
  };
  auto cc = cross_correlation(ud, tw, options);
  if (cc.by_lag.empty()) {
    bool variance = std::any_of(cc.omitted.begin(), cc.omitted.end(),
                                [](const auto& kv) { return kv.second == LagOmission::zero_variance; });
    return fail(variance ? "zero_variance" : "short_overlap");
  }
  CorrelationResult res;
  res.term = tw.term.empty() ? ud.term : tw.term;
  res.r_by_lag = cc.by_lag;
  auto best = best_lag(cc.by_lag);
  res.best_lag = best.lag;
  res.r_best = best.r;
  res.overlap_len = cc.by_lag.at(best.lag).overlap;
  if (res.overlap_len < 3) return fail("overlap_too_short_for_test");
  double r_for_test = best.r;
  if (options.mode == CcfMode::global_moments) r_for_test = std::clamp(best.r / res.overlap_len, -1.0, 1.0);
  res.p_value = significance(r_for_test, res.overlap_len);
  return res;
}

void assign_q_values(std::vector<CorrelationResult>& results, double alpha) {
  std::vector<double> p;
  p.reserve(results.size());
  for (const auto& r : results) p.push_back(r.p_value);
  auto bh = benjamini_hochberg(p, alpha);
  for (std::size_t i = 0; i < results.size(); ++i) results[i].q_value = bh.q_values[i];
}

LagHistogram categorize(std::vector<CorrelationResult>& results, double alpha) {
  LagHistogram hist;
  // alpha = 0 rejects nothing, even p = 0.
  const bool testable = alpha > 0;
  for (auto& r : results) {
    const bool significant = testable && r.q_value <= alpha;
    if (significant && r.r_best > 0)
      r.category = Category::positive;
    else if (significant && r.r_best < 0)
      r.category = Category::negative;
    else
      r.category = Category::none;
    ++hist[{r.best_lag, r.category}];
  }
  return hist;
}

}  // namespace lexitrend
