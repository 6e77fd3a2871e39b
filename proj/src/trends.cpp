#include "lexitrend/trends.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/distributions/students_t.hpp>

namespace lexitrend {

std::string_view to_string(Platform p) { return p == Platform::ud ? "ud" : "twitter"; }

double segment_cost(std::span<const double> x, std::size_t begin, std::size_t end) {
  if (end <= begin) return 0;
  double mean = 0;
  for (std::size_t i = begin; i < end; ++i) mean += x[i];
  mean /= static_cast<double>(end - begin);
  double sse = 0;
  for (std::size_t i = begin; i < end; ++i) sse += (x[i] - mean) * (x[i] - mean);
  return sse;
}

double segmentation_cost(std::span<const double> x, std::span<const std::size_t> change_points, double penalty) {
  double total = 0;
  std::size_t begin = 0;
  for (std::size_t cp : change_points) {
    total += segment_cost(x, begin, cp) + penalty;
    begin = cp;
  }
  return total + segment_cost(x, begin, x.size());
}

PeltResult pelt_changepoints(std::span<const double> x, double penalty, std::size_t min_segment) {
  if (!(penalty > 0)) throw ConfigError("PELT penalty must be positive");
  min_segment = std::max<std::size_t>(min_segment, 1);
  const std::size_t n = x.size();
  PeltResult result;
  if (n < 4 || n < 2 * min_segment) {
    result.reason = "series_too_short";
    result.cost = segment_cost(x, 0, n);
    return result;
  }

  // Prefix sums of centred values keep the closed-form cost accurate.
  double centre = 0;
  for (double v : x) centre += v;
  centre /= static_cast<double>(n);
  std::vector<long double> s1(n + 1, 0), s2(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const long double v = x[i] - centre;
    s1[i + 1] = s1[i] + v;
    s2[i + 1] = s2[i] + v * v;
  }
  auto cost = [&](std::size_t a, std::size_t b) {
    const long double sum = s1[b] - s1[a];
    const long double c = (s2[b] - s2[a]) - sum * sum / static_cast<long double>(b - a);
    return static_cast<double>(std::max<long double>(c, 0));
  };

  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> best(n + 1, inf);
  std::vector<std::size_t> prev(n + 1, 0);
  best[0] = -penalty;

  struct Candidate {
    std::size_t pos;
    std::size_t drop_at;  // removed once t reaches this
  };
  std::vector<Candidate> live;
  constexpr std::size_t never = std::numeric_limits<std::size_t>::max();

  for (std::size_t t = min_segment; t <= n; ++t) {
    const std::size_t newest = t - min_segment;
    if (best[newest] < inf) live.push_back({newest, never});
    std::erase_if(live, [t](const Candidate& c) { return c.drop_at <= t; });

    double f = inf;
    std::size_t arg = 0;
    for (const auto& c : live) {
      const double v = best[c.pos] + cost(c.pos, t) + penalty;
      if (v < f) {
        f = v;
        arg = c.pos;
      }
    }
    best[t] = f;
    prev[t] = arg;
    if (f == inf) continue;
    // s can never beat t as a last change point for any end T with
    // T - t >= min_segment; until then it must stay.
    for (auto& c : live)
      if (c.drop_at == never && best[c.pos] + cost(c.pos, t) >= f) c.drop_at = t + min_segment;
  }

  for (std::size_t t = n; prev[t] > 0; t = prev[t]) result.change_points.push_back(prev[t]);
  std::reverse(result.change_points.begin(), result.change_points.end());
  result.cost = segmentation_cost(x, result.change_points, penalty);
  return result;
}

double default_penalty(std::span<const double> x) {
  const std::size_t n = x.size();
  if (n < 3) return 1.0;
  std::vector<double> d(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) d[i] = x[i + 1] - x[i];

  auto median = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size();
    return m % 2 ? v[m / 2] : 0.5 * (v[m / 2 - 1] + v[m / 2]);
  };
  const double med = median(d);
  std::vector<double> dev(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) dev[i] = std::fabs(d[i] - med);
  double sigma = 1.4826 * median(dev) / std::sqrt(2.0);
  if (!(sigma > 0)) {
    double mean = 0;
    for (double v : d) mean += v;
    mean /= static_cast<double>(d.size());
    double ss = 0;
    for (double v : d) ss += (v - mean) * (v - mean);
    sigma = std::sqrt(ss / static_cast<double>(d.size())) / std::sqrt(2.0);
  }
  if (!(sigma > 0)) return 1.0;
  return 2.0 * sigma * sigma * std::log(static_cast<double>(n));
}

OlsFit ols_fit(std::span<const double> y, double x0) {
  const std::size_t n = y.size();
  if (n == 0) return {};
  if (n == 1) return {0.0, y[0]};
  const double xbar = x0 + (static_cast<double>(n) - 1) / 2.0;
  double ybar = 0;
  for (double v : y) ybar += v;
  ybar /= static_cast<double>(n);
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x0 + static_cast<double>(i) - xbar;
    sxy += dx * (y[i] - ybar);
    sxx += dx * dx;
  }
  const double slope = sxy / sxx;
  return {slope, ybar - slope * xbar};
}

double trend_threshold(std::span<const double> values) {
  if (values.empty()) return 0;
  return *std::max_element(values.begin(), values.end()) / 4.0;
}

std::vector<Segment> fit_segments(const MonthlySeries& series, std::span<const std::size_t> change_points,
                                  double tau) {
  std::vector<Segment> out;
  const std::size_t n = series.values.size();
  std::size_t begin = 0;
  for (std::size_t k = 0; k <= change_points.size(); ++k) {
    const std::size_t end = k < change_points.size() ? change_points[k] : n;
    if (end <= begin) continue;
    std::span<const double> part(series.values.data() + begin, end - begin);
    Segment seg;
    seg.start = series.first + static_cast<int>(begin);
    seg.end = series.first + static_cast<int>(end - 1);
    seg.single_point = end - begin == 1;
    auto fit = ols_fit(part, static_cast<double>(begin));
    seg.slope = seg.single_point ? 0.0 : fit.slope;
    seg.intercept = fit.intercept;
    seg.trending = !seg.single_point && seg.slope > tau;
    seg.imputed_only = std::all_of(series.provenance.begin() + static_cast<std::ptrdiff_t>(begin),
                                   series.provenance.begin() + static_cast<std::ptrdiff_t>(end),
                                   [](Provenance p) { return p == Provenance::imputed; });
    out.push_back(seg);
    begin = end;
  }
  return out;
}

std::set<Month> trending_months(const TrendReport& report) {
  std::set<Month> out;
  for (const auto& seg : report.segments)
    if (seg.trending)
      for (Month m = seg.start; m <= seg.end; ++m) out.insert(m);
  return out;
}

TrendReport detect_trends(const MonthlySeries& series, Platform platform, std::optional<double> penalty) {
  TrendReport report;
  report.term = series.term;
  report.platform = platform;
  if (series.empty()) return report;
  report.penalty = penalty ? *penalty : default_penalty(series.values);
  auto pelt = pelt_changepoints(series.values, report.penalty);
  for (std::size_t cp : pelt.change_points) report.change_points.push_back(series.first + static_cast<int>(cp));
  report.tau = trend_threshold(series.values);
  report.segments = fit_segments(series, pelt.change_points, report.tau);
  report.trending_months = trending_months(report);
  return report;
}

WelchTest welch_bernoulli(std::uint64_t successes_a, std::uint64_t n_a, std::uint64_t successes_b,
                          std::uint64_t n_b) {
  WelchTest out;
  if (n_a < 2 || n_b < 2) return out;
  const double na = static_cast<double>(n_a), nb = static_cast<double>(n_b);
  const double pa = static_cast<double>(successes_a) / na;
  const double pb = static_cast<double>(successes_b) / nb;
  const double va = pa * (1 - pa) * na / (na - 1) / na;
  const double vb = pb * (1 - pb) * nb / (nb - 1) / nb;
  const double se2 = va + vb;
  out.defined = true;
  if (se2 <= 0) {
    out.t_stat = pa == pb ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), pa - pb);
    out.p_value = pa == pb ? 1.0 : 0.0;
    return out;
  }
  out.t_stat = (pa - pb) / std::sqrt(se2);
  out.df = se2 * se2 / (va * va / (na - 1) + vb * vb / (nb - 1));
  boost::math::students_t dist(out.df);
  out.p_value = std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(out.t_stat))));
  return out;
}

ContingencyStats contingency(std::span<const GridTerm> grid, Platform platform) {
  ContingencyStats s;
  s.platform = platform;
  for (const auto& term : grid) {
    std::set<Month> defined(term.definition_months.begin(), term.definition_months.end());
    for (Month m = term.span.first; m <= term.span.last; ++m) {
      const int d = defined.contains(m) ? 1 : 0;
      const int u = term.trending_months.contains(m) ? 1 : 0;
      ++s.n[d][u];
    }
  }
  auto ratio = [](std::uint64_t num, std::uint64_t den) -> std::optional<double> {
    if (den == 0) return std::nullopt;
    return static_cast<double>(num) / static_cast<double>(den);
  };
  const auto n_u = s.n[0][1] + s.n[1][1];
  const auto n_not_u = s.n[0][0] + s.n[1][0];
  const auto n_d = s.n[1][0] + s.n[1][1];
  const auto n_not_d = s.n[0][0] + s.n[0][1];
  s.p_d_given_u = ratio(s.n[1][1], n_u);
  s.p_d_given_not_u = ratio(s.n[1][0], n_not_u);
  s.p_u_given_d = ratio(s.n[1][1], n_d);
  s.p_u_given_not_d = ratio(s.n[0][1], n_not_d);
  s.d_test = welch_bernoulli(s.n[1][1], n_u, s.n[1][0], n_not_u);
  s.u_test = welch_bernoulli(s.n[1][1], n_d, s.n[0][1], n_not_d);
  return s;
}

}  // namespace lexitrend
