#include "lexitrend/series.hpp"

#include <algorithm>
#include <cmath>

namespace lexitrend {

std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::observed:
      return "observed";
    case Provenance::corrected:
      return "corrected";
    case Provenance::imputed:
      return "imputed";
  }
  return "?";
}

std::optional<Provenance> parse_provenance(std::string_view s) {
  if (s == "observed") return Provenance::observed;
  if (s == "corrected") return Provenance::corrected;
  if (s == "imputed") return Provenance::imputed;
  return std::nullopt;
}

MonthlySeries MonthlySeries::slice(const MonthRange& range) const {
  MonthlySeries out{term, std::max(first, range.first), {}, {}};
  if (empty()) return out;
  Month end = std::min(last(), range.last);
  for (Month m = out.first; m <= end; ++m) {
    out.values.push_back(at(m));
    out.provenance.push_back(provenance_at(m));
  }
  return out;
}

CoverageSummary CoverageSummary::from(const MinuteCoverage& coverage) {
  CoverageSummary s;
  s.window = coverage.window();
  for (Month m = s.window.first; m <= s.window.last; ++m) {
    s.observed_minutes[m] = coverage.observed_minutes(m);
    int missing = 0;
    Day d = m.first_day();
    for (int i = 0; i < m.days(); ++i)
      if (coverage.observed_minutes(d + i) == 0) ++missing;
    s.missing_days[m] = missing;
  }
  return s;
}

std::map<Month, double> month_totals(const DailyCounts& daily, TermId term, const MonthRange& window) {
  std::map<Month, double> out;
  for (Month m = window.first; m <= window.last; ++m) out[m] = 0.0;
  for (const auto& [m, n] : daily.month_totals(term))
    if (window.contains(m)) out[m] = static_cast<double>(n);
  return out;
}

std::map<Month, double> monthly_average(const DailyCounts& daily, TermId term, const MonthRange& window) {
  auto out = month_totals(daily, term, window);
  for (auto& [m, v] : out) v /= m.days();
  return out;
}

std::optional<double> correction_factor(const CoverageSummary& coverage, Month month) {
  auto it = coverage.observed_minutes.find(month);
  if (it == coverage.observed_minutes.end() || it->second <= 0) return std::nullopt;
  return static_cast<double>(CoverageSummary::expected_minutes(month)) / static_cast<double>(it->second);
}

MonthlySeries apply_correction(std::string term, const std::map<Month, double>& totals,
                               const CoverageSummary& coverage) {
  MonthlySeries out{std::move(term), {}, {}, {}};
  if (totals.empty()) return out;
  out.first = totals.begin()->first;
  Month last = totals.rbegin()->first;
  for (Month m = out.first; m <= last; ++m) {
    auto it = totals.find(m);
    double a = it == totals.end() ? 0.0 : it->second;
    auto c = correction_factor(coverage, m);
    if (!c) {
      out.values.push_back(0.0);
      out.provenance.push_back(Provenance::corrected);
    } else {
      out.values.push_back(std::round(a * *c));
      out.provenance.push_back(*c != 1.0 ? Provenance::corrected : Provenance::observed);
    }
  }
  return out;
}

MonthlySeries impute_missing(const MonthlySeries& series, const CoverageSummary& coverage, int max_missing_days) {
  const int n = series.size();
  std::vector<bool> flagged(static_cast<std::size_t>(n), false);
  bool any = false;
  for (int i = 0; i < n; ++i) {
    Month m = series.first + i;
    auto it = coverage.missing_days.find(m);
    bool missing = it != coverage.missing_days.end() ? it->second > max_missing_days
                                                     : !correction_factor(coverage, m).has_value();
    flagged[static_cast<std::size_t>(i)] = missing;
    any = any || missing;
  }
  if (!any) return series;

  MonthlySeries out = series;
  for (int i = 0; i < n; ++i) {
    if (!flagged[static_cast<std::size_t>(i)]) continue;
    std::optional<double> before, after;
    for (int j = i - 1; j >= 0; --j)
      if (!flagged[static_cast<std::size_t>(j)]) {
        before = series.values[static_cast<std::size_t>(j)];
        break;
      }
    for (int j = i + 1; j < n; ++j)
      if (!flagged[static_cast<std::size_t>(j)]) {
        after = series.values[static_cast<std::size_t>(j)];
        break;
      }
    if (!before && !after)
      throw DegenerateSeries("term '" + series.term + "': no observed month to impute " +
                             (series.first + i).to_string() + " from");
    double v = before && after ? (*before + *after) / 2.0 : (before ? *before : *after);
    out.values[static_cast<std::size_t>(i)] = v;
    out.provenance[static_cast<std::size_t>(i)] = Provenance::imputed;
  }
  return out;
}

MonthlySeries daily_average(const MonthlySeries& totals) {
  MonthlySeries out = totals;
  for (int i = 0; i < out.size(); ++i) out.values[static_cast<std::size_t>(i)] /= (out.first + i).days();
  return out;
}

MonthlySeries activity_series(const TermRecord& term, const MonthRange& window) {
  MonthlySeries out{term.term, {}, {}, {}};
  if (!term.activity) return out;
  auto lo = term.activity->lower_bound(window.first);
  auto hi = term.activity->upper_bound(window.last);
  if (lo == hi) return out;
  out.first = lo->first;
  Month last = std::prev(hi)->first;
  for (Month m = out.first; m <= last; ++m) {
    auto it = term.activity->find(m);
    out.values.push_back(it == term.activity->end() ? 0.0 : static_cast<double>(it->second));
    out.provenance.push_back(Provenance::observed);
  }
  return out;
}

std::vector<double> NormalizedSeries::denormalize() const {
  std::vector<double> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) out[i] = values[i] * stddev + mean;
  return out;
}

NormalizedSeries normalize(const MonthlySeries& series, const MonthRange& span) {
  MonthlySeries part = series.slice(span);
  if (part.size() < 2)
    throw DegenerateSeries("term '" + series.term + "': fewer than two months to normalize");
  auto [lo, hi] = std::minmax_element(part.values.begin(), part.values.end());
  if (*lo == *hi) throw DegenerateSeries("term '" + series.term + "': constant series");

  const double n = static_cast<double>(part.size());
  double mean = 0;
  for (double v : part.values) mean += v;
  mean /= n;
  double ss = 0;
  for (double v : part.values) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / n);

  NormalizedSeries out{series.term, part.first, {}, mean, sd};
  out.values.reserve(part.values.size());
  for (double v : part.values) out.values.push_back((v - mean) / sd);
  return out;
}

}  // namespace lexitrend
