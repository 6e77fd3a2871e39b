#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lexitrend/calendar.hpp"
#include "lexitrend/dictionary.hpp"
#include "lexitrend/error.hpp"
#include "lexitrend/ingest.hpp"

namespace lexitrend {

enum class Provenance { observed, corrected, imputed };

std::string_view to_string(Provenance p);
std::optional<Provenance> parse_provenance(std::string_view s);

/// Month-indexed values over a contiguous span starting at `first`.
struct MonthlySeries {
  std::string term;
  Month first;
  std::vector<double> values;
  std::vector<Provenance> provenance;

  int size() const { return static_cast<int>(values.size()); }
  bool empty() const { return values.empty(); }
  Month last() const { return first + (size() - 1); }
  bool contains(Month m) const { return !empty() && first <= m && m <= last(); }
  double at(Month m) const { return values[static_cast<std::size_t>(m - first)]; }
  Provenance provenance_at(Month m) const { return provenance[static_cast<std::size_t>(m - first)]; }
  MonthRange span() const { return {first, last()}; }

  /// The part of the series inside `range` (possibly empty).
  MonthlySeries slice(const MonthRange& range) const;
};

/// Monthly minute coverage as needed by correction and imputation.
struct CoverageSummary {
  MonthRange window{};
  std::map<Month, std::int64_t> observed_minutes;
  /// Days of the month with no observed minute at all.
  std::map<Month, int> missing_days;

  static std::int64_t expected_minutes(Month m) { return m.minutes(); }
  static CoverageSummary from(const MinuteCoverage& coverage);
};

/// Thrown for series that cannot be normalized or imputed.
class DegenerateSeries : public DataError {
 public:
  using DataError::DataError;
};

/// Sum of daily counts per window month (months without counts are 0).
std::map<Month, double> month_totals(const DailyCounts& daily, TermId term, const MonthRange& window);

/// Average daily count per window month: month total / days in month.
std::map<Month, double> monthly_average(const DailyCounts& daily, TermId term, const MonthRange& window);

/// Expected over observed minutes, or nullopt when nothing was observed in
/// the month.
std::optional<double> correction_factor(const CoverageSummary& coverage, Month month);

/// round(total * C(M)) per month. Months with C != 1 are marked corrected;
/// fully unobserved months are left at 0 for imputation.
MonthlySeries apply_correction(std::string term, const std::map<Month, double>& totals,
                               const CoverageSummary& coverage);

/// Replaces months missing more than `max_missing_days` whole days with
/// the mean of the nearest unflagged month on each side (or the single
/// available one at an edge). Throws DegenerateSeries when no unflagged
/// month exists.
MonthlySeries impute_missing(const MonthlySeries& series, const CoverageSummary& coverage,
                             int max_missing_days = 14);

/// Divides each month total by its number of days.
MonthlySeries daily_average(const MonthlySeries& totals);

/// Dictionary-side series over the activity months inside `window`.
/// Interior months absent from the log count as 0.
MonthlySeries activity_series(const TermRecord& term, const MonthRange& window);

struct NormalizedSeries {
  std::string term;
  Month first;
  std::vector<double> values;
  double mean = 0;
  double stddev = 0;  // population

  /// x * stddev + mean
  std::vector<double> denormalize() const;
};

/// z-scores over `span` using population moments. Throws DegenerateSeries
/// for fewer than two months or zero variance.
NormalizedSeries normalize(const MonthlySeries& series, const MonthRange& span);

}  // namespace lexitrend
