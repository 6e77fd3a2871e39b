#include <doctest.h>

#include <cmath>
#include <random>

#include "lexitrend/series.hpp"

using namespace lexitrend;

namespace {

const MonthRange kYear{Month(2016, 1), Month(2016, 12)};

CoverageSummary full(const MonthRange& w) {
  CoverageSummary c;
  c.window = w;
  for (Month m = w.first; m <= w.last; ++m) {
    c.observed_minutes[m] = m.minutes();
    c.missing_days[m] = 0;
  }
  return c;
}

MonthlySeries observed(Month first, std::vector<double> v) {
  MonthlySeries s;
  s.first = first;
  s.values = std::move(v);
  s.provenance.assign(s.values.size(), Provenance::observed);
  return s;
}

}  // namespace

TEST_SUITE("series") {
  TEST_CASE("monthly averages") {
    DailyCounts d;
    Day jan = Month(2016, 1).first_day();
    for (int i = 0; i < 31; ++i) d.add(0, jan + i, 2);
    d.add(0, Month(2016, 4).first_day(), 30);
    d.add(0, Month(2016, 2).first_day() + 10, 29);
    auto avg = monthly_average(d, 0, kYear);
    CHECK(avg.at(Month(2016, 1)) == 2.0);
    CHECK(avg.at(Month(2016, 4)) == 1.0);
    CHECK(avg.at(Month(2016, 2)) == 1.0);
    CHECK(avg.at(Month(2016, 5)) == 0.0);
    CHECK(avg.size() == 12);
  }

  TEST_CASE("correction factor") {
    auto c = full(kYear);
    CHECK(correction_factor(c, Month(2016, 3)) == 1.0);
    c.observed_minutes[Month(2016, 1)] = 42000;
    CHECK(*correction_factor(c, Month(2016, 1)) == doctest::Approx(44640.0 / 42000.0).epsilon(1e-15));
    CHECK(*correction_factor(c, Month(2016, 1)) == doctest::Approx(1.062857).epsilon(1e-6));
    c.observed_minutes[Month(2016, 2)] = 0;
    CHECK_FALSE(correction_factor(c, Month(2016, 2)));
  }

  TEST_CASE("apply correction rounds month totals") {
    auto c = full(kYear);
    c.observed_minutes[Month(2016, 1)] = 42000;  // C = 1.062857...
    std::map<Month, double> totals;
    for (Month m = kYear.first; m <= kYear.last; ++m) totals[m] = 100;
    totals[Month(2016, 3)] = 0;
    auto s = apply_correction("x", totals, c);
    CHECK(s.at(Month(2016, 1)) == 106);
    CHECK(s.provenance_at(Month(2016, 1)) == Provenance::corrected);
    CHECK(s.at(Month(2016, 2)) == 100);
    CHECK(s.provenance_at(Month(2016, 2)) == Provenance::observed);
    CHECK(s.at(Month(2016, 3)) == 0);
    for (Month m = kYear.first; m <= kYear.last; ++m) CHECK(s.at(m) >= totals[m]);
  }

  TEST_CASE("imputation") {
    auto c = full(kYear);
    auto s = observed(kYear.first, {8, 10, 99, 20, 5, 5, 5, 5, 5, 5, 5, 5});
    c.missing_days[Month(2016, 3)] = 15;
    c.missing_days[Month(2016, 1)] = 20;
    c.missing_days[Month(2016, 5)] = 14;
    auto out = impute_missing(s, c);
    CHECK(out.at(Month(2016, 3)) == 15);
    CHECK(out.provenance_at(Month(2016, 3)) == Provenance::imputed);
    CHECK(out.at(Month(2016, 1)) == 10);  // edge: single neighbour
    CHECK(out.at(Month(2016, 5)) == 5);   // exactly 14 days: untouched
    CHECK(out.provenance_at(Month(2016, 5)) == Provenance::observed);
    for (std::size_t i : {1, 3, 4, 5, 6, 7, 8, 9, 10, 11}) CHECK(out.values[i] == s.values[i]);
  }

  TEST_CASE("consecutive flagged months use the nearest clean neighbours") {
    auto c = full(kYear);
    c.missing_days[Month(2016, 3)] = 31;
    c.missing_days[Month(2016, 4)] = 30;
    auto out = impute_missing(observed(kYear.first, {1, 10, 0, 0, 30, 1, 1, 1, 1, 1, 1, 1}), c);
    CHECK(out.at(Month(2016, 3)) == 20);
    CHECK(out.at(Month(2016, 4)) == 20);
  }

  TEST_CASE("nothing to impute from") {
    MonthRange one{Month(2016, 1), Month(2016, 1)};
    auto c = full(one);
    c.missing_days[Month(2016, 1)] = 31;
    CHECK_THROWS_AS(impute_missing(observed(one.first, {3}), c), DegenerateSeries);
  }

  TEST_CASE("daily average of corrected totals") {
    auto s = daily_average(observed(Month(2016, 2), {29, 62}));
    CHECK(s.values == std::vector<double>{1.0, 2.0});
  }

  TEST_CASE("activity series fills interior gaps") {
    TermRecord r{"x"};
    r.activity = ActivityLog{{Month(2015, 11), 4}, {Month(2016, 2), 7}, {Month(2016, 4), 1}};
    auto s = activity_series(r, kYear);
    CHECK(s.first == Month(2016, 2));
    CHECK(s.values == std::vector<double>{7, 0, 1});
    CHECK(activity_series(TermRecord{"y"}, kYear).empty());
  }

  TEST_CASE("normalization") {
    auto n = normalize(observed(Month(2016, 1), {1, 2, 3}), {Month(2016, 1), Month(2016, 3)});
    CHECK(n.mean == 2);
    CHECK(n.stddev == doctest::Approx(std::sqrt(2.0 / 3)).epsilon(1e-15));
    CHECK(n.values[0] == doctest::Approx(-1.224744871391589).epsilon(1e-12));
    CHECK(n.values[1] == 0);
    CHECK(n.values[2] == doctest::Approx(1.224744871391589).epsilon(1e-12));
    CHECK_THROWS_AS(normalize(observed(Month(2016, 1), {5, 5, 5}), {Month(2016, 1), Month(2016, 3)}),
                    DegenerateSeries);
    CHECK_THROWS_AS(normalize(observed(Month(2016, 1), {5}), {Month(2016, 1), Month(2016, 1)}), DegenerateSeries);
  }

  TEST_CASE("normalization properties") {
    std::mt19937_64 rng(11);
    std::lognormal_distribution<double> dist(3, 1);
    for (int t = 0; t < 100; ++t) {
      std::vector<double> v(12 + rng() % 80);
      for (auto& x : v) x = std::round(dist(rng));
      auto s = observed(Month(2012, 1), v);
      MonthRange span = s.span();
      auto n = normalize(s, span);
      double mean = 0, var = 0;
      for (double x : n.values) mean += x;
      mean /= static_cast<double>(n.values.size());
      for (double x : n.values) var += (x - mean) * (x - mean);
      var /= static_cast<double>(n.values.size());
      CHECK(std::fabs(mean) < 1e-9);
      CHECK(std::fabs(var - 1) < 1e-9);
      auto back = n.denormalize();
      for (std::size_t i = 0; i < v.size(); ++i) CHECK(std::fabs(back[i] - v[i]) < 1e-9);
      auto again = normalize(observed(Month(2012, 1), n.values), span);
      for (std::size_t i = 0; i < v.size(); ++i) CHECK(std::fabs(again.values[i] - n.values[i]) < 1e-12);
    }
  }

  TEST_CASE("slicing") {
    auto s = observed(Month(2016, 1), {1, 2, 3, 4});
    auto part = s.slice({Month(2015, 6), Month(2016, 2)});
    CHECK(part.first == Month(2016, 1));
    CHECK(part.values == std::vector<double>{1, 2});
    CHECK(s.slice({Month(2017, 1), Month(2017, 3)}).empty());
  }
}
