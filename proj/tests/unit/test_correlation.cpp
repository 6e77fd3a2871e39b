#include <doctest.h>

#include <cmath>
#include <random>

#include "lexitrend/correlation.hpp"
#include "lexitrend/error.hpp"
#include "lexitrend/synth.hpp"
#include "oracles.hpp"

using namespace lexitrend;

namespace {

MonthlySeries series(std::vector<double> v, Month first = Month(2012, 1)) {
  MonthlySeries s;
  s.first = first;
  s.values = std::move(v);
  s.provenance.assign(s.values.size(), Provenance::observed);
  return s;
}

MonthlySeries random_series(std::mt19937_64& rng, int n, Month first = Month(2012, 1)) {
  std::normal_distribution<double> z;
  std::vector<double> v(static_cast<std::size_t>(n));
  for (auto& x : v) x = z(rng);
  return series(v, first);
}

}  // namespace

TEST_SUITE("correlation") {
  TEST_CASE("self and anti-correlation") {
    std::mt19937_64 rng(1);
    auto s = random_series(rng, 24);
    auto neg = s;
    for (auto& v : neg.values) v = -v;
    auto cc = cross_correlation(s, s);
    CHECK(cc.by_lag.at(0).r == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(cc.by_lag.at(0).overlap == 24);
    CHECK(cross_correlation(s, neg).by_lag.at(0).r == doctest::Approx(-1.0).epsilon(1e-14));
  }

  TEST_CASE("impulses align at the lag between them") {
    std::vector<double> a(30, 0.0), b(30, 0.0);
    a[10] = 1;
    b[12] = 1;
    auto ud = series(a), tw = series(b);
    auto cc = cross_correlation(ud, tw);
    auto best = best_lag(cc.by_lag);
    CHECK(best.lag == -2);
    for (const auto& [k, v] : cc.by_lag) CHECK(v.r == doctest::Approx(*oracle::brute_lag_pearson(ud, tw, k)).epsilon(1e-12));
  }

  TEST_CASE("lag convention: positive k means the matcher series leads") {
    std::mt19937_64 rng(3);
    auto tw = random_series(rng, 40);
    auto ud = tw;
    ud.first = tw.first + 2;  // dictionary repeats the matcher series two months later
    CHECK(best_lag(cross_correlation(ud, tw).by_lag).lag == 2);
  }

  TEST_CASE("omitted lags") {
    auto ud = series({1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12});
    auto tw = series({2, 1, 4, 3, 6, 5, 8, 7, 10, 9, 12, 11});
    auto cc = cross_correlation(ud, tw);
    CHECK(cc.by_lag.size() == 1);
    CHECK(cc.omitted.at(1) == LagOmission::short_overlap);
    auto flat = series(std::vector<double>(12, 4.0));
    auto z = cross_correlation(flat, tw);
    CHECK(z.by_lag.empty());
    CHECK(z.omitted.at(0) == LagOmission::zero_variance);
    std::string reason;
    CHECK_FALSE(correlate_term(flat, tw, {}, &reason));
    CHECK(reason == "zero_variance");
  }

  TEST_CASE("best lag tie-breaks") {
    CHECK(best_lag(std::map<int, double>{{-1, 0.2}, {0, 0.9}, {1, 0.5}}).lag == 0);
    auto b = best_lag(std::map<int, double>{{0, 0.6}, {1, -0.8}});
    CHECK(b.lag == 1);
    CHECK(b.r == -0.8);
    CHECK(best_lag(std::map<int, double>{{-1, 0.7}, {1, 0.7}}).lag == -1);
    CHECK(best_lag(std::map<int, double>{{2, 0.7}, {-1, -0.7}, {1, 0.7}}).lag == -1);
  }

  TEST_CASE("significance") {
    CHECK(significance(0.0, 12) == 1.0);
    CHECK(significance(1.0, 12) == 0.0);
    CHECK(significance(-1.0, 5) == 0.0);
    CHECK_THROWS_AS(significance(0.5, 2), DataError);
    CHECK(significance(0.7, 12) == doctest::Approx(0.011257326210937495).epsilon(1e-10));
    CHECK(significance(0.3, 30) == doctest::Approx(0.10724594805795437).epsilon(1e-10));
    CHECK(significance(0.95, 5) == doctest::Approx(0.013320011010141254).epsilon(1e-10));
    CHECK(significance(-0.5, 20) == doctest::Approx(0.024769558804109703).epsilon(1e-10));
    double t = 0.7 * std::sqrt(10 / (1 - 0.49));
    CHECK(significance(0.7, 12) == doctest::Approx(oracle::t_two_sided_quadrature(t, 10)).epsilon(1e-9));
  }

  TEST_CASE("significance agrees with a permutation test") {
    // x and y built so that their sample correlation is exactly 0.7
    const int n = 12;
    std::vector<double> x(n), e(n);
    for (int i = 0; i < n; ++i) {
      x[static_cast<std::size_t>(i)] = std::sqrt(2.0) * std::erf((i + 0.5) / n * 2 - 1);
      e[static_cast<std::size_t>(i)] = std::sin(3.7 * i + 1);
    }
    auto center = [](std::vector<double>& v) {
      double m = 0;
      for (double a : v) m += a;
      m /= static_cast<double>(v.size());
      double ss = 0;
      for (double& a : v) {
        a -= m;
        ss += a * a;
      }
      for (double& a : v) a /= std::sqrt(ss);
    };
    center(x);
    center(e);
    double proj = 0;
    for (int i = 0; i < n; ++i) proj += x[static_cast<std::size_t>(i)] * e[static_cast<std::size_t>(i)];
    for (int i = 0; i < n; ++i) e[static_cast<std::size_t>(i)] -= proj * x[static_cast<std::size_t>(i)];
    center(e);
    std::vector<double> y(n);
    for (int i = 0; i < n; ++i)
      y[static_cast<std::size_t>(i)] = 0.7 * x[static_cast<std::size_t>(i)] + std::sqrt(0.51) * e[static_cast<std::size_t>(i)];
    REQUIRE(*pearson(x, y) == doctest::Approx(0.7).epsilon(1e-12));
    std::mt19937_64 rng(2024);
    double perm = oracle::permutation_p_value(x, y, 100000, rng);
    CHECK(std::fabs(perm - significance(0.7, n)) < 0.005);
  }

  TEST_CASE("benjamini-hochberg examples") {
    std::vector<double> p = {0.001, 0.008, 0.039, 0.041};
    auto r = benjamini_hochberg(p, 0.05);
    CHECK(r.rejected == std::vector<bool>{true, true, true, true});
    CHECK(r.q_values[3] == doctest::Approx(0.041));
    CHECK(r.q_values[0] == doctest::Approx(0.004));

    std::vector<double> ones(5, 1.0);
    auto none = benjamini_hochberg(ones, 0.01);
    CHECK(none.rejected == std::vector<bool>(5, false));
    CHECK(none.q_values == std::vector<double>(5, 1.0));

    std::vector<double> single = {0.01};
    CHECK(benjamini_hochberg(single, 0.01).rejected[0]);
    std::vector<double> zero = {0.0};
    CHECK_FALSE(benjamini_hochberg(zero, 0.0).rejected[0]);
  }

  TEST_CASE("benjamini-hochberg matches the reference and is monotone") {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> u;
    for (int t = 0; t < 500; ++t) {
      std::vector<double> p(1 + rng() % 50);
      for (auto& v : p) v = u(rng) < 0.4 ? u(rng) * 0.01 : u(rng);
      if (t % 7 == 0) p[0] = p.back();  // ties
      auto a = benjamini_hochberg(p, 0.01);
      CHECK(a.rejected == oracle::bh_reference(p, 0.01));
      auto b = benjamini_hochberg(p, 0.05);
      for (std::size_t i = 0; i < p.size(); ++i) {
        if (a.rejected[i]) CHECK(b.rejected[i]);
        CHECK(a.q_values[i] >= p[i]);
        CHECK(a.q_values[i] <= 1.0);
        CHECK(a.rejected[i] == (a.q_values[i] <= 0.01));
        for (std::size_t j = 0; j < p.size(); ++j)
          if (p[i] < p[j]) CHECK(a.q_values[i] <= a.q_values[j]);
      }
    }
  }

  TEST_CASE("categories") {
    std::vector<CorrelationResult> rs(3);
    rs[0].r_best = 0.95;
    rs[0].q_value = 0.001;
    rs[1].r_best = -0.7;
    rs[1].q_value = 0.3;
    rs[2].r_best = -0.7;
    rs[2].q_value = 0.005;
    rs[2].best_lag = -1;
    auto hist = categorize(rs, 0.01);
    CHECK(rs[0].category == Category::positive);
    CHECK(rs[1].category == Category::none);
    CHECK(rs[2].category == Category::negative);
    CHECK(hist.at({0, Category::positive}) == 1);
    CHECK(hist.at({-1, Category::negative}) == 1);
    categorize(rs, 0.0);
    for (const auto& r : rs) CHECK(r.category == Category::none);
  }

  TEST_CASE("per-lag r equals brute force") {
    std::mt19937_64 rng(8);
    for (int t = 0; t < 300; ++t) {
      int n = 12 + static_cast<int>(rng() % 82);
      auto ud = random_series(rng, n, Month(2012, 1) + static_cast<int>(rng() % 3));
      auto tw = random_series(rng, n);
      auto cc = cross_correlation(ud, tw, {-3, 3, 2, CcfMode::per_lag_pearson});
      for (const auto& [k, v] : cc.by_lag) {
        CHECK(std::fabs(v.r - *oracle::brute_lag_pearson(ud, tw, k)) <= 1e-12);
        CHECK(std::fabs(v.r) <= 1 + 1e-9);
      }
    }
  }

  TEST_CASE("invariance under affine maps and sign flips") {
    std::mt19937_64 rng(12);
    for (int t = 0; t < 100; ++t) {
      auto ud = random_series(rng, 36), tw = random_series(rng, 36);
      for (std::size_t i = 3; i < 36; ++i) ud.values[i] += 0.8 * tw.values[i - 3];
      auto base = correlate_term(ud, tw, {});
      REQUIRE(base);
      auto scaled = ud;
      for (auto& v : scaled.values) v = 7.5 * v + 100;
      auto s = correlate_term(scaled, tw, {});
      REQUIRE(s);
      CHECK(s->best_lag == base->best_lag);
      for (const auto& [k, v] : base->r_by_lag) CHECK(std::fabs(s->r_by_lag.at(k).r - v.r) < 1e-9);
      auto flipped = ud;
      for (auto& v : flipped.values) v = -v;
      auto f = correlate_term(flipped, tw, {});
      REQUIRE(f);
      CHECK(f->best_lag == base->best_lag);
      CHECK(f->r_best == doctest::Approx(-base->r_best).epsilon(1e-12));
      CHECK(f->p_value == doctest::Approx(base->p_value).epsilon(1e-9));
      std::vector<CorrelationResult> a = {*base}, b = {*f};
      assign_q_values(a, 0.01);
      assign_q_values(b, 0.01);
      categorize(a, 0.01);
      categorize(b, 0.01);
      if (a[0].category == Category::positive) CHECK(b[0].category == Category::negative);
      if (a[0].category == Category::negative) CHECK(b[0].category == Category::positive);
    }
  }

  TEST_CASE("global-moments mode sums z-score products") {
    auto ud = series({1, 2, 3, 4});
    auto tw = series({1, 2, 3, 4});
    auto cc = cross_correlation(ud, tw, {0, 0, 2, CcfMode::global_moments});
    CHECK(cc.by_lag.at(0).r == doctest::Approx(4.0).epsilon(1e-12));
    REQUIRE(parse_ccf_mode("global-moments"));
    CHECK_FALSE(parse_ccf_mode("fft"));
  }

  TEST_CASE("lag recovery on synthetic pairs") {
    std::mt19937_64 rng(4242);
    int hits = 0, exact = 0;
    const int trials = 300;
    for (int t = 0; t < trials; ++t) {
      int lag = static_cast<int>(rng() % 7) - 3;
      auto noisy = synth::make_lag_pair(36, lag, 0.1, rng);
      if (best_lag(cross_correlation(noisy.ud, noisy.tw).by_lag).lag == lag) ++hits;
      auto clean = synth::make_lag_pair(36, lag, 0.0, rng);
      if (best_lag(cross_correlation(clean.ud, clean.tw).by_lag).lag == lag) ++exact;
    }
    CHECK(hits >= trials * 95 / 100);
    CHECK(exact == trials);
  }
}
