#include "oracles.hpp"

#include <unicode/uchar.h>
#include <unicode/utf8.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <json.hpp>
#include <numeric>
#include <ostream>
#include <set>

#include "lexitrend/correlation.hpp"
#include "lexitrend/csv.hpp"
#include "lexitrend/text.hpp"
#include "lexitrend/trends.hpp"

namespace lexitrend::oracle {

namespace {

struct CodePoint {
  UChar32 cp;
  std::size_t begin;
};

// Decodes with ICU's macros; nullopt for any ill-formed sequence.
std::optional<std::vector<CodePoint>> decode_all(std::string_view s) {
  std::vector<CodePoint> out;
  const auto* p = reinterpret_cast<const std::uint8_t*>(s.data());
  int32_t len = static_cast<int32_t>(s.size());
  for (int32_t i = 0; i < len;) {
    int32_t begin = i;
    UChar32 c;
    U8_NEXT(p, i, len, c);
    if (c < 0) return std::nullopt;
    out.push_back({c, static_cast<std::size_t>(begin)});
  }
  return out;
}

bool word_char(UChar32 c) {
  return u_isalpha(c) || u_charType(c) == U_DECIMAL_DIGIT_NUMBER;
}

std::string encode(UChar32 c) {
  char buf[4];
  int32_t n = 0;
  U8_APPEND_UNSAFE(buf, n, c);
  return std::string(buf, static_cast<std::size_t>(n));
}

}  // namespace

std::optional<std::vector<RawHit>> naive_scan(const std::vector<std::string>& patterns, std::string_view raw) {
  auto decoded = decode_all(raw);
  if (!decoded) return std::nullopt;
  std::string text;
  for (const auto& c : *decoded) text += encode(u_tolower(c.cp));
  auto cps = *decode_all(text);
  std::map<std::size_t, std::size_t> index_of;  // byte offset -> code point index
  for (std::size_t i = 0; i < cps.size(); ++i) index_of[cps[i].begin] = i;
  index_of[text.size()] = cps.size();

  std::vector<RawHit> hits;
  for (TermId id = 0; id < patterns.size(); ++id) {
    const auto& pat = patterns[id];
    for (std::size_t start = 0; start + pat.size() <= text.size(); ++start) {
      if (text.compare(start, pat.size(), pat) != 0) continue;
      std::size_t end = start + pat.size();
      auto bi = index_of.find(start);
      auto ei = index_of.find(end);
      if (bi == index_of.end() || ei == index_of.end()) continue;
      std::size_t b = bi->second, e = ei->second;
      if (b > 0 && word_char(cps[b - 1].cp)) continue;
      if (e < cps.size() && word_char(cps[e].cp)) continue;
      std::size_t h = b;
      while (h > 0 && (cps[h - 1].cp == '_' || word_char(cps[h - 1].cp))) --h;
      if (h > 0 && cps[h - 1].cp == '@') continue;
      hits.push_back({id, {start, end}});
    }
  }
  std::sort(hits.begin(), hits.end(), [](const RawHit& a, const RawHit& b) {
    return std::tie(a.span.start, a.span.end, a.term) < std::tie(b.span.start, b.span.end, b.term);
  });
  return hits;
}

std::optional<double> brute_lag_pearson(const MonthlySeries& ud, const MonthlySeries& tw, int k) {
  std::map<int, double> u, t;
  for (int i = 0; i < ud.size(); ++i) u[(ud.first + i).serial()] = ud.values[static_cast<std::size_t>(i)];
  for (int i = 0; i < tw.size(); ++i) t[(tw.first + i).serial()] = tw.values[static_cast<std::size_t>(i)];
  std::vector<long double> xs, ys;
  for (const auto& [m, v] : t)
    if (auto it = u.find(m + k); it != u.end()) {
      xs.push_back(it->second);
      ys.push_back(v);
    }
  if (xs.size() < 2) return std::nullopt;
  long double n = static_cast<long double>(xs.size());
  long double mx = std::accumulate(xs.begin(), xs.end(), 0.0L) / n;
  long double my = std::accumulate(ys.begin(), ys.end(), 0.0L) / n;
  long double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx == 0 || syy == 0) return std::nullopt;
  return static_cast<double>(sxy / std::sqrt(sxx * syy));
}

std::vector<bool> bh_reference(std::span<const double> p, double alpha) {
  const std::size_t m = p.size();
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return p[a] < p[b]; });
  std::size_t cutoff = 0;
  for (std::size_t rank = 1; rank <= m; ++rank)
    if (p[order[rank - 1]] <= static_cast<double>(rank) * alpha / static_cast<double>(m)) cutoff = rank;
  std::vector<bool> reject(m, false);
  if (alpha <= 0) return reject;
  for (std::size_t rank = 1; rank <= cutoff; ++rank) reject[order[rank - 1]] = true;
  return reject;
}

double exhaustive_segmentation_cost(std::span<const double> x, double penalty, std::size_t min_segment) {
  const std::size_t n = x.size();
  auto sse = [&](std::size_t b, std::size_t e) {
    long double mean = 0;
    for (std::size_t i = b; i < e; ++i) mean += x[i];
    mean /= static_cast<long double>(e - b);
    long double s = 0;
    for (std::size_t i = b; i < e; ++i) s += (x[i] - mean) * (x[i] - mean);
    return s;
  };
  long double best = sse(0, n);
  if (n < 2) return static_cast<double>(best);
  // bit i set: a segment starts at index i + 1
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << (n - 1)); ++mask) {
    long double cost = 0;
    std::size_t begin = 0;
    bool ok = true;
    for (std::size_t i = 1; i <= n && ok; ++i) {
      bool cut = i == n || (mask >> (i - 1) & 1);
      if (!cut) continue;
      if (i - begin < min_segment) ok = false;
      cost += sse(begin, i);
      if (i < n) cost += penalty;
      begin = i;
    }
    if (ok) best = std::min(best, cost);
  }
  return static_cast<double>(best);
}

namespace {

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double fa, double fm, double fb,
                        double whole, double eps, int depth) {
  double m = (a + b) / 2, lm = (a + m) / 2, rm = (m + b) / 2;
  double flm = f(lm), frm = f(rm);
  double left = (m - a) / 6 * (fa + 4 * flm + fm);
  double right = (b - m) / 6 * (fm + 4 * frm + fb);
  if (depth <= 0 || std::fabs(left + right - whole) <= 15 * eps) return left + right + (left + right - whole) / 15;
  return adaptive_simpson(f, a, m, fa, flm, fm, left, eps / 2, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, eps / 2, depth - 1);
}

}  // namespace

double t_two_sided_quadrature(double t, double df) {
  const double c = std::exp(std::lgamma((df + 1) / 2) - std::lgamma(df / 2)) / std::sqrt(df * M_PI);
  const double a = std::fabs(t);
  // x = a + u / (1 - u) maps [0, 1) onto [a, inf)
  auto g = [&](double u) {
    if (u >= 1) return 0.0;
    double x = a + u / (1 - u);
    return c * std::pow(1 + x * x / df, -(df + 1) / 2) / ((1 - u) * (1 - u));
  };
  // Split so the adaptive rule sees the peak near u = 0.
  double total = 0;
  const double cuts[] = {0, 0.25, 0.5, 0.75, 0.9, 0.99, 1 - 1e-6, 1 - 1e-10};
  for (std::size_t i = 0; i + 1 < std::size(cuts); ++i) {
    double lo = cuts[i], hi = cuts[i + 1];
    double flo = g(lo), fhi = g(hi), fm = g((lo + hi) / 2);
    double whole = (hi - lo) / 6 * (flo + 4 * fm + fhi);
    total += adaptive_simpson(g, lo, hi, flo, fm, fhi, whole, 1e-14, 50);
  }
  return std::clamp(2 * total, 0.0, 1.0);
}

double permutation_p_value(std::span<const double> x, std::span<const double> y, int rounds, std::mt19937_64& rng) {
  auto r = [](std::span<const double> a, std::span<const double> b) {
    double ma = std::accumulate(a.begin(), a.end(), 0.0) / static_cast<double>(a.size());
    double mb = std::accumulate(b.begin(), b.end(), 0.0) / static_cast<double>(b.size());
    double sab = 0, saa = 0, sbb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      sab += (a[i] - ma) * (b[i] - mb);
      saa += (a[i] - ma) * (a[i] - ma);
      sbb += (b[i] - mb) * (b[i] - mb);
    }
    return sab / std::sqrt(saa * sbb);
  };
  const double observed = std::fabs(r(x, y));
  std::vector<double> shuffled(y.begin(), y.end());
  int extreme = 0;
  for (int i = 0; i < rounds; ++i) {
    for (std::size_t j = shuffled.size(); j > 1; --j)
      std::swap(shuffled[j - 1], shuffled[std::uniform_int_distribution<std::size_t>(0, j - 1)(rng)]);
    if (std::fabs(r(x, shuffled)) >= observed - 1e-12) ++extreme;
  }
  return (extreme + 1.0) / (rounds + 1.0);
}

MatcherCase random_matcher_case(std::mt19937_64& rng, std::size_t max_patterns, std::size_t max_chars) {
  static const std::vector<std::string> pieces = {
      "a", "b", "l", "o", "L", "O", "x", "y", "1", "7", "_", "@", " ", " ", " ", ".", "-", "'", "!", "#", ",", "é", "É",
      "ß", "ö", "Ö", "σ", "Σ", "中", "文", "😀", " ", "́", "İ", "ﬁ", "٣", "ǅ"};
  auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };

  MatcherCase c;
  std::size_t chars = pick(max_chars + 1);
  for (std::size_t i = 0; i < chars; ++i) c.text += pieces[pick(pieces.size())];

  std::string lowered = text::lowercase(c.text).value_or("");
  auto cps = *decode_all(lowered);
  std::set<std::string> seen;
  std::size_t n_patterns = 1 + pick(max_patterns);
  for (std::size_t attempt = 0; c.patterns.size() < n_patterns && attempt < 4 * max_patterns; ++attempt) {
    std::string p;
    if (!cps.empty() && pick(3) != 0) {
      // a substring of the lowered text, so matches actually happen
      std::size_t b = pick(cps.size());
      std::size_t len = 1 + pick(std::min<std::size_t>(5, cps.size() - b));
      std::size_t end = b + len < cps.size() ? cps[b + len].begin : lowered.size();
      p = lowered.substr(cps[b].begin, end - cps[b].begin);
    } else {
      std::size_t len = 1 + pick(4);
      std::string raw;
      for (std::size_t i = 0; i < len; ++i) raw += pieces[pick(pieces.size())];
      p = text::lowercase(raw).value_or("");
    }
    if (!p.empty() && seen.insert(p).second) c.patterns.push_back(p);
  }
  if (c.patterns.empty()) c.patterns.push_back("lol");
  return c;
}

// --------------------------------------------------------------- selftest

namespace {

MonthlySeries random_series(std::mt19937_64& rng, Month first, int len) {
  std::normal_distribution<double> z;
  MonthlySeries s;
  s.first = first;
  for (int i = 0; i < len; ++i) {
    s.values.push_back(z(rng));
    s.provenance.push_back(Provenance::observed);
  }
  return s;
}

struct Suite {
  std::ostream& out;
  bool all_ok = true;
  void report(const std::string& name, bool ok, const std::string& detail) {
    out << (ok ? "PASS " : "FAIL ") << name << ": " << detail << '\n';
    all_ok = all_ok && ok;
  }
};

void check_manifest(const SelftestOptions& o, Suite& suite) {
  std::ifstream in(o.manifest);
  if (!in) {
    suite.report("planted-lags", false, "cannot read " + o.manifest.string());
    return;
  }
  auto man = nlohmann::json::parse(in);
  std::map<std::string, int> planted;
  for (const auto& t : man.at("terms")) planted[t.at("term").get<std::string>()] = t.at("lag").get<int>();
  auto table = csv::read_file(o.analysis_dir / "correlations.csv");
  auto c_term = table.column("term_id"), c_lag = table.column("best_lag");
  int checked = 0, recovered = 0;
  for (const auto& row : table.rows) {
    auto it = planted.find(row[c_term]);
    if (it == planted.end()) continue;
    ++checked;
    if (std::stoi(row[c_lag]) == it->second) ++recovered;
  }
  bool ok = checked > 0 && recovered * 10 >= checked * 9;
  suite.report("planted-lags", ok,
               std::to_string(recovered) + "/" + std::to_string(checked) + " planted lags recovered");
}

}  // namespace

bool run_selftest(const SelftestOptions& o, std::ostream& out) {
  Suite suite{out};
  std::mt19937_64 rng(o.seed);
  const int rounds = std::max(1, o.rounds);

  {
    int cases = 1000 * rounds, mismatches = 0;
    for (int i = 0; i < cases; ++i) {
      auto c = random_matcher_case(rng);
      Matcher m{PatternSet(c.patterns)};
      std::string scratch;
      std::vector<RawHit> got;
      m.scan_into(c.text, scratch, got);
      std::sort(got.begin(), got.end(), [](const RawHit& a, const RawHit& b) {
        return std::tie(a.span.start, a.span.end, a.term) < std::tie(b.span.start, b.span.end, b.term);
      });
      if (got != naive_scan(c.patterns, c.text)) ++mismatches;
    }
    suite.report("matcher", mismatches == 0,
                 std::to_string(mismatches) + " mismatches in " + std::to_string(cases) + " cases");
  }
  {
    int cases = 200 * rounds, bad = 0;
    double worst = 0;
    for (int i = 0; i < cases; ++i) {
      int len = std::uniform_int_distribution<int>(12, 93)(rng);
      auto ud = random_series(rng, Month(2012, 1), len);
      auto tw = random_series(rng, Month(2012, 1), len);
      auto cc = cross_correlation(ud, tw, LagOptions{-3, 3, 2, CcfMode::per_lag_pearson});
      for (int k = -3; k <= 3; ++k) {
        auto ref = brute_lag_pearson(ud, tw, k);
        auto it = cc.by_lag.find(k);
        if (!ref || it == cc.by_lag.end()) {
          if (ref.has_value() != (it != cc.by_lag.end())) ++bad;
          continue;
        }
        worst = std::max(worst, std::fabs(*ref - it->second.r));
      }
    }
    suite.report("cross-correlation", bad == 0 && worst <= 1e-12,
                 "max |r - r_ref| = " + csv::format_double(worst) + " over " + std::to_string(cases) + " pairs");
  }
  {
    int cases = 200 * rounds, bad = 0;
    std::uniform_real_distribution<double> u;
    for (int i = 0; i < cases; ++i) {
      std::vector<double> p(std::uniform_int_distribution<std::size_t>(1, 60)(rng));
      for (auto& v : p) v = u(rng) < 0.3 ? u(rng) * 1e-3 : u(rng);
      double alpha = i % 2 ? 0.01 : 0.05;
      if (benjamini_hochberg(p, alpha).rejected != bh_reference(p, alpha)) ++bad;
    }
    suite.report("benjamini-hochberg", bad == 0, std::to_string(bad) + " differing reject sets");
  }
  {
    int cases = 100 * rounds, bad = 0;
    for (int i = 0; i < cases; ++i) {
      std::vector<double> x(std::uniform_int_distribution<std::size_t>(4, 12)(rng));
      for (auto& v : x) v = std::uniform_int_distribution<int>(0, 9)(rng);
      for (double pen : {0.5, 1.0, 5.0, 25.0}) {
        auto r = pelt_changepoints(x, pen);
        double ref = exhaustive_segmentation_cost(x, pen);
        if (std::fabs(r.cost - ref) > 1e-9 * std::max(1.0, ref)) ++bad;
      }
    }
    suite.report("pelt", bad == 0, std::to_string(bad) + " costs differ from exhaustive search");
  }
  {
    double worst = 0;
    for (int n : {3, 5, 12, 30, 93})
      for (double r : {0.05, 0.3, 0.7, 0.95}) {
        double t = r * std::sqrt((n - 2) / (1 - r * r));
        worst = std::max(worst, std::fabs(significance(r, n) - t_two_sided_quadrature(t, n - 2)));
      }
    suite.report("significance", worst <= 1e-8, "max |p - p_quadrature| = " + csv::format_double(worst));
  }
  if (!o.manifest.empty() && !o.analysis_dir.empty()) check_manifest(o, suite);
  return suite.all_ok;
}

}  // namespace lexitrend::oracle
