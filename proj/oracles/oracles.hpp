#pragma once

// Slow, direct reference implementations used to cross-check the library.
// They share only the UTF-8 decoding conventions with it.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "lexitrend/matcher.hpp"
#include "lexitrend/series.hpp"

namespace lexitrend::oracle {

/// Every boundary-respecting, non-handle occurrence of each pattern in the
/// lowercased text, found by trying each pattern at each byte offset.
/// Sorted by (start, end, term). nullopt for invalid UTF-8.
std::optional<std::vector<RawHit>> naive_scan(const std::vector<std::string>& patterns, std::string_view text);

/// Pearson r at lag k by aligning months explicitly: pairs (ud[M+k], tw[M]).
/// nullopt when fewer than 2 pairs or either side is constant.
std::optional<double> brute_lag_pearson(const MonthlySeries& ud, const MonthlySeries& tw, int k);

/// Reject set of the BH step-up rule: find the largest rank i with
/// p_(i) <= i * alpha / m, reject ranks 1..i.
std::vector<bool> bh_reference(std::span<const double> p, double alpha);

/// Minimum penalized SSE over every segmentation with segments of at least
/// `min_segment` points. Exponential; n <= 20 or so.
double exhaustive_segmentation_cost(std::span<const double> x, double penalty, std::size_t min_segment = 2);

/// Two-sided Student t tail probability by numerical integration of the
/// density.
double t_two_sided_quadrature(double t, double df);

/// Two-sided permutation p-value for Pearson correlation with `rounds`
/// shuffles of y.
double permutation_p_value(std::span<const double> x, std::span<const double> y, int rounds, std::mt19937_64& rng);

/// Random text/pattern generator used by the matcher equivalence checks.
struct MatcherCase {
  std::vector<std::string> patterns;
  std::string text;
};
MatcherCase random_matcher_case(std::mt19937_64& rng, std::size_t max_patterns = 20, std::size_t max_chars = 500);

struct SelftestOptions {
  std::uint64_t seed = 1;
  /// Scale factor on the number of randomized cases.
  int rounds = 1;
  /// Planted-truth manifest from `synth` plus the analyze output directory
  /// of a run over that corpus; checked when both are set.
  std::filesystem::path manifest;
  std::filesystem::path analysis_dir;
};

/// Runs the built-in oracle suites, printing one line per suite. Returns
/// true when every suite passes.
bool run_selftest(const SelftestOptions& options, std::ostream& out);

}  // namespace lexitrend::oracle
