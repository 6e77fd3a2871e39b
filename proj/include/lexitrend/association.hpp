#pragma once

#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "lexitrend/correlation.hpp"

namespace lexitrend {

struct TagAssociation {
  std::string tag;
  Category group = Category::none;
  double pmi = 0;
  std::uint64_t joint_count = 0;
  std::uint64_t tag_count = 0;
  std::uint64_t group_count = 0;
  std::uint64_t total = 0;
};

struct PmiOptions {
  /// Pairs seen on fewer terms than this are not reported.
  std::uint64_t support_floor = 5;
  /// Logarithm base; 0 selects the natural log.
  double log_base = 0;
};

/// log(p(x,y) / (p(x) p(y))) with every probability estimated as a count
/// over `total` terms.
double pmi_from_counts(std::uint64_t joint, std::uint64_t tag_count, std::uint64_t group_count,
                       std::uint64_t total, double log_base = 0);

/// PMI between each tag and the positive and negative groups. Probabilities
/// are taken over all terms, the uncorrelated group included, with a tag
/// counted at most once per term. Results are grouped positive-first and
/// sorted by descending PMI within a group.
std::vector<TagAssociation> pmi_tags(std::span<const std::set<std::string>> term_tags,
                                     std::span<const Category> groups, const PmiOptions& options = {});

/// One cell of the reference-lexicon coverage table.
struct LexiconCoverage {
  std::string group;       // positive, none, negative, all
  std::string lag_bucket;  // t<0, t=0, t>0, all
  std::uint64_t defined = 0;
  std::uint64_t n_terms = 0;

  /// defined / n_terms; 0 for an empty cell.
  double defined_fraction() const {
    return n_terms ? static_cast<double>(defined) / static_cast<double>(n_terms) : 0.0;
  }
};

/// 4x4 table (groups + all by lag-sign buckets + all), row-major in the
/// order listed on LexiconCoverage. Throws ConfigError for an empty lexicon.
std::vector<LexiconCoverage> lexicon_coverage(std::span<const std::string> terms, std::span<const Category> groups,
                                              std::span<const int> lags, const std::set<std::string>& lexicon);

}  // namespace lexitrend
