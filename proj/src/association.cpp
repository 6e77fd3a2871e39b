#include "lexitrend/association.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>

#include "lexitrend/error.hpp"

namespace lexitrend {

double pmi_from_counts(std::uint64_t joint, std::uint64_t tag_count, std::uint64_t group_count,
                       std::uint64_t total, double log_base) {
  const double ratio = (static_cast<double>(joint) * static_cast<double>(total)) /
                       (static_cast<double>(tag_count) * static_cast<double>(group_count));
  const double ln = std::log(ratio);
  return log_base > 0 ? ln / std::log(log_base) : ln;
}

std::vector<TagAssociation> pmi_tags(std::span<const std::set<std::string>> term_tags,
                                     std::span<const Category> groups, const PmiOptions& options) {
  if (term_tags.size() != groups.size()) throw ConfigError("pmi_tags: one group label per term required");
  const std::uint64_t total = term_tags.size();

  std::map<std::string, std::uint64_t> tag_counts;
  std::map<std::pair<Category, std::string>, std::uint64_t> joint;
  std::map<Category, std::uint64_t> group_counts;
  for (std::size_t i = 0; i < term_tags.size(); ++i) {
    ++group_counts[groups[i]];
    for (const auto& tag : term_tags[i]) {
      ++tag_counts[tag];
      ++joint[{groups[i], tag}];
    }
  }

  std::vector<TagAssociation> out;
  for (Category g : {Category::positive, Category::negative}) {
    const std::uint64_t gc = group_counts[g];
    if (gc == 0) continue;
    std::vector<TagAssociation> rows;
    for (const auto& [tag, tc] : tag_counts) {
      auto it = joint.find({g, tag});
      if (it == joint.end() || it->second < options.support_floor || it->second == 0) continue;
      rows.push_back({tag, g, pmi_from_counts(it->second, tc, gc, total, options.log_base), it->second, tc, gc,
                      total});
    }
    std::sort(rows.begin(), rows.end(), [](const TagAssociation& a, const TagAssociation& b) {
      return a.pmi != b.pmi ? a.pmi > b.pmi : a.tag < b.tag;
    });
    out.insert(out.end(), rows.begin(), rows.end());
  }
  return out;
}

std::vector<LexiconCoverage> lexicon_coverage(std::span<const std::string> terms, std::span<const Category> groups,
                                              std::span<const int> lags, const std::set<std::string>& lexicon) {
  if (lexicon.empty()) throw ConfigError("reference lexicon is empty");
  if (terms.size() != groups.size() || terms.size() != lags.size())
    throw ConfigError("lexicon_coverage: terms, groups and lags must align");

  static constexpr std::array<const char*, 4> kGroups{"positive", "none", "negative", "all"};
  static constexpr std::array<const char*, 4> kBuckets{"t<0", "t=0", "t>0", "all"};
  std::array<std::array<LexiconCoverage, 4>, 4> cells;
  for (std::size_t g = 0; g < 4; ++g)
    for (std::size_t b = 0; b < 4; ++b) cells[g][b] = {kGroups[g], kBuckets[b], 0, 0};

  for (std::size_t i = 0; i < terms.size(); ++i) {
    std::size_t g = groups[i] == Category::positive ? 0 : groups[i] == Category::none ? 1 : 2;
    std::size_t b = lags[i] < 0 ? 0 : lags[i] == 0 ? 1 : 2;
    const bool defined = lexicon.contains(terms[i]);
    for (std::size_t gg : {g, std::size_t{3}})
      for (std::size_t bb : {b, std::size_t{3}}) {
        ++cells[gg][bb].n_terms;
        if (defined) ++cells[gg][bb].defined;
      }
  }

  std::vector<LexiconCoverage> out;
  for (const auto& row : cells) out.insert(out.end(), row.begin(), row.end());
  return out;
}

}  // namespace lexitrend
