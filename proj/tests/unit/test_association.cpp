#include <doctest.h>

#include <cmath>

#include "lexitrend/association.hpp"
#include "lexitrend/error.hpp"

using namespace lexitrend;

TEST_SUITE("association") {
  TEST_CASE("pmi from counts") {
    // p(x,y) = 0.02, p(x) = p(y) = 0.1
    CHECK(std::fabs(pmi_from_counts(20, 100, 100, 1000) - std::log(2.0)) < 1e-12);
    // tag only inside a group holding half the terms
    CHECK(std::fabs(pmi_from_counts(30, 30, 500, 1000) - std::log(2.0)) < 1e-12);
    // independence
    CHECK(std::fabs(pmi_from_counts(10, 100, 100, 1000)) < 1e-12);
    CHECK(std::fabs(pmi_from_counts(20, 100, 100, 1000, 2.0) - 1.0) < 1e-12);
    // symmetric in its marginals
    CHECK(pmi_from_counts(7, 40, 90, 500) == pmi_from_counts(7, 90, 40, 500));
  }

  TEST_CASE("pmi over tagged terms") {
    // 10 terms: 5 positive carry #meme, 5 uncorrelated carry #slang; one
    // uncorrelated term also carries #meme.
    std::vector<std::set<std::string>> tags;
    std::vector<Category> groups;
    for (int i = 0; i < 5; ++i) {
      tags.push_back({"#meme"});
      groups.push_back(Category::positive);
    }
    for (int i = 0; i < 5; ++i) {
      tags.push_back(i == 0 ? std::set<std::string>{"#slang", "#meme"} : std::set<std::string>{"#slang"});
      groups.push_back(Category::none);
    }
    auto out = pmi_tags(tags, groups, PmiOptions{1, 0});
    REQUIRE(out.size() == 1);  // only the positive group has members, #slang never joins it
    CHECK(out[0].tag == "#meme");
    CHECK(out[0].group == Category::positive);
    CHECK(out[0].joint_count == 5);
    CHECK(out[0].tag_count == 6);
    CHECK(out[0].group_count == 5);
    CHECK(out[0].total == 10);
    CHECK(std::fabs(out[0].pmi - std::log(5.0 * 10 / (6 * 5))) < 1e-12);
    CHECK(pmi_tags(tags, groups, PmiOptions{6, 0}).empty());
  }

  TEST_CASE("results are recomputable and ordered") {
    std::vector<std::set<std::string>> tags;
    std::vector<Category> groups;
    const char* pool[] = {"#a", "#b", "#c", "#d"};
    for (int i = 0; i < 200; ++i) {
      std::set<std::string> t;
      for (int j = 0; j < 4; ++j)
        if ((i * (j + 3)) % (j + 2) == 0) t.insert(pool[j]);
      tags.push_back(t);
      groups.push_back(i % 3 == 0 ? Category::positive : i % 3 == 1 ? Category::negative : Category::none);
    }
    auto out = pmi_tags(tags, groups, {});
    REQUIRE_FALSE(out.empty());
    for (std::size_t i = 0; i < out.size(); ++i) {
      const auto& a = out[i];
      CHECK(a.joint_count <= std::min(a.tag_count, a.group_count));
      CHECK(std::min(a.tag_count, a.group_count) <= a.total);
      CHECK(std::fabs(a.pmi - pmi_from_counts(a.joint_count, a.tag_count, a.group_count, a.total)) < 1e-12);
      if (i > 0 && out[i - 1].group == a.group) CHECK(out[i - 1].pmi >= a.pmi);
    }
    CHECK(out.front().group == Category::positive);
  }

  TEST_CASE("more unrelated terms raise pmi at fixed joint count") {
    double before = pmi_from_counts(10, 40, 50, 200);
    double after = pmi_from_counts(10, 40, 50, 400);
    CHECK(after > before);
  }

  TEST_CASE("lexicon coverage") {
    std::vector<std::string> terms = {"a1", "a2", "a3", "b1", "c1"};
    std::vector<Category> groups = {Category::positive, Category::positive, Category::positive, Category::negative,
                                    Category::none};
    std::vector<int> lags = {0, 0, 0, -2, 3};
    auto table = lexicon_coverage(terms, groups, lags, {"a1", "a2", "c1"});
    REQUIRE(table.size() == 16);
    auto cell = [&](const std::string& g, const std::string& b) {
      for (const auto& c : table)
        if (c.group == g && c.lag_bucket == b) return c;
      FAIL("missing cell");
      return LexiconCoverage{};
    };
    CHECK(cell("positive", "t=0").defined == 2);
    CHECK(cell("positive", "t=0").n_terms == 3);
    CHECK(cell("positive", "t=0").defined_fraction() == doctest::Approx(2.0 / 3));
    CHECK(cell("negative", "t<0").defined_fraction() == 0.0);
    CHECK(cell("none", "t>0").defined_fraction() == 1.0);
    CHECK(cell("all", "all").defined == 3);
    CHECK(cell("all", "all").n_terms == 5);
    CHECK(cell("positive", "t<0").n_terms == 0);
    // "all" cells aggregate their parts
    for (const char* g : {"positive", "none", "negative"}) {
      std::uint64_t d = 0, n = 0;
      for (const char* b : {"t<0", "t=0", "t>0"}) {
        d += cell(g, b).defined;
        n += cell(g, b).n_terms;
      }
      CHECK(cell(g, "all").defined == d);
      CHECK(cell(g, "all").n_terms == n);
    }

    for (const auto& c : lexicon_coverage(terms, groups, lags, {"a1", "a2", "a3", "b1", "c1"}))
      if (c.n_terms) CHECK(c.defined_fraction() == 1.0);
    for (const auto& c : lexicon_coverage(terms, groups, lags, {"zzz"})) CHECK(c.defined_fraction() == 0.0);
    CHECK_THROWS_AS(lexicon_coverage(terms, groups, lags, {}), ConfigError);
  }
}
