#include <doctest.h>

#include <algorithm>
#include <chrono>
#include <random>

#include "lexitrend/error.hpp"
#include "lexitrend/matcher.hpp"
#include "lexitrend/text.hpp"
#include "oracles.hpp"

using namespace lexitrend;

namespace {

std::vector<std::string> hit_terms(const Matcher& m, const std::string& text) {
  std::vector<std::string> out;
  for (const auto& e : m.scan(text, 0)) out.push_back(m.patterns().pattern(e.term));
  return out;
}

Matcher make(std::vector<std::string> p) { return Matcher(PatternSet(std::move(p))); }

}  // namespace

TEST_SUITE("matcher") {
  TEST_CASE("pattern sets") {
    CHECK_THROWS_AS(PatternSet({"a", "a"}), ConfigError);
    CHECK_THROWS_AS(PatternSet({""}), ConfigError);
    CHECK_THROWS_AS(PatternSet({"\xff"}), ConfigError);
    CHECK_THROWS_AS(Matcher(PatternSet{}), ConfigError);
    PatternSet s({"lol", "brb"});
    CHECK(s.id_of("brb") == 1);
    CHECK(s.id_of("nope") == s.size());
  }

  TEST_CASE("trie size") {
    CHECK(make({"lol"}).state_count() == 4);
    CHECK(make({"he", "she", "his", "hers"}).state_count() == 10);
  }

  TEST_CASE("classic raw hits") {
    auto m = make({"he", "she", "his", "hers"});
    auto hits = m.raw_hits("ushers");
    REQUIRE(hits.size() == 3);
    CHECK(m.patterns().pattern(hits[0].term) == "she");
    CHECK(m.patterns().pattern(hits[1].term) == "he");
    CHECK(m.patterns().pattern(hits[2].term) == "hers");
  }

  TEST_CASE("boundary and handle rules") {
    CHECK(hit_terms(make({"love", "pokemon go"}), "I love pokemon go!") ==
          std::vector<std::string>{"love", "pokemon go"});
    CHECK(hit_terms(make({"lol"}), "@lolcat hi").empty());
    CHECK(hit_terms(make({"lol"}), "lollipop").empty());
    CHECK(hit_terms(make({"thebomb.com"}), "thebomb.com rules").size() == 1);
    CHECK(hit_terms(make({"name"}), "hi @some_name").empty());
    CHECK(hit_terms(make({"name"}), "some_name").size() == 1);
    CHECK(hit_terms(make({"bar"}), "@foo bar").size() == 1);
    CHECK(hit_terms(make({"lol"}), "@lol").empty());
    CHECK(hit_terms(make({"lol"}), "a@lol").empty());
    CHECK(hit_terms(make({"lol"}), "LOL!! lol").size() == 2);
    CHECK(hit_terms(make({"café"}), "CAFÉ au lait").size() == 1);
    CHECK(hit_terms(make({"lol"}), "élol").empty());
    CHECK(hit_terms(make({"lol"}), "lol中").empty());
  }

  TEST_CASE("overlapping terms each count") {
    auto m = make({"on fleek", "fleek"});
    CHECK(hit_terms(m, "on fleek") == std::vector<std::string>{"on fleek", "fleek"});
  }

  TEST_CASE("invalid utf-8 is a document error") {
    auto m = make({"lol"});
    CHECK_THROWS_AS(m.scan("lol \xff", 0), DataError);
    std::string scratch;
    std::vector<RawHit> hits;
    CHECK_FALSE(m.scan_into("lol \xff", scratch, hits));
  }

  TEST_CASE("oracle equivalence and span validity on random cases") {
    std::mt19937_64 rng(20240611);
    for (int i = 0; i < 2000; ++i) {
      auto c = oracle::random_matcher_case(rng);
      Matcher m{PatternSet(c.patterns)};
      auto events = m.scan(c.text, 7);
      std::vector<RawHit> got;
      for (const auto& e : events) got.push_back({e.term, e.span});
      auto expected = oracle::naive_scan(c.patterns, c.text);
      REQUIRE(expected);
      CHECK(got == *expected);
      auto normalized = *text::lowercase(c.text);
      for (const auto& e : events) {
        CHECK(e.span.start < e.span.end);
        CHECK(e.span.end <= normalized.size());
        CHECK(normalized.substr(e.span.start, e.span.end - e.span.start) == m.patterns().pattern(e.term));
        CHECK(e.event_time == 7);
      }
      CHECK(std::is_sorted(events.begin(), events.end(),
                           [](const MatchEvent& a, const MatchEvent& b) { return a.span.start < b.span.start; }));
    }
  }

  TEST_CASE("scan time is linear in text length") {
    std::vector<std::string> patterns;
    std::mt19937_64 rng(5);
    for (int i = 0; i < 2000; ++i) {
      std::string p;
      for (int j = 0; j < 3 + static_cast<int>(rng() % 6); ++j) p += static_cast<char>('a' + rng() % 26);
      patterns.push_back(p);
    }
    std::sort(patterns.begin(), patterns.end());
    patterns.erase(std::unique(patterns.begin(), patterns.end()), patterns.end());
    Matcher m{PatternSet(patterns)};
    std::string unit;
    for (int i = 0; i < 200000; ++i) unit += (rng() % 6 == 0) ? ' ' : static_cast<char>('a' + rng() % 26);
    auto time_scan = [&](const std::string& text) {
      double best = 1e30;
      for (int rep = 0; rep < 5; ++rep) {
        std::string scratch;
        std::vector<RawHit> hits;
        auto t0 = std::chrono::steady_clock::now();
        m.scan_into(text, scratch, hits);
        best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
      }
      return best;
    };
    double t1 = time_scan(unit);
    double t2 = time_scan(unit + unit);
    CHECK(t2 <= 3.0 * t1);
  }
}
