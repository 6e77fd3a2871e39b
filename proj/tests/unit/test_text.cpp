#include <doctest.h>

#include "lexitrend/text.hpp"

using namespace lexitrend;

TEST_SUITE("text") {
  TEST_CASE("utf-8 validation") {
    CHECK(text::is_valid_utf8("plain"));
    CHECK(text::is_valid_utf8("caf\xc3\xa9 \xf0\x9f\x98\x80"));
    CHECK_FALSE(text::is_valid_utf8("\xc3"));
    CHECK_FALSE(text::is_valid_utf8("\xc0\xaf"));          // overlong
    CHECK_FALSE(text::is_valid_utf8("\xed\xa0\x80"));      // surrogate
    CHECK_FALSE(text::is_valid_utf8("\xf4\x90\x80\x80"));  // above U+10FFFF
  }

  TEST_CASE("lowercasing is simple and length-stable per code point") {
    CHECK(text::lowercase("LoL") == "lol");
    CHECK(text::lowercase("ÉCOLE Σ") == "école σ");
    CHECK(text::lowercase("İ") == "i");
    CHECK_FALSE(text::lowercase("\xff"));
  }

  TEST_CASE("character classes") {
    CHECK(text::is_alnum(U'a'));
    CHECK(text::is_alnum(U'7'));
    CHECK(text::is_alnum(U'é'));
    CHECK(text::is_alnum(U'中'));
    CHECK(text::is_alnum(U'٣'));
    CHECK_FALSE(text::is_alnum(U'_'));
    CHECK_FALSE(text::is_alnum(U'@'));
    CHECK_FALSE(text::is_alnum(U' '));
    CHECK(text::is_handle_char(U'_'));
  }

  TEST_CASE("headword normalization") {
    CHECK(text::normalize_headword("  Falling\t IN love ") == "falling in love");
    CHECK(text::normalize_headword("STAN") == "stan");
    CHECK(text::normalize_headword("   ") == "");
    CHECK(text::char_length("école") == 5);
  }
}
