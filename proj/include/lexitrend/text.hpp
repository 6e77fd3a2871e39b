#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

// UTF-8 helpers and the case/character-class rules shared by headword
// normalization and text scanning.
namespace lexitrend::text {

struct DecodedChar {
  char32_t code_point;
  std::size_t length;  // bytes
};

/// Decodes one code point at `pos`. Rejects overlong forms, surrogates and
/// values above U+10FFFF.
std::optional<DecodedChar> decode(std::string_view s, std::size_t pos);

/// Decodes the code point ending right before `pos`. `s` must be valid UTF-8.
DecodedChar decode_before(std::string_view s, std::size_t pos);

bool is_valid_utf8(std::string_view s);

void append_utf8(std::string& out, char32_t cp);

/// Unicode letters (L*) and decimal digits (Nd).
bool is_alnum(char32_t cp);

/// Letters, digits and underscore: the characters a handle is made of.
inline bool is_handle_char(char32_t cp) { return cp == U'_' || is_alnum(cp); }

/// Simple (one-to-one) Unicode lowercase mapping.
char32_t to_lower(char32_t cp);

/// Lowercases `in` into `out` (cleared first). Returns false on invalid
/// UTF-8, leaving `out` unspecified.
bool lowercase_into(std::string_view in, std::string& out);

std::optional<std::string> lowercase(std::string_view in);

/// Headword normalization: lowercase, trim, and collapse every run of
/// Unicode whitespace to one ASCII space. Returns nullopt for invalid UTF-8.
std::optional<std::string> normalize_headword(std::string_view in);

/// Length in code points; `s` must be valid UTF-8.
std::size_t char_length(std::string_view s);

}  // namespace lexitrend::text
