#include "lexitrend/text.hpp"

#include <unicode/uchar.h>

namespace lexitrend::text {

std::optional<DecodedChar> decode(std::string_view s, std::size_t pos) {
  if (pos >= s.size()) return std::nullopt;
  auto b0 = static_cast<unsigned char>(s[pos]);
  if (b0 < 0x80) return DecodedChar{b0, 1};

  std::size_t len;
  char32_t cp;
  char32_t min;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2, cp = b0 & 0x1F, min = 0x80;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3, cp = b0 & 0x0F, min = 0x800;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4, cp = b0 & 0x07, min = 0x10000;
  } else {
    return std::nullopt;
  }
  if (pos + len > s.size()) return std::nullopt;
  for (std::size_t i = 1; i < len; ++i) {
    auto b = static_cast<unsigned char>(s[pos + i]);
    if ((b & 0xC0) != 0x80) return std::nullopt;
    cp = (cp << 6) | (b & 0x3F);
  }
  if (cp < min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return std::nullopt;
  return DecodedChar{cp, len};
}

DecodedChar decode_before(std::string_view s, std::size_t pos) {
  std::size_t start = pos - 1;
  while (start > 0 && (static_cast<unsigned char>(s[start]) & 0xC0) == 0x80) --start;
  auto d = decode(s, start);
  return d ? *d : DecodedChar{0xFFFD, pos - start};
}

bool is_valid_utf8(std::string_view s) {
  std::size_t pos = 0;
  while (pos < s.size()) {
    if (static_cast<unsigned char>(s[pos]) < 0x80) {
      ++pos;
      continue;
    }
    auto d = decode(s, pos);
    if (!d) return false;
    pos += d->length;
  }
  return true;
}

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

bool is_alnum(char32_t cp) {
  if (cp < 0x80) return (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z') || (cp >= '0' && cp <= '9');
  return u_isalnum(static_cast<UChar32>(cp));
}

char32_t to_lower(char32_t cp) {
  if (cp < 0x80) return (cp >= 'A' && cp <= 'Z') ? cp + 32 : cp;
  return static_cast<char32_t>(u_tolower(static_cast<UChar32>(cp)));
}

bool lowercase_into(std::string_view in, std::string& out) {
  out.clear();
  out.reserve(in.size());
  std::size_t pos = 0;
  while (pos < in.size()) {
    auto b = static_cast<unsigned char>(in[pos]);
    if (b < 0x80) {
      out.push_back(static_cast<char>(b >= 'A' && b <= 'Z' ? b + 32 : b));
      ++pos;
      continue;
    }
    auto d = decode(in, pos);
    if (!d) return false;
    append_utf8(out, to_lower(d->code_point));
    pos += d->length;
  }
  return true;
}

std::optional<std::string> lowercase(std::string_view in) {
  std::string out;
  if (!lowercase_into(in, out)) return std::nullopt;
  return out;
}

std::optional<std::string> normalize_headword(std::string_view in) {
  std::string out;
  out.reserve(in.size());
  bool pending_space = false;
  std::size_t pos = 0;
  while (pos < in.size()) {
    auto d = decode(in, pos);
    if (!d) return std::nullopt;
    pos += d->length;
    if (u_isUWhiteSpace(static_cast<UChar32>(d->code_point))) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    append_utf8(out, to_lower(d->code_point));
  }
  return out;
}

std::size_t char_length(std::string_view s) {
  std::size_t n = 0;
  for (char c : s)
    if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) ++n;
  return n;
}

}  // namespace lexitrend::text
