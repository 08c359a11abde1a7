#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace glyphpress {

inline constexpr char32_t kReplacementCodepoint = 0xFFFD;

// Decodes the codepoint starting at `pos`, advancing `pos` past it. Invalid
// sequences yield U+FFFD and consume a single byte.
inline char32_t utf8_next(std::string_view s, std::size_t& pos) {
  const auto byte = [&](std::size_t i) -> std::uint8_t {
    return static_cast<std::uint8_t>(s[i]);
  };
  const std::uint8_t b0 = byte(pos);
  if (b0 < 0x80) {
    ++pos;
    return b0;
  }
  auto cont = [&](std::size_t i) {
    return i < s.size() && (byte(i) & 0xC0) == 0x80;
  };
  if ((b0 & 0xE0) == 0xC0 && cont(pos + 1)) {
    char32_t cp = ((b0 & 0x1Fu) << 6) | (byte(pos + 1) & 0x3Fu);
    pos += 2;
    return cp < 0x80 ? kReplacementCodepoint : cp;
  }
  if ((b0 & 0xF0) == 0xE0 && cont(pos + 1) && cont(pos + 2)) {
    char32_t cp = ((b0 & 0x0Fu) << 12) | ((byte(pos + 1) & 0x3Fu) << 6) |
                  (byte(pos + 2) & 0x3Fu);
    pos += 3;
    return (cp < 0x800 || (cp >= 0xD800 && cp <= 0xDFFF)) ? kReplacementCodepoint : cp;
  }
  if ((b0 & 0xF8) == 0xF0 && cont(pos + 1) && cont(pos + 2) && cont(pos + 3)) {
    char32_t cp = ((b0 & 0x07u) << 18) | ((byte(pos + 1) & 0x3Fu) << 12) |
                  ((byte(pos + 2) & 0x3Fu) << 6) | (byte(pos + 3) & 0x3Fu);
    pos += 4;
    return (cp < 0x10000 || cp > 0x10FFFF) ? kReplacementCodepoint : cp;
  }
  ++pos;
  return kReplacementCodepoint;
}

inline void utf8_append(std::string& out, char32_t cp) {
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

inline std::size_t codepoint_count(std::string_view s) {
  std::size_t pos = 0;
  std::size_t n = 0;
  while (pos < s.size()) {
    utf8_next(s, pos);
    ++n;
  }
  return n;
}

}  // namespace glyphpress
