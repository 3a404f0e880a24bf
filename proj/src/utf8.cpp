#include "bitalign/utf8.hpp"

namespace bitalign::utf8 {

namespace {

// Decodes one scalar value at pos. Returns its byte length, or 0 on invalid
// input. Strict: overlongs, surrogates and values past U+10FFFF are invalid.
std::size_t decode_one(std::string_view s, std::size_t pos, char32_t& out) {
  const auto b0 = static_cast<unsigned char>(s[pos]);
  if (b0 < 0x80) {
    out = b0;
    return 1;
  }
  auto cont = [&](std::size_t i) {
    return pos + i < s.size() &&
           (static_cast<unsigned char>(s[pos + i]) & 0xC0) == 0x80;
  };
  auto cb = [&](std::size_t i) {
    return static_cast<char32_t>(static_cast<unsigned char>(s[pos + i]) & 0x3F);
  };
  if ((b0 & 0xE0) == 0xC0) {
    if (!cont(1)) return 0;
    const char32_t cp = ((b0 & 0x1Fu) << 6) | cb(1);
    if (cp < 0x80) return 0;  // overlong
    out = cp;
    return 2;
  }
  if ((b0 & 0xF0) == 0xE0) {
    if (!cont(1) || !cont(2)) return 0;
    const char32_t cp = ((b0 & 0x0Fu) << 12) | (cb(1) << 6) | cb(2);
    if (cp < 0x800) return 0;
    if (cp >= 0xD800 && cp <= 0xDFFF) return 0;  // surrogate
    out = cp;
    return 3;
  }
  if ((b0 & 0xF8) == 0xF0) {
    if (!cont(1) || !cont(2) || !cont(3)) return 0;
    const char32_t cp =
        ((b0 & 0x07u) << 18) | (cb(1) << 12) | (cb(2) << 6) | cb(3);
    if (cp < 0x10000 || cp > 0x10FFFF) return 0;
    out = cp;
    return 4;
  }
  return 0;
}

}  // namespace

bool validate(std::string_view bytes, std::size_t* bad_offset) {
  std::size_t pos = 0;
  char32_t cp;
  while (pos < bytes.size()) {
    const std::size_t n = decode_one(bytes, pos, cp);
    if (n == 0) {
      if (bad_offset) *bad_offset = pos;
      return false;
    }
    pos += n;
  }
  return true;
}

std::size_t count_codepoints(std::string_view s) {
  std::size_t count = 0;
  for (char c : s) {
    if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) ++count;
  }
  return count;
}

bool is_space(char32_t cp) {
  switch (cp) {
    case 0x0009: case 0x000A: case 0x000B: case 0x000C: case 0x000D:
    case 0x0020: case 0x0085: case 0x00A0: case 0x1680:
    case 0x2028: case 0x2029: case 0x202F: case 0x205F: case 0x3000:
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200A;
  }
}

std::string_view trim(std::string_view s) {
  std::size_t begin = 0;
  while (begin < s.size()) {
    char32_t cp;
    const std::size_t n = decode_one(s, begin, cp);
    if (n == 0 || !is_space(cp)) break;
    begin += n;
  }
  // Walk forward remembering the end of the last non-space run; UTF-8 cannot
  // be decoded backwards without care, so one forward pass is simplest.
  std::size_t end = begin;
  std::size_t pos = begin;
  while (pos < s.size()) {
    char32_t cp;
    const std::size_t n = decode_one(s, pos, cp);
    if (n == 0) {
      pos += 1;
      end = pos;
      continue;
    }
    pos += n;
    if (!is_space(cp)) end = pos;
  }
  return s.substr(begin, end - begin);
}

std::vector<std::string_view> split_spaces(std::string_view s) {
  std::vector<std::string_view> tokens;
  std::size_t pos = 0;
  std::size_t tok_begin = 0;
  bool in_token = false;
  while (pos < s.size()) {
    char32_t cp;
    std::size_t n = decode_one(s, pos, cp);
    if (n == 0) {
      cp = 0xFFFD;
      n = 1;
    }
    if (is_space(cp)) {
      if (in_token) {
        tokens.push_back(s.substr(tok_begin, pos - tok_begin));
        in_token = false;
      }
    } else if (!in_token) {
      tok_begin = pos;
      in_token = true;
    }
    pos += n;
  }
  if (in_token) tokens.push_back(s.substr(tok_begin));
  return tokens;
}

std::size_t count_tokens(std::string_view s) { return split_spaces(s).size(); }

}  // namespace bitalign::utf8
