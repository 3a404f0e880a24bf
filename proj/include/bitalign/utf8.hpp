#ifndef BITALIGN_UTF8_HPP
#define BITALIGN_UTF8_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace bitalign::utf8 {

/// Strict validation: rejects overlong forms, surrogates, and values above
/// U+10FFFF. On failure *bad_offset (if given) is the byte offset of the
/// offending sequence.
bool validate(std::string_view bytes, std::size_t* bad_offset = nullptr);

/// Number of Unicode scalar values. Input must be valid UTF-8.
std::size_t count_codepoints(std::string_view s);

/// White_Space property, the set used for trimming and token splitting.
bool is_space(char32_t cp);

/// Trim leading/trailing Unicode whitespace. Input must be valid UTF-8.
std::string_view trim(std::string_view s);

/// Split on runs of Unicode whitespace. Views point into s.
std::vector<std::string_view> split_spaces(std::string_view s);

std::size_t count_tokens(std::string_view s);

}  // namespace bitalign::utf8

#endif
