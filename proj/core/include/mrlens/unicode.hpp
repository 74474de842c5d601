#ifndef MRLENS_UNICODE_HPP
#define MRLENS_UNICODE_HPP

#include <string>
#include <string_view>
#include <vector>

namespace mrlens {

/// Appends the UTF-8 encoding of one Unicode scalar value to `out`.
void append_utf8(std::string& out, char32_t cp);

/// UTF-8 encoding of one Unicode scalar value.
std::string encode_utf8(char32_t cp);

/// Decodes a UTF-8 string into scalar values. Throws InvalidInputSymbol on
/// malformed input (truncated sequences, overlong forms, surrogates).
std::vector<char32_t> decode_utf8(std::string_view s);

/// True iff `s` is well-formed UTF-8.
bool valid_utf8(std::string_view s) noexcept;

}  // namespace mrlens

#endif
