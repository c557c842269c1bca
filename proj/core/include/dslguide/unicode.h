/*!
 *  Copyright (c) 2026 by Contributors
 * \file dslguide/unicode.h
 * \brief UTF-8 conversion over Unicode scalar values.
 */
#ifndef DSLGUIDE_UNICODE_H_
#define DSLGUIDE_UNICODE_H_

#include <string>
#include <string_view>

namespace dslguide {

inline constexpr char32_t kMaxScalar = 0x10FFFF;

constexpr bool IsSurrogate(char32_t c) { return c >= 0xD800 && c <= 0xDFFF; }
constexpr bool IsScalarValue(char32_t c) { return c <= kMaxScalar && !IsSurrogate(c); }

/*! \brief Decodes strict UTF-8. Throws dslguide::Error on malformed input. */
std::u32string DecodeUtf8(std::string_view text);

void AppendUtf8(std::string* out, char32_t scalar);
std::string EncodeUtf8(std::u32string_view text);
std::string EncodeUtf8(char32_t scalar);

/*! \brief Human-readable form of one scalar: printable characters as-is, others as \n or U+XXXX. */
std::string DescribeScalar(char32_t scalar);

}  // namespace dslguide

#endif  // DSLGUIDE_UNICODE_H_
