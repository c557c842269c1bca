/*!
 *  Copyright (c) 2026 by Contributors
 * \file json_reference.h
 * \brief A small standalone RFC 8259 JSON reader used to check generated documents.
 *
 * Numbers are kept as exact decimal values, objects keep member order and duplicate names, and
 * an unpaired surrogate escape decodes to U+FFFD.
 */
#ifndef DSLGUIDE_HARNESS_JSON_REFERENCE_H_
#define DSLGUIDE_HARNESS_JSON_REFERENCE_H_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

namespace dslguide {
namespace harness {

struct JsonValue {
  enum class Kind : std::uint8_t { kNull, kBool, kNumber, kString, kArray, kObject };

  Kind kind = Kind::kNull;
  bool boolean = false;
  /*! \brief kNumber: sign, significant digits and a power of ten, value = digits * 10^exponent. */
  bool negative = false;
  std::string digits;
  std::int64_t exponent = 0;
  /*! \brief kString: UTF-8 text. */
  std::string text;
  std::vector<JsonValue> items;
  std::vector<std::pair<std::string, JsonValue>> members;

  bool operator==(const JsonValue& other) const;
};

class JsonSyntaxError : public std::runtime_error {
 public:
  JsonSyntaxError(const std::string& message, std::size_t offset);
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

/*! \brief Parses one JSON text surrounded by optional whitespace. Throws JsonSyntaxError. */
JsonValue ParseJson(std::string_view text);

/*! \brief Compact canonical form: numbers as <digits>e<exp>, minimal string escapes. */
std::string SerializeJson(const JsonValue& value);

/*! \brief Converts to nlohmann::json; later duplicate names win, as in nlohmann's parser. */
nlohmann::json ToNlohmann(const JsonValue& value);

/*! \brief The text contains a \u escape naming a surrogate that is not part of a pair. */
bool HasLoneSurrogateEscape(std::string_view text);

struct JsonCheck {
  bool ok = false;
  std::string detail;
};

/*!
 * \brief Parses `text`, re-serializes it canonically, re-parses and compares. When the text has
 * no lone surrogate escapes the result is also compared with nlohmann::json::parse.
 */
JsonCheck CheckJsonDocument(std::string_view text);

}  // namespace harness
}  // namespace dslguide

#endif  // DSLGUIDE_HARNESS_JSON_REFERENCE_H_
