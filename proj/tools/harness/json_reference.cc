/*!
 *  Copyright (c) 2026 by Contributors
 * \file json_reference.cc
 */
#include "json_reference.h"

#include <cmath>
#include <cstdlib>

#include "dslguide/unicode.h"

namespace dslguide {
namespace harness {

namespace {

constexpr char32_t kReplacement = 0xFFFD;
constexpr std::int64_t kExponentLimit = 100000000000000000LL;

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  JsonValue Document() {
    SkipWs();
    JsonValue value = Value();
    SkipWs();
    if (pos_ != text_.size()) Fail("trailing characters after the document");
    return value;
  }

 private:
  [[noreturn]] void Fail(const std::string& message) const { throw JsonSyntaxError(message, pos_); }

  bool AtEnd() const { return pos_ >= text_.size(); }
  char Peek() const { return AtEnd() ? '\0' : text_[pos_]; }

  void SkipWs() {
    while (!AtEnd() && (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\n' ||
                        text_[pos_] == '\r')) {
      ++pos_;
    }
  }

  void Expect(std::string_view word) {
    if (text_.substr(pos_, word.size()) != word) Fail("expected '" + std::string(word) + "'");
    pos_ += word.size();
  }

  JsonValue Value() {
    if (depth_ > 10000) Fail("nesting too deep");
    JsonValue v;
    switch (Peek()) {
      case '{':
        return Object();
      case '[':
        return Array();
      case '"':
        v.kind = JsonValue::Kind::kString;
        v.text = String();
        return v;
      case 't':
        Expect("true");
        v.kind = JsonValue::Kind::kBool;
        v.boolean = true;
        return v;
      case 'f':
        Expect("false");
        v.kind = JsonValue::Kind::kBool;
        return v;
      case 'n':
        Expect("null");
        return v;
      default:
        if (Peek() == '-' || (Peek() >= '0' && Peek() <= '9')) return Number();
        Fail(AtEnd() ? "unexpected end of input" : "unexpected character");
    }
  }

  JsonValue Object() {
    ++depth_;
    ++pos_;
    JsonValue v;
    v.kind = JsonValue::Kind::kObject;
    SkipWs();
    if (Peek() == '}') {
      ++pos_;
      --depth_;
      return v;
    }
    while (true) {
      SkipWs();
      if (Peek() != '"') Fail("expected a member name");
      std::string name = String();
      SkipWs();
      if (Peek() != ':') Fail("expected ':'");
      ++pos_;
      SkipWs();
      JsonValue member = Value();
      v.members.emplace_back(std::move(name), std::move(member));
      SkipWs();
      if (Peek() == ',') {
        ++pos_;
        continue;
      }
      if (Peek() == '}') {
        ++pos_;
        break;
      }
      Fail("expected ',' or '}'");
    }
    --depth_;
    return v;
  }

  JsonValue Array() {
    ++depth_;
    ++pos_;
    JsonValue v;
    v.kind = JsonValue::Kind::kArray;
    SkipWs();
    if (Peek() == ']') {
      ++pos_;
      --depth_;
      return v;
    }
    while (true) {
      SkipWs();
      v.items.push_back(Value());
      SkipWs();
      if (Peek() == ',') {
        ++pos_;
        continue;
      }
      if (Peek() == ']') {
        ++pos_;
        break;
      }
      Fail("expected ',' or ']'");
    }
    --depth_;
    return v;
  }

  std::size_t Digits(std::string* out) {
    std::size_t start = pos_;
    while (!AtEnd() && text_[pos_] >= '0' && text_[pos_] <= '9') {
      if (out != nullptr) out->push_back(text_[pos_]);
      ++pos_;
    }
    return pos_ - start;
  }

  JsonValue Number() {
    JsonValue v;
    v.kind = JsonValue::Kind::kNumber;
    if (Peek() == '-') {
      v.negative = true;
      ++pos_;
    }
    std::string digits;
    if (Peek() == '0') {
      digits.push_back('0');
      ++pos_;
    } else if (Digits(&digits) == 0) {
      Fail("expected a digit");
    }
    std::int64_t shift = 0;
    if (Peek() == '.') {
      ++pos_;
      std::size_t n = Digits(&digits);
      if (n == 0) Fail("expected a fraction digit");
      shift -= static_cast<std::int64_t>(n);
    }
    if (Peek() == 'e' || Peek() == 'E') {
      ++pos_;
      bool minus = false;
      if (Peek() == '+' || Peek() == '-') {
        minus = Peek() == '-';
        ++pos_;
      }
      std::string exp_digits;
      if (Digits(&exp_digits) == 0) Fail("expected an exponent digit");
      std::int64_t e = 0;
      for (char c : exp_digits) {
        e = e * 10 + (c - '0');
        if (e > kExponentLimit) Fail("exponent out of supported range");
      }
      shift += minus ? -e : e;
    }
    std::size_t lead = digits.find_first_not_of('0');
    if (lead == std::string::npos) {
      v.digits = "0";
      v.exponent = 0;
      return v;
    }
    digits.erase(0, lead);
    std::size_t trail = digits.find_last_not_of('0');
    shift += static_cast<std::int64_t>(digits.size() - trail - 1);
    digits.erase(trail + 1);
    v.digits = std::move(digits);
    v.exponent = shift;
    return v;
  }

  char32_t Hex4() {
    if (pos_ + 4 > text_.size()) Fail("truncated \\u escape");
    char32_t value = 0;
    for (int i = 0; i < 4; ++i) {
      char c = text_[pos_++];
      int d = (c >= '0' && c <= '9')   ? c - '0'
              : (c >= 'a' && c <= 'f') ? c - 'a' + 10
              : (c >= 'A' && c <= 'F') ? c - 'A' + 10
                                       : -1;
      if (d < 0) Fail("malformed \\u escape");
      value = value * 16 + static_cast<char32_t>(d);
    }
    return value;
  }

  std::string String() {
    ++pos_;
    std::string out;
    while (true) {
      if (AtEnd()) Fail("unterminated string");
      unsigned char c = static_cast<unsigned char>(text_[pos_]);
      if (c == '"') {
        ++pos_;
        return out;
      }
      if (c < 0x20) Fail("control character in string");
      if (c == '\\') {
        ++pos_;
        char e = Peek();
        ++pos_;
        switch (e) {
          case '"': out.push_back('"'); break;
          case '\\': out.push_back('\\'); break;
          case '/': out.push_back('/'); break;
          case 'b': out.push_back('\b'); break;
          case 'f': out.push_back('\f'); break;
          case 'n': out.push_back('\n'); break;
          case 'r': out.push_back('\r'); break;
          case 't': out.push_back('\t'); break;
          case 'u': {
            char32_t unit = Hex4();
            if (unit >= 0xD800 && unit <= 0xDBFF && text_.substr(pos_, 2) == "\\u") {
              std::size_t saved = pos_;
              pos_ += 2;
              char32_t low = Hex4();
              if (low >= 0xDC00 && low <= 0xDFFF) {
                AppendUtf8(&out, 0x10000 + ((unit - 0xD800) << 10) + (low - 0xDC00));
                break;
              }
              pos_ = saved;
            }
            AppendUtf8(&out, IsSurrogate(unit) ? kReplacement : unit);
            break;
          }
          default:
            --pos_;
            Fail("invalid escape");
        }
        continue;
      }
      std::size_t len = c < 0x80 ? 1 : c < 0xE0 ? 2 : c < 0xF0 ? 3 : 4;
      if (pos_ + len > text_.size()) Fail("truncated UTF-8 sequence");
      try {
        DecodeUtf8(text_.substr(pos_, len));
      } catch (const std::exception&) {
        Fail("invalid UTF-8");
      }
      out.append(text_.substr(pos_, len));
      pos_ += len;
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int depth_ = 0;
};

void SerializeString(const std::string& text, std::string* out) {
  out->push_back('"');
  for (char ch : text) {
    unsigned char c = static_cast<unsigned char>(ch);
    if (c == '"') {
      *out += "\\\"";
    } else if (c == '\\') {
      *out += "\\\\";
    } else if (c < 0x20) {
      static const char* kHex = "0123456789abcdef";
      *out += "\\u00";
      out->push_back(kHex[c >> 4]);
      out->push_back(kHex[c & 15]);
    } else {
      out->push_back(ch);
    }
  }
  out->push_back('"');
}

void Serialize(const JsonValue& v, std::string* out) {
  switch (v.kind) {
    case JsonValue::Kind::kNull:
      *out += "null";
      break;
    case JsonValue::Kind::kBool:
      *out += v.boolean ? "true" : "false";
      break;
    case JsonValue::Kind::kNumber:
      if (v.negative) out->push_back('-');
      *out += v.digits;
      if (v.exponent != 0) *out += "e" + std::to_string(v.exponent);
      break;
    case JsonValue::Kind::kString:
      SerializeString(v.text, out);
      break;
    case JsonValue::Kind::kArray:
      out->push_back('[');
      for (std::size_t i = 0; i < v.items.size(); ++i) {
        if (i > 0) out->push_back(',');
        Serialize(v.items[i], out);
      }
      out->push_back(']');
      break;
    case JsonValue::Kind::kObject:
      out->push_back('{');
      for (std::size_t i = 0; i < v.members.size(); ++i) {
        if (i > 0) out->push_back(',');
        SerializeString(v.members[i].first, out);
        out->push_back(':');
        Serialize(v.members[i].second, out);
      }
      out->push_back('}');
      break;
  }
}

bool HasNonFinite(const JsonValue& v) {
  switch (v.kind) {
    case JsonValue::Kind::kNumber: {
      std::string text = v.digits + "e" + std::to_string(v.exponent);
      return !std::isfinite(std::strtod(text.c_str(), nullptr));
    }
    case JsonValue::Kind::kArray:
      for (const auto& item : v.items) {
        if (HasNonFinite(item)) return true;
      }
      return false;
    case JsonValue::Kind::kObject:
      for (const auto& member : v.members) {
        if (HasNonFinite(member.second)) return true;
      }
      return false;
    default:
      return false;
  }
}

}  // namespace

JsonSyntaxError::JsonSyntaxError(const std::string& message, std::size_t offset)
    : std::runtime_error(message + " at byte " + std::to_string(offset)), offset_(offset) {}

bool JsonValue::operator==(const JsonValue& other) const {
  if (kind != other.kind) return false;
  switch (kind) {
    case Kind::kNull:
      return true;
    case Kind::kBool:
      return boolean == other.boolean;
    case Kind::kNumber:
      return negative == other.negative && digits == other.digits && exponent == other.exponent;
    case Kind::kString:
      return text == other.text;
    case Kind::kArray:
      return items == other.items;
    case Kind::kObject:
      return members == other.members;
  }
  return false;
}

JsonValue ParseJson(std::string_view text) { return Reader(text).Document(); }

std::string SerializeJson(const JsonValue& value) {
  std::string out;
  Serialize(value, &out);
  return out;
}

nlohmann::json ToNlohmann(const JsonValue& v) {
  switch (v.kind) {
    case JsonValue::Kind::kNull:
      return nullptr;
    case JsonValue::Kind::kBool:
      return v.boolean;
    case JsonValue::Kind::kNumber: {
      if (v.exponent >= 0 && v.digits.size() + static_cast<std::size_t>(v.exponent) <= 18) {
        std::int64_t n = std::stoll(v.digits);
        for (std::int64_t i = 0; i < v.exponent; ++i) n *= 10;
        return v.negative ? -n : n;
      }
      std::string text = (v.negative ? "-" : "") + v.digits + "e" + std::to_string(v.exponent);
      return std::strtod(text.c_str(), nullptr);
    }
    case JsonValue::Kind::kString:
      return v.text;
    case JsonValue::Kind::kArray: {
      nlohmann::json arr = nlohmann::json::array();
      for (const auto& item : v.items) arr.push_back(ToNlohmann(item));
      return arr;
    }
    case JsonValue::Kind::kObject: {
      nlohmann::json obj = nlohmann::json::object();
      for (const auto& [name, member] : v.members) obj[name] = ToNlohmann(member);
      return obj;
    }
  }
  return nullptr;
}

bool HasLoneSurrogateEscape(std::string_view text) {
  auto unit_at = [&](std::size_t i) -> long {
    if (i + 6 > text.size() || text[i] != '\\' || text[i + 1] != 'u') return -1;
    char* end = nullptr;
    std::string hex(text.substr(i + 2, 4));
    long v = std::strtol(hex.c_str(), &end, 16);
    return end == hex.c_str() + 4 ? v : -1;
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '\\') continue;
    long unit = unit_at(i);
    if (unit < 0) {
      ++i;
      continue;
    }
    if (unit >= 0xD800 && unit <= 0xDBFF) {
      long low = unit_at(i + 6);
      if (low >= 0xDC00 && low <= 0xDFFF) {
        i += 11;
        continue;
      }
      return true;
    }
    if (unit >= 0xDC00 && unit <= 0xDFFF) return true;
    i += 5;
  }
  return false;
}

JsonCheck CheckJsonDocument(std::string_view text) {
  JsonCheck check;
  JsonValue value;
  try {
    value = ParseJson(text);
  } catch (const JsonSyntaxError& e) {
    check.detail = std::string("reference parser: ") + e.what();
    return check;
  }
  std::string canonical = SerializeJson(value);
  try {
    if (!(ParseJson(canonical) == value)) {
      check.detail = "canonical form re-parses to a different value: " + canonical;
      return check;
    }
  } catch (const JsonSyntaxError& e) {
    check.detail = std::string("canonical form does not parse: ") + e.what();
    return check;
  }
  if (!HasLoneSurrogateEscape(text)) {
    nlohmann::json expected = ToNlohmann(value);
    try {
      nlohmann::json other = nlohmann::json::parse(text);
      if (other != expected) {
        check.detail = "nlohmann::json reads a different value";
        return check;
      }
    } catch (const nlohmann::json::out_of_range&) {
      if (!HasNonFinite(value)) {
        check.detail = "nlohmann::json reports an out-of-range number";
        return check;
      }
    } catch (const nlohmann::json::exception& e) {
      check.detail = std::string("nlohmann::json rejects the text: ") + e.what();
      return check;
    }
  }
  check.ok = true;
  return check;
}

}  // namespace harness
}  // namespace dslguide
