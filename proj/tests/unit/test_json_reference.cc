/*!
 *  Copyright (c) 2026 by Contributors
 * \file test_json_reference.cc
 */
#include <gtest/gtest.h>

#include "json_reference.h"

namespace dslguide {
namespace harness {
namespace {

TEST(JsonReference, ScalarsAndContainers) {
  JsonValue v = ParseJson(R"( {"a": [1, -2.5e3, true, false, null, "x\n\u00e9"], "a": {}} )");
  ASSERT_EQ(v.kind, JsonValue::Kind::kObject);
  ASSERT_EQ(v.members.size(), 2u);
  EXPECT_EQ(v.members[0].first, "a");
  const JsonValue& arr = v.members[0].second;
  ASSERT_EQ(arr.items.size(), 6u);
  EXPECT_TRUE(arr.items[1].negative);
  EXPECT_EQ(arr.items[5].text, "x\n\xC3\xA9");
  EXPECT_EQ(v.members[1].second.kind, JsonValue::Kind::kObject);
}

TEST(JsonReference, NumbersCompareByValue) {
  EXPECT_EQ(ParseJson("1.50e1"), ParseJson("15"));
  EXPECT_EQ(ParseJson("0.001"), ParseJson("1E-3"));
  EXPECT_EQ(ParseJson("-0"), ParseJson("-0.0"));
  EXPECT_FALSE(ParseJson("1") == ParseJson("10"));
  EXPECT_EQ(ParseJson("123456789012345678901234567890"), ParseJson("1.23456789012345678901234567890e29"));
}

TEST(JsonReference, RejectsInvalidText) {
  for (const char* bad : {"", "01", "[1,]", "{\"a\" 1}", "tru", "\"\\x\"", "1.", "-", "[1] 2",
                          "\"a", "{\"a\":1,}", "\"\x01\""}) {
    EXPECT_THROW(ParseJson(bad), JsonSyntaxError) << bad;
  }
}

TEST(JsonReference, LoneSurrogatesBecomeReplacement) {
  EXPECT_TRUE(HasLoneSurrogateEscape(R"("\ud800")"));
  EXPECT_FALSE(HasLoneSurrogateEscape(R"("\ud83d\ude00")"));
  EXPECT_EQ(ParseJson(R"("\udc00x")").text, "\xEF\xBF\xBDx");
  EXPECT_EQ(ParseJson(R"("\ud83d\ude00")").text, "\xF0\x9F\x98\x80");
}

TEST(JsonReference, CanonicalRoundTrip) {
  for (const char* doc : {"[]", "{}", R"({"k": [1.25, {"z": "\t"}], "e": -7e-2})", "\"\\u0000\"", "1e400"}) {
    JsonValue v = ParseJson(doc);
    std::string canon = SerializeJson(v);
    EXPECT_EQ(ParseJson(canon), v) << doc;
    EXPECT_EQ(SerializeJson(ParseJson(canon)), canon) << doc;
  }
}

TEST(JsonReference, AgreesWithNlohmann) {
  for (const char* doc : {R"({"a": [1, 2, {"b": null}]})", "[true, false, \"\\u00e9\"]", "-12.5E+2"}) {
    EXPECT_EQ(ToNlohmann(ParseJson(doc)), nlohmann::json::parse(doc)) << doc;
  }
}

TEST(JsonReference, DocumentCheck) {
  EXPECT_TRUE(CheckJsonDocument(R"( {"x": [0, -0.5e1]} )").ok);
  EXPECT_TRUE(CheckJsonDocument(R"("\ud800")").ok);
  EXPECT_TRUE(CheckJsonDocument(R"({"": [20.00e500], "": 1})").ok);
  JsonCheck bad = CheckJsonDocument("[1,]");
  EXPECT_FALSE(bad.ok);
  EXPECT_FALSE(bad.detail.empty());
}

}  // namespace
}  // namespace harness
}  // namespace dslguide
