/*!
 *  Copyright (c) 2026 by Contributors
 * \file grammar_ast.cc
 */
#include "dslguide/grammar_ast.h"

#include <json.hpp>

#include "dslguide/error.h"
#include "dslguide/unicode.h"

namespace dslguide {

namespace {

using Json = nlohmann::ordered_json;

const Json& Field(const Json& node, const char* key, const std::string& where) {
  auto it = node.find(key);
  if (it == node.end()) {
    throw GrammarError("grammar document: node in rule '" + where + "' lacks \"" + key + "\"");
  }
  return *it;
}

char32_t ScalarOf(const Json& value, const std::string& where) {
  if (value.is_number_integer()) {
    auto v = value.get<std::int64_t>();
    if (v < 0 || v > kMaxScalar) {
      throw GrammarError("grammar document: scalar out of range in rule '" + where + "'");
    }
    return static_cast<char32_t>(v);
  }
  if (value.is_string()) {
    std::u32string text = DecodeUtf8(value.get<std::string>());
    if (text.size() == 1) return text[0];
  }
  throw GrammarError("grammar document: expected a scalar in rule '" + where + "'");
}

Symbol Load(const Json& node, const std::string& where) {
  if (!node.is_object()) throw GrammarError("grammar document: node in rule '" + where + "' is not an object");
  const Json& tag_json = Field(node, "t", where);
  if (!tag_json.is_string()) throw GrammarError("grammar document: tag in rule '" + where + "' is not a string");
  std::string tag = tag_json.get<std::string>();
  try {
    if (tag == "empty") return Empty();
    if (tag == "term") return Symbol(DecodeUtf8(Field(node, "v", where).get<std::string>()));
    if (tag == "ref") return Ref(Field(node, "name", where).get<std::string>());
    if (tag == "seq" || tag == "choice") {
      const Json& items = Field(node, "items", where);
      if (!items.is_array()) throw GrammarError("grammar document: \"items\" must be an array in rule '" + where + "'");
      std::vector<Symbol> children;
      for (const auto& item : items) children.push_back(Load(item, where));
      return tag == "seq" ? SeqOf(std::move(children)) : SelectOf(std::move(children));
    }
    if (tag == "repeat") {
      return Repeat(Load(Field(node, "item", where), where),
                    Field(node, "min", where).get<std::int64_t>(),
                    Field(node, "max", where).get<std::int64_t>());
    }
    if (tag == "join") {
      return Join(Load(Field(node, "sep", where), where), Load(Field(node, "items", where), where));
    }
    if (tag == "class") {
      std::vector<ScalarRange> ranges;
      for (const auto& r : Field(node, "ranges", where)) {
        if (!r.is_array() || r.size() != 2) {
          throw GrammarError("grammar document: class range must be [lo, hi] in rule '" + where + "'");
        }
        ranges.push_back(ScalarRange{ScalarOf(r[0], where), ScalarOf(r[1], where)});
      }
      std::vector<char32_t> excluded;
      if (auto it = node.find("excl"); it != node.end()) {
        for (const auto& e : *it) excluded.push_back(ScalarOf(e, where));
      }
      return Accept(std::move(ranges), std::move(excluded));
    }
  } catch (const nlohmann::json::exception& e) {
    throw GrammarError("grammar document: malformed '" + tag + "' node in rule '" + where +
                       "': " + e.what());
  } catch (const GrammarError&) {
    throw;
  } catch (const Error& e) {
    throw GrammarError("grammar document: rule '" + where + "': " + e.what());
  }
  throw GrammarError("grammar document: unknown node tag '" + tag + "' in rule '" + where + "'");
}

Json Dump(const Symbol& symbol) {
  switch (symbol.kind()) {
    case SymbolKind::kEmpty:
      return Json{{"t", "empty"}};
    case SymbolKind::kTerminal:
      return Json{{"t", "term"}, {"v", EncodeUtf8(symbol.text())}};
    case SymbolKind::kRef:
      return Json{{"t", "ref"}, {"name", symbol.name()}};
    case SymbolKind::kSequence:
    case SymbolKind::kChoice: {
      Json items = Json::array();
      for (const auto& c : symbol.children()) items.push_back(Dump(c));
      return Json{{"t", symbol.kind() == SymbolKind::kSequence ? "seq" : "choice"},
                  {"items", std::move(items)}};
    }
    case SymbolKind::kRepeat:
      return Json{{"t", "repeat"},
                  {"item", Dump(symbol.children()[0])},
                  {"min", symbol.min_count()},
                  {"max", symbol.max_count()}};
    case SymbolKind::kJoin:
      return Json{{"t", "join"},
                  {"sep", Dump(symbol.children()[0])},
                  {"items", Dump(symbol.children()[1])}};
    case SymbolKind::kCharClass: {
      Json ranges = Json::array();
      for (const auto& r : symbol.class_ranges()) {
        ranges.push_back(Json::array({static_cast<std::uint32_t>(r.lo), static_cast<std::uint32_t>(r.hi)}));
      }
      Json excl = Json::array();
      for (char32_t c : symbol.class_excluded()) excl.push_back(static_cast<std::uint32_t>(c));
      return Json{{"t", "class"}, {"ranges", std::move(ranges)}, {"excl", std::move(excl)}};
    }
  }
  return Json{};
}

}  // namespace

Grammar LoadGrammarAst(std::string_view document) {
  Json doc = Json::parse(document, nullptr, false);
  if (doc.is_discarded()) throw GrammarError("grammar document: not valid JSON");
  if (!doc.is_object()) throw GrammarError("grammar document: expected an object");
  auto start = doc.find("start");
  if (start == doc.end() || !start->is_string()) {
    throw GrammarError("grammar document: missing \"start\"");
  }
  auto rules = doc.find("rules");
  if (rules == doc.end() || !rules->is_object()) {
    throw GrammarError("grammar document: missing \"rules\" object");
  }
  GrammarBuilder builder;
  for (const auto& [name, node] : rules->items()) builder.Rule(name, Load(node, name));
  if (auto ws = doc.find("whitespace"); ws != doc.end()) {
    if (!ws->is_string()) throw GrammarError("grammar document: \"whitespace\" must be a string");
    builder.Whitespace(ws->get<std::string>());
  }
  return builder.Build(start->get<std::string>());
}

std::string DumpGrammarAst(const Grammar& grammar, int indent) {
  Json rules = Json::object();
  for (const auto& name : grammar.RuleNames()) rules[name] = Dump(grammar.RuleBody(name));
  Json doc{{"start", grammar.start()}, {"rules", std::move(rules)}};
  const auto& ws = grammar.whitespace_rule();
  doc["whitespace"] = ws.value_or("");
  return doc.dump(indent);
}

}  // namespace dslguide
