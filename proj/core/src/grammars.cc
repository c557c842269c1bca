/*!
 *  Copyright (c) 2026 by Contributors
 * \file grammars.cc
 */
#include "dslguide/grammars.h"

#include "dslguide/symbol.h"

namespace dslguide {

Grammar BracketsGrammar() {
  GrammarBuilder builder;
  builder.Rule("top", Ref("pairs"));
  builder.Rule("pairs", Select(Ref("pair"), Seq(Ref("pair"), Ref("pairs"))));
  builder.Rule("pair", Optional("(", Ref("pairs"), ")"));
  return builder.Build("top");
}

namespace {

void AddJsonRules(GrammarBuilder* builder) {
  GrammarBuilder& b = *builder;
  b.Rule("json", Ref("element"));
  b.Rule("value", Select(Ref("object"), Ref("array"), Ref("string"), Ref("number"),
                         Ref("boolean"), Ref("null")));
  b.Rule("object", Select(Seq("{", Ref("ws"), "}"), Seq("{", Ref("members"), "}")));
  b.Rule("members", Select(Ref("member"), Seq(Ref("member"), ",", Ref("members"))));
  b.Rule("member", Seq(Ref("ws"), Ref("string"), Ref("ws"), ":", Ref("element")));
  b.Rule("array", Select(Seq("[", Ref("ws"), "]"), Seq("[", Ref("elements"), "]")));
  b.Rule("elements", Select(Ref("element"), Seq(Ref("element"), ",", Ref("elements"))));
  b.Rule("element", Seq(Ref("ws"), Ref("value"), Ref("ws")));
  b.Rule("string", Seq("\"", Ref("characters"), "\""));
  b.Rule("characters", Optional(Ref("character"), Ref("characters")));
  b.Rule("character",
         Select(Accept({{0x20, 0xFFFF}}, {U'"', U'\\'}), Seq("\\", Ref("escape"))));
  b.Rule("escape", Select("\\", "\"", "/", "b", "f", "n", "r", "t", Seq("u", Repeat(Ref("hex"), 4))));
  b.Rule("hex", Select(Ref("digit"), Select("A", "B", "C", "D", "E", "F"),
                       Select("a", "b", "c", "d", "e", "f")));
  b.Rule("number", Seq(Ref("integer"), Ref("fraction"), Ref("exponent")));
  b.Rule("integer", Select(Ref("digit"), Seq(Ref("onenine"), Ref("digits")), Seq("-", Ref("digit")),
                           Seq("-", Ref("onenine"), Ref("digits"))));
  b.Rule("digits", Select(Ref("digit"), Seq(Ref("digit"), Ref("digits"))));
  b.Rule("digit", Select("0", Ref("onenine")));
  b.Rule("onenine", Select("1", "2", "3", "4", "5", "6", "7", "8", "9"));
  b.Rule("fraction", Optional(".", Ref("digits")));
  b.Rule("exponent", Optional(Select(Seq("E", Ref("sign"), Ref("digits")),
                                     Seq("e", Ref("sign"), Ref("digits")))));
  b.Rule("sign", Optional(Select("+", "-")));
  b.Rule("boolean", Select("true", "false"));
  b.Rule("null", Symbol("null"));
  b.Rule("ws", Optional(Select(Seq(" ", Ref("ws")), Seq("\n", Ref("ws")), Seq("\r", Ref("ws")),
                               Seq("\t", Ref("ws")))));
}

}  // namespace

Grammar JsonGrammar() {
  GrammarBuilder builder;
  AddJsonRules(&builder);
  return builder.Build("json");
}

Grammar MermaidGrammar(MermaidOptions options) {
  GrammarBuilder builder;
  builder.Rule("top", Ref("mermaid"));
  builder.Rule("mermaid", Seq(Ref("graph_name"), Ref("flowchart")));
  builder.Rule("graph_name", Symbol("flowchart"));
  builder.Rule("flowchart",
               Seq(" ", Ref("flowchart_type"), "\n", Join("\n", Ref("flowchart_rules"))));
  builder.Rule("flowchart_type", Select("TD", "LR"));
  builder.Rule("flowchart_rules", Repeat(Seq("    ", Ref("flowchart_rule")), options.min_lines,
                                         options.max_lines));
  builder.Rule("flowchart_rule", Seq(Ref("node"), " --> ", Ref("node")));
  builder.Rule("node", Select("1", "2", "3", "4", "5", "6", "7", "8", "9"));
  return builder.Build("top");
}

Grammar FunctionCallGrammar() {
  GrammarBuilder builder;
  builder.Rule("call", Seq(Ref("ident"), "(", Optional(Ref("args")), ")"));
  builder.Rule("ident", Seq(Ref("ident_start"), Ref("ident_rest")));
  builder.Rule("ident_start", Accept({{'A', 'Z'}, {'_', '_'}, {'a', 'z'}}));
  builder.Rule("ident_rest", Optional(Ref("ident_char"), Ref("ident_rest")));
  builder.Rule("ident_char", Accept({{'0', '9'}, {'A', 'Z'}, {'_', '_'}, {'a', 'z'}}));
  builder.Rule("args", Select(Ref("arg"), Seq(Ref("arg"), ", ", Ref("args"))));
  builder.Rule("arg", Ref("value"));
  AddJsonRules(&builder);
  return builder.Build("call");
}

std::vector<std::string> BuiltinGrammarNames() {
  return {"brackets", "json", "mermaid", "function_call"};
}

std::optional<Grammar> BuiltinGrammar(const std::string& name) {
  if (name == "brackets") return BracketsGrammar();
  if (name == "json") return JsonGrammar();
  if (name == "mermaid") return MermaidGrammar();
  if (name == "function_call") return FunctionCallGrammar();
  return std::nullopt;
}

}  // namespace dslguide
