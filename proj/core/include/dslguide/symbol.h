/*!
 *  Copyright (c) 2026 by Contributors
 * \file dslguide/symbol.h
 * \brief Grammar symbols and the combinators used to build rules.
 *
 * A Symbol is an immutable tree value. Plain strings convert to terminals, Ref names a rule of
 * the enclosing grammar, and the remaining combinators build sequences, choices, repetitions,
 * joins and character classes.
 */
#ifndef DSLGUIDE_SYMBOL_H_
#define DSLGUIDE_SYMBOL_H_

#include <cstdint>
#include <initializer_list>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dslguide/charset.h"

namespace dslguide {

enum class SymbolKind : std::uint8_t {
  kEmpty,
  kTerminal,
  kCharClass,
  kRef,
  kSequence,
  kChoice,
  kRepeat,
  kJoin,
};

class Symbol {
 public:
  /*! \brief Terminal text. The text must be nonempty; use Empty() for the empty string. */
  Symbol(const char* text);  // NOLINT(google-explicit-constructor)
  Symbol(std::string_view text);  // NOLINT(google-explicit-constructor)
  Symbol(const std::string& text);  // NOLINT(google-explicit-constructor)
  Symbol(std::u32string text);  // NOLINT(google-explicit-constructor)

  SymbolKind kind() const { return node_->kind; }

  /*! \brief Terminal text. */
  const std::u32string& text() const { return node_->text; }
  /*! \brief Effective character class (ranges minus exclusions). */
  const CharSet& charset() const { return node_->set; }
  /*! \brief Character class ranges and exclusions as written. */
  const std::vector<ScalarRange>& class_ranges() const { return node_->ranges; }
  const std::vector<char32_t>& class_excluded() const { return node_->excluded; }
  /*! \brief Referenced rule name. */
  const std::string& name() const { return node_->name; }
  /*! \brief Children: sequence items, choice branches, {item} for repeat, {separator, items} for join. */
  const std::vector<Symbol>& children() const { return node_->children; }
  std::int64_t min_count() const { return node_->min_count; }
  std::int64_t max_count() const { return node_->max_count; }

  bool StructurallyEquals(const Symbol& other) const;
  /*! \brief EBNF-like rendering, e.g. ("a" | ref) "b"{2,3}. */
  std::string ToString() const;

 private:
  struct Node {
    SymbolKind kind = SymbolKind::kEmpty;
    std::u32string text;
    CharSet set;
    std::vector<ScalarRange> ranges;
    std::vector<char32_t> excluded;
    std::string name;
    std::vector<Symbol> children;
    std::int64_t min_count = 0;
    std::int64_t max_count = 0;
  };

  explicit Symbol(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static Symbol Make(Node node);

  friend Symbol Empty();
  friend Symbol Ref(std::string name);
  friend Symbol SeqOf(std::vector<Symbol> items);
  friend Symbol SelectOf(std::vector<Symbol> branches);
  friend Symbol Repeat(Symbol item, std::int64_t min_count, std::int64_t max_count);
  friend Symbol Join(Symbol separator, Symbol items);
  friend Symbol Accept(std::vector<ScalarRange> ranges, std::vector<char32_t> excluded);

  std::shared_ptr<const Node> node_;
};

Symbol Empty();
/*! \brief Reference to a rule by name; resolved when the grammar is built. */
Symbol Ref(std::string name);
/*! \brief Sequence of items. Zero items yields Empty, one item yields the item. */
Symbol SeqOf(std::vector<Symbol> items);
/*! \brief Ordered choice; throws GrammarError for fewer than two branches. */
Symbol SelectOf(std::vector<Symbol> branches);
/*! \brief Exactly n copies of item. */
Symbol Repeat(Symbol item, std::int64_t n);
/*! \brief Between min_count and max_count copies; the count is a sampler decision when generating. */
Symbol Repeat(Symbol item, std::int64_t min_count, std::int64_t max_count);
/*!
 * \brief The item emissions of `items` separated by `separator`. `items` may be a sequence, a
 * repetition, a choice of those, or a reference to a rule whose body is one of those.
 */
Symbol Join(Symbol separator, Symbol items);
/*! \brief Character class: union of ranges minus excluded scalars. Throws if the result is empty. */
Symbol Accept(std::vector<ScalarRange> ranges, std::vector<char32_t> excluded = {});
Symbol Accept(char32_t lo, char32_t hi);

template <typename... Ts>
Symbol Seq(Ts&&... items) {
  return SeqOf({Symbol(std::forward<Ts>(items))...});
}

template <typename... Ts>
Symbol Select(Ts&&... branches) {
  return SelectOf({Symbol(std::forward<Ts>(branches))...});
}

/*! \brief Choice(Empty, Seq(items...)): branch 0 derives the empty string. */
template <typename... Ts>
Symbol Optional(Ts&&... items) {
  std::vector<Symbol> seq{Symbol(std::forward<Ts>(items))...};
  return SelectOf({Empty(), seq.size() == 1 ? seq[0] : SeqOf(std::move(seq))});
}

}  // namespace dslguide

#endif  // DSLGUIDE_SYMBOL_H_
