/*!
 *  Copyright (c) 2026 by Contributors
 * \file dslguide/token.h
 * \brief Token vocabularies, legal-token masks and the token-level decode loop.
 *
 * Vocabulary files hold one entry per line: `<id>\t<token>`, where the token uses the escapes
 * \n, \t, \\ and \uXXXX. The line `<id>\t!EOS` declares the end-of-sequence token.
 */
#ifndef DSLGUIDE_TOKEN_H_
#define DSLGUIDE_TOKEN_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dslguide/backend.h"
#include "dslguide/grammar.h"
#include "dslguide/sampling.h"

namespace dslguide {

class Session;

class TokenVocabulary {
 public:
  struct TrieNode {
    char32_t ch = 0;
    /*! \brief Child node indices sorted by `ch`. */
    std::vector<std::int32_t> children;
    /*! \brief Ids of the tokens spelled by the path to this node. */
    std::vector<std::int32_t> tokens;
  };

  /*!
   * \brief Builds a vocabulary from token texts indexed by id. The entry at `eos` must be empty;
   * every other entry must be nonempty. Throws VocabError.
   */
  static TokenVocabulary FromTokens(std::vector<std::u32string> tokens,
                                    std::optional<std::int32_t> eos = std::nullopt);
  /*! \brief Parses the vocabulary file format. Throws VocabError. */
  static TokenVocabulary Parse(std::string_view text);
  static TokenVocabulary Load(std::istream& in);
  static TokenVocabulary LoadFile(const std::string& path);

  /*! \brief Canonical file form; Parse(Dump()) reproduces the vocabulary. */
  std::string Dump() const;

  std::size_t size() const { return tokens_.size(); }
  std::optional<std::int32_t> eos() const { return eos_; }
  bool is_eos(std::int32_t id) const { return eos_.has_value() && *eos_ == id; }
  /*! \brief Token scalars; empty for EOS. */
  const std::u32string& scalars(std::int32_t id) const { return tokens_[id]; }
  std::string text(std::int32_t id) const;
  /*! \brief UTF-8 texts by id, with "" for EOS. */
  std::vector<std::string> Texts() const;
  std::size_t max_token_length() const { return max_length_; }

  const std::vector<TrieNode>& trie() const { return trie_; }

 private:
  void BuildTrie();

  std::vector<std::u32string> tokens_;
  std::optional<std::int32_t> eos_;
  std::vector<TrieNode> trie_;
  std::size_t max_length_ = 0;
};

/*! \brief Escapes a token for the vocabulary file format. */
std::string EscapeToken(std::u32string_view token);
/*! \brief Inverse of EscapeToken. Throws VocabError on malformed escapes. */
std::u32string UnescapeToken(std::string_view escaped);

class TokenMask {
 public:
  TokenMask() = default;
  explicit TokenMask(std::size_t size) : bits_(size, false) {}

  void Set(std::int32_t id);
  bool Test(std::int32_t id) const { return bits_[id]; }
  std::size_t size() const { return bits_.size(); }
  std::size_t count() const { return count_; }
  std::vector<std::int32_t> LegalIds() const;
  /*! \brief Computed for a dead session; nothing is legal. */
  bool dead() const { return dead_; }
  void set_dead(bool dead) { dead_ = dead; }

 private:
  std::vector<bool> bits_;
  std::size_t count_ = 0;
  bool dead_ = false;
};

/*!
 * \brief Tokens whose scalars can all be fed after the session's prefix. EOS is legal exactly
 * when the session accepts. Speculation shares trie prefixes. `work` receives the engine work
 * spent on speculation when given.
 */
TokenMask ComputeTokenMask(const Session& session, const TokenVocabulary& vocab,
                           std::uint64_t* work = nullptr);

enum class MaskMode : std::uint8_t { kHard, kSoft };

/*!
 * \brief Hard: illegal logits become the lowest finite double, which softmax maps to 0. Soft:
 * adds +bias to legal and -bias to illegal logits. Throws Error on a length mismatch.
 */
std::vector<double> ApplyMask(const std::vector<double>& logits, const TokenMask& mask,
                              MaskMode mode = MaskMode::kHard, double bias = 0.0);

struct DecodeOptions {
  bool use_mask = true;
  MaskMode mode = MaskMode::kHard;
  double soft_bias = 5.0;
  /*! \brief With a hard mask, a single legal token is taken without calling the backend. */
  bool forced_shortcut = true;
  /*! \brief Maximum number of emitted scalars. */
  std::size_t budget = 4096;
  double temperature = 1.0;
  std::uint64_t seed = 0;
  /*! \brief Prepended to the backend context; not part of the output. */
  std::string prompt;
};

struct DecodeResult {
  std::string text;
  std::vector<std::int32_t> token_ids;
  /*! \brief chars_emitted, backend calls (sampler_calls) and shortcut tokens (forced_moves). */
  SamplerStats stats;
  /*! \brief EOS was sampled or nothing more could follow. */
  bool finished = false;
  /*! \brief The session never rejected a scalar. */
  bool alive = true;
  bool accepting = false;
  bool member = false;
  /*! \brief Engine work: session feeds plus mask speculation. */
  std::uint64_t work = 0;
};

/*!
 * \brief Samples tokens until EOS. Without a hard mask the run also stops as soon as the output
 * leaves the prefix language. Throws GenerationError when a hard mask is empty,
 * BudgetExhaustedError on budget overrun and BackendError for bad backend output.
 */
DecodeResult DecodeLoop(const Grammar& grammar, const TokenVocabulary& vocab, Backend* backend,
                        const DecodeOptions& options = {});

}  // namespace dslguide

#endif  // DSLGUIDE_TOKEN_H_
