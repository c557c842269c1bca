/*!
 *  Copyright (c) 2026 by Contributors
 * \file token.cc
 */
#include "dslguide/token.h"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <random>
#include <sstream>

#include "dslguide/error.h"
#include "dslguide/session.h"
#include "dslguide/unicode.h"

namespace dslguide {

namespace {

constexpr std::string_view kEosMarker = "!EOS";

int HexValue(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

std::string EscapeToken(std::u32string_view token) {
  std::string out;
  for (char32_t c : token) {
    if (c == U'\\') {
      out += "\\\\";
    } else if (c == U'\n') {
      out += "\\n";
    } else if (c == U'\t') {
      out += "\\t";
    } else if (c < 0x20 || c == 0x7F) {
      char buf[8];
      std::snprintf(buf, sizeof(buf), "\\u%04X", static_cast<unsigned>(c));
      out += buf;
    } else {
      AppendUtf8(&out, c);
    }
  }
  if (out == kEosMarker) out = "\\u0021EOS";
  return out;
}

std::u32string UnescapeToken(std::string_view escaped) {
  std::u32string raw;
  try {
    raw = DecodeUtf8(escaped);
  } catch (const Error& e) {
    throw VocabError(std::string("token is not valid UTF-8: ") + e.what());
  }
  std::u32string out;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw[i] != U'\\') {
      out.push_back(raw[i]);
      continue;
    }
    if (i + 1 >= raw.size()) throw VocabError("dangling backslash in token");
    char32_t e = raw[++i];
    if (e == U'n') {
      out.push_back(U'\n');
    } else if (e == U't') {
      out.push_back(U'\t');
    } else if (e == U'\\') {
      out.push_back(U'\\');
    } else if (e == U'u') {
      if (i + 4 >= raw.size()) {
        throw VocabError("truncated \\u escape in token");
      }
      char32_t value = 0;
      for (int k = 1; k <= 4; ++k) {
        char32_t h = raw[i + k];
        int v = h < 0x80 ? HexValue(static_cast<char>(h)) : -1;
        if (v < 0) throw VocabError("malformed \\u escape in token");
        value = value * 16 + static_cast<char32_t>(v);
      }
      if (IsSurrogate(value)) throw VocabError("\\u escape names a surrogate");
      out.push_back(value);
      i += 4;
    } else {
      throw VocabError("unknown escape \\" + EncodeUtf8(std::u32string(1, e)) + " in token");
    }
  }
  return out;
}

TokenVocabulary TokenVocabulary::FromTokens(std::vector<std::u32string> tokens,
                                            std::optional<std::int32_t> eos) {
  if (tokens.size() > static_cast<std::size_t>(std::numeric_limits<std::int32_t>::max())) {
    throw VocabError("vocabulary too large");
  }
  if (eos.has_value()) {
    if (*eos < 0 || static_cast<std::size_t>(*eos) >= tokens.size()) {
      throw VocabError("EOS id out of range");
    }
    if (!tokens[*eos].empty()) throw VocabError("EOS entry must be empty");
  }
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i].empty() && !(eos.has_value() && static_cast<std::size_t>(*eos) == i)) {
      throw VocabError("token " + std::to_string(i) + " is empty");
    }
    for (char32_t c : tokens[i]) {
      if (!IsScalarValue(c)) throw VocabError("token " + std::to_string(i) + " holds a non-scalar");
    }
  }
  TokenVocabulary vocab;
  vocab.tokens_ = std::move(tokens);
  vocab.eos_ = eos;
  vocab.BuildTrie();
  return vocab;
}

void TokenVocabulary::BuildTrie() {
  trie_.assign(1, TrieNode{});
  max_length_ = 0;
  for (std::size_t id = 0; id < tokens_.size(); ++id) {
    if (is_eos(static_cast<std::int32_t>(id))) continue;
    max_length_ = std::max(max_length_, tokens_[id].size());
    std::int32_t node = 0;
    for (char32_t c : tokens_[id]) {
      auto& children = trie_[node].children;
      auto it = std::lower_bound(children.begin(), children.end(), c,
                                 [this](std::int32_t child, char32_t v) { return trie_[child].ch < v; });
      if (it != children.end() && trie_[*it].ch == c) {
        node = *it;
        continue;
      }
      auto next = static_cast<std::int32_t>(trie_.size());
      auto offset = it - children.begin();
      trie_[node].children.insert(trie_[node].children.begin() + offset, next);
      trie_.push_back(TrieNode{c, {}, {}});
      node = next;
    }
    trie_[node].tokens.push_back(static_cast<std::int32_t>(id));
  }
}

TokenVocabulary TokenVocabulary::Parse(std::string_view text) {
  std::map<std::int64_t, std::u32string> entries;
  std::optional<std::int32_t> eos;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    std::string where = "line " + std::to_string(line_no);
    auto tab = line.find('\t');
    if (tab == std::string_view::npos) throw VocabError(where + ": expected <id><TAB><token>");
    std::int64_t id = -1;
    auto id_text = line.substr(0, tab);
    auto [ptr, ec] = std::from_chars(id_text.data(), id_text.data() + id_text.size(), id);
    if (ec != std::errc() || ptr != id_text.data() + id_text.size() || id < 0) {
      throw VocabError(where + ": malformed id '" + std::string(id_text) + "'");
    }
    if (entries.count(id) != 0) throw VocabError(where + ": duplicate id " + std::to_string(id));
    auto body = line.substr(tab + 1);
    if (body == kEosMarker) {
      if (eos.has_value()) throw VocabError(where + ": second EOS declaration");
      eos = static_cast<std::int32_t>(id);
      entries[id] = U"";
      continue;
    }
    std::u32string token;
    try {
      token = UnescapeToken(body);
    } catch (const VocabError& e) {
      throw VocabError(where + ": " + e.what());
    }
    if (token.empty()) throw VocabError(where + ": empty token");
    entries[id] = std::move(token);
  }
  std::vector<std::u32string> tokens;
  tokens.reserve(entries.size());
  for (const auto& [id, token] : entries) {
    if (id != static_cast<std::int64_t>(tokens.size())) {
      throw VocabError("ids are not dense: missing id " + std::to_string(tokens.size()));
    }
    tokens.push_back(token);
  }
  return FromTokens(std::move(tokens), eos);
}

TokenVocabulary TokenVocabulary::Load(std::istream& in) {
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return Parse(buffer.str());
}

TokenVocabulary TokenVocabulary::LoadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw VocabError("cannot open vocabulary file '" + path + "'");
  return Load(in);
}

std::string TokenVocabulary::Dump() const {
  std::string out;
  for (std::size_t id = 0; id < tokens_.size(); ++id) {
    out += std::to_string(id);
    out += '\t';
    out += is_eos(static_cast<std::int32_t>(id)) ? std::string(kEosMarker) : EscapeToken(tokens_[id]);
    out += '\n';
  }
  return out;
}

std::string TokenVocabulary::text(std::int32_t id) const { return EncodeUtf8(tokens_[id]); }

std::vector<std::string> TokenVocabulary::Texts() const {
  std::vector<std::string> texts;
  texts.reserve(tokens_.size());
  for (const auto& t : tokens_) texts.push_back(EncodeUtf8(t));
  return texts;
}

void TokenMask::Set(std::int32_t id) {
  if (!bits_[id]) {
    bits_[id] = true;
    ++count_;
  }
}

std::vector<std::int32_t> TokenMask::LegalIds() const {
  std::vector<std::int32_t> ids;
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    if (bits_[i]) ids.push_back(static_cast<std::int32_t>(i));
  }
  return ids;
}

TokenMask ComputeTokenMask(const Session& session, const TokenVocabulary& vocab,
                           std::uint64_t* work) {
  TokenMask mask(vocab.size());
  if (!session.alive()) {
    mask.set_dead(true);
    return mask;
  }
  if (vocab.eos().has_value() && session.accepting()) mask.Set(*vocab.eos());
  std::uint64_t spent = 0;
  const auto& trie = vocab.trie();
  struct Item {
    std::int32_t node;
    Frontier frontier;
  };
  std::vector<Item> stack;
  stack.push_back(Item{0, session.frontier()});
  while (!stack.empty()) {
    Item item = std::move(stack.back());
    stack.pop_back();
    for (std::int32_t child : trie[item.node].children) {
      if (item.frontier.threads.empty()) break;
      Frontier next = session.Advance(item.frontier, trie[child].ch, &spent);
      if (!next.alive()) continue;
      for (std::int32_t id : trie[child].tokens) mask.Set(id);
      if (!trie[child].children.empty()) stack.push_back(Item{child, std::move(next)});
    }
  }
  if (work != nullptr) *work += spent;
  return mask;
}

std::vector<double> ApplyMask(const std::vector<double>& logits, const TokenMask& mask,
                              MaskMode mode, double bias) {
  if (logits.size() != mask.size()) {
    throw Error("mask has " + std::to_string(mask.size()) + " entries, logits have " +
                std::to_string(logits.size()));
  }
  std::vector<double> out(logits);
  for (std::size_t i = 0; i < out.size(); ++i) {
    bool legal = mask.Test(static_cast<std::int32_t>(i));
    if (mode == MaskMode::kHard) {
      if (!legal) out[i] = std::numeric_limits<double>::lowest();
    } else {
      out[i] += legal ? bias : -bias;
    }
  }
  return out;
}

DecodeResult DecodeLoop(const Grammar& grammar, const TokenVocabulary& vocab, Backend* backend,
                        const DecodeOptions& options) {
  if (options.budget < 1) throw Error("decode budget must be at least 1");
  if (backend->vocab_size() != vocab.size()) {
    throw BackendError("backend vocabulary size " + std::to_string(backend->vocab_size()) +
                       " differs from vocabulary size " + std::to_string(vocab.size()));
  }
  Session session(grammar);
  std::mt19937_64 rng(options.seed);
  DecodeResult result;
  std::uint64_t spec_work = 0;
  bool hard = options.use_mask && options.mode == MaskMode::kHard;
  while (true) {
    std::int32_t id = -1;
    std::optional<TokenMask> mask;
    if (options.use_mask) {
      mask = ComputeTokenMask(session, vocab, &spec_work);
      if (hard && mask->count() == 0) {
        if (session.finished()) {
          result.finished = true;
          break;
        }
        throw GenerationError("no legal token after '" + session.consumed_utf8() + "'");
      }
      if (hard && options.forced_shortcut && mask->count() == 1) {
        id = mask->LegalIds()[0];
        ++result.stats.forced_moves;
      }
    }
    if (id < 0) {
      std::vector<double> logits =
          backend->Logits(BackendRequest{options.prompt + result.text, result.token_ids});
      if (logits.size() != vocab.size()) {
        throw BackendError("backend returned " + std::to_string(logits.size()) +
                           " logits for a vocabulary of " + std::to_string(vocab.size()));
      }
      if (mask.has_value()) logits = ApplyMask(logits, *mask, options.mode, options.soft_bias);
      id = static_cast<std::int32_t>(SampleIndex(TemperatureScale(logits, options.temperature), &rng));
      ++result.stats.sampler_calls;
    }
    if (vocab.is_eos(id)) {
      result.finished = true;
      break;
    }
    const std::u32string& scalars = vocab.scalars(id);
    if (result.stats.chars_emitted + scalars.size() > options.budget) {
      throw BudgetExhaustedError(result.text, options.budget);
    }
    result.token_ids.push_back(id);
    result.text += EncodeUtf8(scalars);
    result.stats.chars_emitted += scalars.size();
    bool rejected = false;
    for (char32_t c : scalars) {
      if (!session.TryFeed(c)) {
        rejected = true;
        break;
      }
    }
    if (rejected) {
      DSLGUIDE_ICHECK(!hard, "a token allowed by the hard mask was rejected");
      result.alive = false;
      result.finished = true;
      break;
    }
  }
  result.alive = result.alive && session.alive();
  result.accepting = session.accepting();
  result.member = result.finished && result.alive && result.accepting;
  result.work = session.work() + spec_work;
  return result;
}

}  // namespace dslguide
