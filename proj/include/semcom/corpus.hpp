#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "semcom/semantics.hpp"
#include "semcom/types.hpp"

namespace semcom {

/// Bijection between token strings and dense ids 0..size()-1, assigned in
/// first-seen order.
class Vocabulary {
 public:
  /// Returns the id of `token`, appending it if unseen.
  TokenId intern(std::string_view token);

  /// Returns the id of `token` or kUnknownToken.
  TokenId find(std::string_view token) const;

  bool contains(TokenId id) const { return id < tokens_.size(); }
  const std::string& token(TokenId id) const;
  std::size_t size() const { return tokens_.size(); }
  bool empty() const { return tokens_.empty(); }

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) { return a.tokens_ == b.tokens_; }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, TokenId> ids_;
};

/// Splits text into lowercase tokens: whitespace separates words, and every
/// ASCII punctuation character is emitted as a token of its own.
std::vector<std::string> split_tokens(std::string_view raw_text);

/// Tokenizes `raw_text` against `vocab`. With `frozen` set the vocabulary is
/// left untouched and unseen tokens map to kUnknownToken; otherwise they are
/// appended. Throws InputError when the text has no tokens.
TokenSeq tokenize(std::string_view raw_text, Vocabulary& vocab, bool frozen);
TokenSeq tokenize(std::string_view raw_text, const Vocabulary& vocab);

/// Joins token strings with single spaces. Unknown ids render as "<unk>".
std::string detokenize(const TokenSeq& tokens, const Vocabulary& vocab);

std::size_t count_occurrences(const TokenSeq& tokens, TokenId target);

struct Document {
  std::string id;
  TokenSeq tokens;
  std::size_t entity_count = 0;
};

struct AnnotatedDocument {
  Document document;
  SemanticGraph graph;
};

struct Corpus {
  std::vector<AnnotatedDocument> documents;
  Vocabulary vocab;

  /// Id of the sentence terminator used by the text recoverer. The loader
  /// guarantees "." is in the vocabulary of every non-empty corpus.
  TokenId period() const { return vocab.find("."); }

  const AnnotatedDocument* find(std::string_view id) const;
};

/// Parses a JSON-lines corpus. Throws ParseError (with line number) on
/// malformed lines and SchemaError on rule violations.
Corpus parse_corpus(std::string_view contents);
Corpus load_corpus(const std::filesystem::path& path);

/// Serializes a corpus back to JSON lines (entity and relation tokens are
/// written one per array element).
std::string to_jsonl(const Corpus& corpus);

/// Seeded synthetic corpus: each document is a handful of triples over a
/// small synthetic lexicon, embedded in filler words so that N > Z.
Corpus make_synthetic_corpus(std::size_t documents, std::uint64_t seed);

}  // namespace semcom
