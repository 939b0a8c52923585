#include "semcom/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_set>

#include "json.hpp"
#include "semcom/error.hpp"
#include "semcom/random.hpp"

namespace semcom {

TokenId Vocabulary::intern(std::string_view token) {
  auto it = ids_.find(std::string(token));
  if (it != ids_.end()) return it->second;
  const auto id = static_cast<TokenId>(tokens_.size());
  tokens_.emplace_back(token);
  ids_.emplace(tokens_.back(), id);
  return id;
}

TokenId Vocabulary::find(std::string_view token) const {
  auto it = ids_.find(std::string(token));
  return it == ids_.end() ? kUnknownToken : it->second;
}

const std::string& Vocabulary::token(TokenId id) const {
  if (!contains(id)) throw InputError("token id " + std::to_string(id) + " not in vocabulary");
  return tokens_[id];
}

std::vector<std::string> split_tokens(std::string_view raw_text) {
  std::vector<std::string> out;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) out.push_back(std::move(current));
    current.clear();
  };
  for (char raw : raw_text) {
    const auto c = static_cast<unsigned char>(raw);
    if (std::isspace(c)) {
      flush();
    } else if (std::ispunct(c)) {
      flush();
      out.emplace_back(1, raw);
    } else {
      current.push_back(static_cast<char>(std::tolower(c)));
    }
  }
  flush();
  return out;
}

TokenSeq tokenize(std::string_view raw_text, Vocabulary& vocab, bool frozen) {
  const auto words = split_tokens(raw_text);
  if (words.empty()) throw InputError("empty document: no tokens after trimming");
  TokenSeq ids;
  ids.reserve(words.size());
  for (const auto& w : words) ids.push_back(frozen ? vocab.find(w) : vocab.intern(w));
  return ids;
}

TokenSeq tokenize(std::string_view raw_text, const Vocabulary& vocab) {
  const auto words = split_tokens(raw_text);
  if (words.empty()) throw InputError("empty document: no tokens after trimming");
  TokenSeq ids;
  ids.reserve(words.size());
  for (const auto& w : words) ids.push_back(vocab.find(w));
  return ids;
}

std::string detokenize(const TokenSeq& tokens, const Vocabulary& vocab) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out.push_back(' ');
    out += vocab.contains(tokens[i]) ? vocab.token(tokens[i]) : std::string("<unk>");
  }
  return out;
}

std::size_t count_occurrences(const TokenSeq& tokens, TokenId target) {
  return static_cast<std::size_t>(std::count(tokens.begin(), tokens.end(), target));
}

const AnnotatedDocument* Corpus::find(std::string_view id) const {
  for (const auto& d : documents)
    if (d.document.id == id) return &d;
  return nullptr;
}

namespace {

using nlohmann::json;

std::vector<std::string> token_strings(const json& arr, std::size_t line, const char* field) {
  if (!arr.is_array()) throw ParseError(std::string(field) + " must be an array of strings", line);
  std::vector<std::string> out;
  for (const auto& el : arr) {
    if (!el.is_string()) throw ParseError(std::string(field) + " must be an array of strings", line);
    for (auto& t : split_tokens(el.get<std::string>())) out.push_back(std::move(t));
  }
  return out;
}

AnnotatedDocument parse_record(const json& rec, std::size_t line, Vocabulary& vocab) {
  if (!rec.is_object()) throw ParseError("record is not a JSON object", line);
  if (!rec.contains("id") || !rec["id"].is_string()) throw ParseError("missing string field \"id\"", line);
  if (!rec.contains("text") || !rec["text"].is_string()) throw ParseError("missing string field \"text\"", line);
  if (!rec.contains("triples") || !rec["triples"].is_array())
    throw ParseError("missing array field \"triples\"", line);

  AnnotatedDocument doc;
  doc.document.id = rec["id"].get<std::string>();
  const auto text_words = split_tokens(rec["text"].get<std::string>());
  if (text_words.empty()) throw SchemaError("line " + std::to_string(line) + ": empty document text");
  for (const auto& w : text_words) doc.document.tokens.push_back(vocab.intern(w));
  const std::unordered_set<std::string> in_text(text_words.begin(), text_words.end());

  std::set<TokenSeq> entities;
  for (const auto& t : rec["triples"]) {
    if (!t.is_object() || !t.contains("head") || !t.contains("relation") || !t.contains("tail"))
      throw ParseError("triple needs head, relation and tail", line);
    if (!t["relation"].is_array() || t["relation"].size() != 2)
      throw SchemaError("line " + std::to_string(line) + ": relation must have exactly 2 elements");
    const auto head = token_strings(t["head"], line, "head");
    const auto rel = token_strings(t["relation"], line, "relation");
    const auto tail = token_strings(t["tail"], line, "tail");
    if (rel.size() != 2)
      throw SchemaError("line " + std::to_string(line) + ": relation must be a two-token sequence");
    if (head.empty() || tail.empty())
      throw SchemaError("line " + std::to_string(line) + ": empty entity in triple");
    SemanticTriple triple;
    for (const auto* part : {&head, &tail}) {
      for (const auto& w : *part) {
        if (!in_text.contains(w))
          throw SchemaError("line " + std::to_string(line) + ": entity token \"" + w +
                            "\" does not occur in the text of record " + doc.document.id);
      }
    }
    for (const auto& w : head) triple.head.push_back(vocab.intern(w));
    for (const auto& w : rel) triple.relation.push_back(vocab.intern(w));
    for (const auto& w : tail) triple.tail.push_back(vocab.intern(w));
    entities.insert(triple.head);
    entities.insert(triple.tail);
    doc.graph.triples.push_back(std::move(triple));
  }
  doc.document.entity_count = entities.size();
  return doc;
}

}  // namespace

Corpus parse_corpus(std::string_view contents) {
  Corpus corpus;
  std::unordered_set<std::string> ids;
  std::istringstream in{std::string(contents)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); })) continue;
    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(std::string("malformed JSON: ") + e.what(), line_no);
    }
    auto doc = parse_record(rec, line_no, corpus.vocab);
    if (!ids.insert(doc.document.id).second)
      throw SchemaError("line " + std::to_string(line_no) + ": duplicate document id " + doc.document.id);
    corpus.documents.push_back(std::move(doc));
  }
  if (!corpus.documents.empty()) corpus.vocab.intern(".");
  return corpus;
}

Corpus load_corpus(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open corpus file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_corpus(buf.str());
}

std::string to_jsonl(const Corpus& corpus) {
  std::string out;
  auto words = [&](const TokenSeq& seq) {
    json arr = json::array();
    for (auto id : seq) arr.push_back(corpus.vocab.token(id));
    return arr;
  };
  for (const auto& d : corpus.documents) {
    json rec;
    rec["id"] = d.document.id;
    rec["text"] = detokenize(d.document.tokens, corpus.vocab);
    rec["triples"] = json::array();
    for (const auto& t : d.graph.triples)
      rec["triples"].push_back({{"head", words(t.head)}, {"relation", words(t.relation)}, {"tail", words(t.tail)}});
    out += rec.dump();
    out.push_back('\n');
  }
  return out;
}

namespace {

const char* const kRelations[][2] = {{"used", "for"},    {"part", "of"},     {"feature", "of"},
                                     {"compare", "with"}, {"evaluate", "for"}, {"hyponym", "of"},
                                     {"conjunction", "with"}};
const char* const kFiller[] = {"the",  "a",    "of",      "we",       "this",    "that",  "and",
                               "is",   "in",   "with",    "show",     "results", "our",   "method",
                               "can",  "by",   "from",    "approach", "paper",   "which", "these"};

std::string make_word(Rng& rng) {
  static const char* const kOnsets[] = {"b", "d", "f", "g", "k", "l", "m", "n", "p", "r", "s", "t", "v", "z"};
  static const char* const kVowels[] = {"a", "e", "i", "o", "u"};
  std::uniform_int_distribution<int> syll(2, 3), on(0, 13), vo(0, 4);
  std::string w;
  for (int i = syll(rng); i > 0; --i) {
    w += kOnsets[on(rng)];
    w += kVowels[vo(rng)];
  }
  return w;
}

}  // namespace

Corpus make_synthetic_corpus(std::size_t documents, std::uint64_t seed) {
  Rng rng(derive_seed(seed, "corpus"));
  std::vector<std::string> lexicon;
  {
    std::unordered_set<std::string> seen;
    while (lexicon.size() < 400) {
      auto w = make_word(rng);
      if (seen.insert(w).second) lexicon.push_back(std::move(w));
    }
  }
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  auto filler = [&](std::vector<std::string>& out, int n) {
    for (int i = 0; i < n; ++i) out.push_back(kFiller[pick(0, std::size(kFiller) - 1)]);
  };

  std::string text;
  for (std::size_t d = 0; d < documents; ++d) {
    const int n_triples = pick(4, 12);
    const int n_entities = std::max(2, n_triples * 2 / 3 + 1);
    std::vector<std::vector<std::string>> entities;
    for (int e = 0; e < n_entities; ++e) {
      std::vector<std::string> ent;
      for (int k = pick(1, 4); k > 0; --k) ent.push_back(lexicon[pick(0, static_cast<int>(lexicon.size()) - 1)]);
      entities.push_back(std::move(ent));
    }
    std::vector<std::string> words;
    json triples = json::array();
    for (int t = 0; t < n_triples; ++t) {
      const int h = pick(0, n_entities - 1);
      int tl = pick(0, n_entities - 2);
      if (tl >= h) ++tl;
      const auto& rel = kRelations[pick(0, std::size(kRelations) - 1)];
      filler(words, pick(1, 3));
      words.insert(words.end(), entities[h].begin(), entities[h].end());
      filler(words, pick(1, 3));
      words.insert(words.end(), entities[tl].begin(), entities[tl].end());
      filler(words, pick(0, 2));
      words.emplace_back(".");
      triples.push_back({{"head", entities[h]}, {"relation", {rel[0], rel[1]}}, {"tail", entities[tl]}});
    }
    std::string joined;
    for (std::size_t i = 0; i < words.size(); ++i) {
      if (i) joined.push_back(' ');
      joined += words[i];
    }
    json rec = {{"id", "syn" + std::to_string(d)}, {"text", joined}, {"triples", triples}};
    text += rec.dump();
    text.push_back('\n');
  }
  return parse_corpus(text);
}

}  // namespace semcom
