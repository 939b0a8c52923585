#include "semcom/attention.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "semcom/corpus.hpp"
#include "semcom/error.hpp"
#include "semcom/random.hpp"

namespace semcom {
namespace {

Eigen::VectorXd seeded_unit_vector(std::size_t dim, std::uint64_t seed, TokenId id) {
  Rng rng(derive_seed(seed, "embedding", id));
  std::normal_distribution<double> n01(0.0, 1.0);
  Eigen::VectorXd v(static_cast<Eigen::Index>(dim));
  for (auto& x : v) x = n01(rng);
  const double norm = v.norm();
  return norm > 0.0 ? Eigen::VectorXd(v / norm) : Eigen::VectorXd::Unit(v.size(), 0);
}

}  // namespace

EmbeddingTable::EmbeddingTable(std::size_t vocab_size, std::size_t dimension, std::uint64_t seed) {
  if (dimension == 0) throw InputError("embedding dimension must be positive");
  vectors_.resize(static_cast<Eigen::Index>(dimension), static_cast<Eigen::Index>(vocab_size));
  for (std::size_t i = 0; i < vocab_size; ++i)
    vectors_.col(static_cast<Eigen::Index>(i)) = seeded_unit_vector(dimension, seed, static_cast<TokenId>(i));
}

EmbeddingTable EmbeddingTable::load(const std::filesystem::path& path, const Vocabulary& vocab,
                                    std::uint64_t seed) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open embedding file " + path.string());
  EmbeddingTable table;
  std::size_t dim = 0;
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::pair<TokenId, Eigen::VectorXd>> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) throw ParseError("expected token<TAB>values", line_no);
    const std::string token = line.substr(0, tab);
    std::istringstream vals(line.substr(tab + 1));
    std::vector<double> v;
    for (double x; vals >> x;) v.push_back(x);
    if (!vals.eof()) throw ParseError("non-numeric embedding value", line_no);
    if (v.empty()) throw ParseError("embedding row has no values", line_no);
    if (dim == 0) dim = v.size();
    if (v.size() != dim) throw ParseError("embedding row has inconsistent dimension", line_no);
    const TokenId id = vocab.find(token);
    if (id == kUnknownToken) continue;
    Eigen::VectorXd e = Eigen::Map<Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
    const double norm = e.norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) throw ParseError("embedding row has zero or non-finite norm", line_no);
    rows.emplace_back(id, e / norm);
  }
  if (dim == 0) throw ParseError("embedding file is empty");
  table = EmbeddingTable(vocab.size(), dim, seed);
  for (auto& [id, e] : rows) table.vectors_.col(static_cast<Eigen::Index>(id)) = e;
  return table;
}

Eigen::VectorXd EmbeddingTable::embed(TokenId token) const {
  if (token >= size()) throw InputError("token id " + std::to_string(token) + " has no embedding");
  return vectors_.col(static_cast<Eigen::Index>(token));
}

AttentionParams AttentionParams::random(std::size_t attention_dim, std::size_t token_dim, std::uint64_t seed,
                                        bool tied) {
  if (attention_dim == 0 || token_dim == 0) throw InputError("attention dimensions must be positive");
  Rng rng(derive_seed(seed, "attention"));
  std::normal_distribution<double> n(0.0, 1.0 / std::sqrt(static_cast<double>(token_dim)));
  const auto rows = static_cast<Eigen::Index>(attention_dim), cols = static_cast<Eigen::Index>(token_dim);
  AttentionParams p;
  p.w_triple.resize(rows, cols);
  for (auto& x : p.w_triple.reshaped()) x = n(rng);
  if (tied) {
    p.w_text = p.w_triple;
  } else {
    p.w_text.resize(rows, cols);
    for (auto& x : p.w_text.reshaped()) x = n(rng);
  }
  return p;
}

double token_correlation(const Eigen::VectorXd& triple_token, const Eigen::VectorXd& text_token,
                         const AttentionParams& p) {
  if (triple_token.size() != p.w_triple.cols() || text_token.size() != p.w_text.cols())
    throw InputError("token vector dimension does not match attention parameters");
  return (p.w_triple * triple_token).dot(p.w_text * text_token);
}

double triple_text_correlation(const SemanticTriple& triple, const Eigen::VectorXd& text_token,
                               const EmbeddingTable& table, const AttentionParams& p) {
  const Eigen::VectorXd projected_text = p.w_text * text_token;
  double sum = 0.0;
  std::size_t b = 0;
  for (const auto* part : {&triple.head, &triple.relation, &triple.tail}) {
    for (auto tok : *part) {
      sum += (p.w_triple * table.embed(tok)).dot(projected_text);
      ++b;
    }
  }
  if (b == 0) throw InputError("triple has no tokens");
  return sum / static_cast<double>(b);
}

double triple_importance(const SemanticTriple& triple, const TokenSeq& text, const EmbeddingTable& table,
                         const AttentionParams& p) {
  if (text.empty()) throw InputError("text is empty");
  // sum_n mean_b psi(x_b, x_n) = (W_tri mean_b x_b)^T (W_tex sum_n x_n)
  Eigen::VectorXd triple_mean = Eigen::VectorXd::Zero(p.w_triple.cols());
  std::size_t b = 0;
  for (const auto* part : {&triple.head, &triple.relation, &triple.tail}) {
    for (auto tok : *part) {
      triple_mean += table.embed(tok);
      ++b;
    }
  }
  if (b == 0) throw InputError("triple has no tokens");
  triple_mean /= static_cast<double>(b);
  Eigen::VectorXd text_sum = Eigen::VectorXd::Zero(p.w_text.cols());
  for (auto tok : text) text_sum += table.embed(tok);
  if (triple_mean.size() != p.w_triple.cols() || text_sum.size() != p.w_text.cols())
    throw InputError("embedding dimension does not match attention parameters");
  return (p.w_triple * triple_mean).dot(p.w_text * text_sum);
}

std::vector<double> softmax(std::span<const double> scores) {
  if (scores.empty()) return {};
  const double mx = *std::max_element(scores.begin(), scores.end());
  std::vector<double> y(scores.size());
  double total = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) total += (y[i] = std::exp(scores[i] - mx));
  for (auto& v : y) v /= total;
  return y;
}

ImportanceDistribution importance_distribution(const SemanticGraph& g, const TokenSeq& text,
                                               const EmbeddingTable& table, const AttentionParams& p) {
  if (g.empty()) throw InputError("importance of an empty graph is undefined");
  if (text.empty()) throw InputError("text is empty");
  Eigen::VectorXd text_sum = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(table.dimension()));
  for (auto tok : text) text_sum += table.embed(tok);
  const Eigen::VectorXd projected_text = p.w_text * text_sum;

  ImportanceDistribution out;
  out.raw.reserve(g.size());
  for (const auto& t : g.triples) {
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(text_sum.size());
    std::size_t b = 0;
    for (const auto* part : {&t.head, &t.relation, &t.tail}) {
      for (auto tok : *part) {
        mean += table.embed(tok);
        ++b;
      }
    }
    mean /= static_cast<double>(b);
    out.raw.push_back((p.w_triple * mean).dot(projected_text));
  }
  out.weights = softmax(out.raw);
  return out;
}

}  // namespace semcom
