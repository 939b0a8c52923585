#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "semcom/semantics.hpp"
#include "semcom/types.hpp"

namespace semcom {

class Vocabulary;

/// One unit-norm vector per vocabulary token, stored column-wise.
class EmbeddingTable {
 public:
  /// Seeded pseudo-random unit vectors. Each column depends only on
  /// (token id, seed), so growing the vocabulary never changes old vectors.
  EmbeddingTable(std::size_t vocab_size, std::size_t dimension, std::uint64_t seed);

  /// Reads `token<TAB>v1 ... vD` rows (whitespace after the tab is fine).
  /// Vocabulary tokens missing from the file keep their seeded vector.
  /// Every row is normalized to unit length.
  static EmbeddingTable load(const std::filesystem::path& path, const Vocabulary& vocab,
                             std::uint64_t seed);

  std::size_t dimension() const { return static_cast<std::size_t>(vectors_.rows()); }
  std::size_t size() const { return static_cast<std::size_t>(vectors_.cols()); }
  const Eigen::MatrixXd& matrix() const { return vectors_; }

  /// Throws InputError for ids outside the table.
  Eigen::VectorXd embed(TokenId token) const;

 private:
  EmbeddingTable() = default;
  Eigen::MatrixXd vectors_;
};

inline Eigen::VectorXd embed(TokenId token, const EmbeddingTable& table) { return table.embed(token); }

/// Bilinear projection matrices, each D_a x D_x.
struct AttentionParams {
  Eigen::MatrixXd w_triple;
  Eigen::MatrixXd w_text;

  /// Gaussian entries with std 1/sqrt(D_x). With `tied` the text projection
  /// reuses the triple projection, so a token correlates positively with itself.
  static AttentionParams random(std::size_t attention_dim, std::size_t token_dim, std::uint64_t seed,
                                bool tied = true);
};

/// psi = (W_tri x_b)^T (W_tex x_n).
double token_correlation(const Eigen::VectorXd& triple_token, const Eigen::VectorXd& text_token,
                         const AttentionParams& p);

/// beta = mean over the triple's B tokens of psi(x_b, text_token).
double triple_text_correlation(const SemanticTriple& triple, const Eigen::VectorXd& text_token,
                               const EmbeddingTable& table, const AttentionParams& p);

/// varsigma = sum over text tokens of beta.
double triple_importance(const SemanticTriple& triple, const TokenSeq& text, const EmbeddingTable& table,
                         const AttentionParams& p);

struct ImportanceDistribution {
  std::vector<double> weights;  ///< y, on the simplex
  std::vector<double> raw;      ///< varsigma

  std::size_t size() const { return weights.size(); }
};

/// Max-subtracted softmax.
std::vector<double> softmax(std::span<const double> scores);

/// Importance of every triple of `g` against `text`, softmax-normalized.
/// Throws InputError for an empty graph or empty text.
ImportanceDistribution importance_distribution(const SemanticGraph& g, const TokenSeq& text,
                                               const EmbeddingTable& table, const AttentionParams& p);

}  // namespace semcom
