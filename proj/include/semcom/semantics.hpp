#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "semcom/types.hpp"

namespace semcom {

/// (head entity, two-token relation, tail entity).
struct SemanticTriple {
  TokenSeq head;
  TokenSeq relation;
  TokenSeq tail;

  friend bool operator==(const SemanticTriple&, const SemanticTriple&) = default;
};

struct SemanticGraph {
  std::vector<SemanticTriple> triples;

  std::size_t size() const { return triples.size(); }
  bool empty() const { return triples.empty(); }

  friend bool operator==(const SemanticGraph&, const SemanticGraph&) = default;
};

/// Throws SchemaError unless head/tail are non-empty and the relation has
/// exactly two tokens.
void validate_triple(const SemanticTriple& t);

/// S_head + S_tail + 2.
std::size_t triple_token_count(const SemanticTriple& t);

/// Z(G): total token count over all triples.
std::size_t graph_token_count(const SemanticGraph& g);

/// Triple indices sorted by descending weight, ties by ascending index.
std::vector<std::size_t> importance_order(std::span<const double> weights);

/// Longest prefix of `order` whose cumulative token count fits in
/// `token_budget`. Stops at the first triple that does not fit.
SemanticGraph select_prefix(const SemanticGraph& g, std::span<const std::size_t> order,
                            std::size_t token_budget);

/// Budgeted selection in importance order. `weights` must have one entry
/// per triple.
SemanticGraph select_triples(const SemanticGraph& g, std::span<const double> weights,
                             std::size_t token_budget);

/// Template linearizer: head ++ relation ++ tail ++ [period] per triple, in
/// received order.
TokenSeq recover_text(const SemanticGraph& received, TokenId period);

}  // namespace semcom
