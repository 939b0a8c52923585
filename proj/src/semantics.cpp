#include "semcom/semantics.hpp"

#include <algorithm>
#include <numeric>

#include "semcom/error.hpp"

namespace semcom {

void validate_triple(const SemanticTriple& t) {
  if (t.head.empty() || t.tail.empty()) throw SchemaError("triple entity is empty");
  if (t.relation.size() != 2) throw SchemaError("triple relation must have exactly two tokens");
}

std::size_t triple_token_count(const SemanticTriple& t) {
  // Relations are fixed two-token phrases.
  return t.head.size() + t.tail.size() + 2;
}

std::size_t graph_token_count(const SemanticGraph& g) {
  std::size_t z = 0;
  for (const auto& t : g.triples) z += triple_token_count(t);
  return z;
}

std::vector<std::size_t> importance_order(std::span<const double> weights) {
  std::vector<std::size_t> order(weights.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return weights[a] > weights[b]; });
  return order;
}

SemanticGraph select_prefix(const SemanticGraph& g, std::span<const std::size_t> order,
                            std::size_t token_budget) {
  SemanticGraph out;
  std::size_t used = 0;
  for (auto idx : order) {
    const auto& t = g.triples.at(idx);
    const auto cost = triple_token_count(t);
    if (used + cost > token_budget) break;
    used += cost;
    out.triples.push_back(t);
  }
  return out;
}

SemanticGraph select_triples(const SemanticGraph& g, std::span<const double> weights,
                             std::size_t token_budget) {
  if (weights.size() != g.size())
    throw InputError("importance distribution has " + std::to_string(weights.size()) +
                     " weights for " + std::to_string(g.size()) + " triples");
  const auto order = importance_order(weights);
  return select_prefix(g, order, token_budget);
}

TokenSeq recover_text(const SemanticGraph& received, TokenId period) {
  TokenSeq out;
  for (const auto& t : received.triples) {
    out.insert(out.end(), t.head.begin(), t.head.end());
    out.insert(out.end(), t.relation.begin(), t.relation.end());
    out.insert(out.end(), t.tail.begin(), t.tail.end());
    out.push_back(period);
  }
  return out;
}

}  // namespace semcom
