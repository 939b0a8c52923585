#pragma once

#include <memory>

#include "semcom/appo.hpp"
#include "semcom/config.hpp"
#include "semcom/corpus.hpp"
#include "semcom/oracle.hpp"

namespace semcom {

/// One fully specified problem instance: documents per user, channels, the
/// per-cell MSS table and the policy state.
struct Scenario {
  std::shared_ptr<const Corpus> corpus;
  RbGrid grid;
  std::vector<UserLink> links;
  LinkBudget budget;
  TokenId period = kUnknownToken;
  std::vector<UserPayload> users;  ///< importance over each user's full graph
  StateVector state;
  MssTable table;
  std::uint64_t seed = 0;
};

/// Loads `corpus_path`, or builds the synthetic corpus when it is empty.
std::shared_ptr<const Corpus> corpus_for(const SimConfig& cfg);

struct AttentionModel {
  EmbeddingTable embeddings;
  AttentionParams params;
};

AttentionModel make_attention(const SimConfig& cfg, const Vocabulary& vocab);

RbGrid make_grid(const SimConfig& cfg);

/// User i receives document i (users beyond the corpus get no document).
/// Channel draws come from the "environment" stream of `seed`.
Scenario build_scenario(const SimConfig& cfg, std::shared_ptr<const Corpus> corpus, std::uint64_t seed);

TrainOptions train_options(const SimConfig& cfg);

}  // namespace semcom
