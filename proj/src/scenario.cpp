#include "semcom/scenario.hpp"

#include "semcom/error.hpp"

namespace semcom {

std::shared_ptr<const Corpus> corpus_for(const SimConfig& cfg) {
  if (!cfg.corpus_path.empty()) return std::make_shared<const Corpus>(load_corpus(cfg.corpus_path));
  const std::size_t n = cfg.synthetic_documents ? cfg.synthetic_documents : cfg.users;
  return std::make_shared<const Corpus>(make_synthetic_corpus(n, cfg.corpus_seed));
}

AttentionModel make_attention(const SimConfig& cfg, const Vocabulary& vocab) {
  auto table = cfg.embedding_path.empty()
                   ? EmbeddingTable(vocab.size(), cfg.token_dim, cfg.attention_seed)
                   : EmbeddingTable::load(cfg.embedding_path, vocab, cfg.attention_seed);
  auto params = AttentionParams::random(cfg.attention_dim, table.dimension(), cfg.attention_seed, cfg.attention_tied);
  return {std::move(table), std::move(params)};
}

RbGrid make_grid(const SimConfig& cfg) {
  RbGrid g;
  g.bandwidth_hz = cfg.bandwidth_hz;
  g.interference_w = cfg.interference_per_rb();
  g.noise_psd_w_per_hz = dbm_per_hz_to_watts(cfg.noise_dbm_per_hz);
  return g;
}

Scenario build_scenario(const SimConfig& cfg, std::shared_ptr<const Corpus> corpus, std::uint64_t seed) {
  validate_config(cfg);
  if (!corpus) throw InputError("no corpus");
  Scenario sc;
  sc.corpus = std::move(corpus);
  sc.seed = seed;
  sc.grid = make_grid(cfg);
  sc.budget = {cfg.bits_per_token, cfg.delay_s, cfg.phi};
  sc.period = sc.corpus->period();
  auto env = make_rng(seed, "environment");
  sc.links = place_users(cfg.users, cfg.cell_radius_m, cfg.min_distance_m, cfg.power_w, env);

  const auto model = make_attention(cfg, sc.corpus->vocab);
  std::vector<ImportanceDistribution> blocks;
  for (std::size_t i = 0; i < cfg.users; ++i) {
    UserPayload p;
    if (i < sc.corpus->documents.size()) {
      p.document = &sc.corpus->documents[i];
      if (!p.document->graph.empty())
        p.importance = importance_distribution(p.document->graph, p.document->document.tokens, model.embeddings,
                                               model.params);
    }
    auto block = p.importance;
    truncate_distribution(block, cfg.g_max);
    blocks.push_back(std::move(block));
    sc.users.push_back(std::move(p));
  }
  sc.state = build_state(blocks, cfg.g_max);
  sc.table = build_mss_table(sc.users, sc.links, sc.grid, sc.budget, sc.period);
  return sc;
}

TrainOptions train_options(const SimConfig& cfg) {
  TrainOptions o;
  o.batch = cfg.batch;
  o.inner_iters = cfg.inner_iters;
  o.learning_rate = cfg.learning_rate;
  o.penalty.lambda = cfg.lambda_init;
  o.penalty.tau = cfg.tau;
  o.penalty.eta = cfg.eta;
  o.penalty.lambda_min = cfg.lambda_min;
  o.penalty.lambda_max = cfg.lambda_max;
  o.max_outer = cfg.max_outer;
  o.window = cfg.window;
  o.tolerance = cfg.tolerance;
  o.hidden = cfg.hidden;
  o.layers = cfg.layers;
  return o;
}

}  // namespace semcom
