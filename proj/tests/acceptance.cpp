// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <string>

#include "semcom/appo.hpp"
#include "semcom/corpus.hpp"
#include "semcom/mss.hpp"
#include "semcom/oracle.hpp"
#include "semcom/scenario.hpp"

using namespace semcom;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(const char* name, double time_limit_s, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (time_limit_s > 0 && secs > time_limit_s) {
    o.pass = false;
    o.detail += " (over time limit " + std::to_string(time_limit_s) + " s)";
  }
  if (!o.pass) ++failures;
  std::printf("%s  %-28s %7.3fs  %s\n", o.pass ? "PASS" : "FAIL", name, secs, o.detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

SemanticGraph random_graph(std::mt19937_64& rng, TokenId vocab, std::size_t max_triples) {
  std::uniform_int_distribution<TokenId> tok(0, vocab - 1);
  std::uniform_int_distribution<std::size_t> len(1, 4), count(1, max_triples);
  SemanticGraph g;
  for (std::size_t i = count(rng); i > 0; --i) {
    SemanticTriple t;
    for (std::size_t k = len(rng); k > 0; --k) t.head.push_back(tok(rng));
    t.relation = {tok(rng), tok(rng)};
    for (std::size_t k = len(rng); k > 0; --k) t.tail.push_back(tok(rng));
    g.triples.push_back(std::move(t));
  }
  return g;
}

Outcome mss_example() {
  Vocabulary v;
  const auto orig = tokenize("little girls are playing", v, false);
  const auto rec = tokenize("girls are playing", v, false);
  const auto r = mss(orig, rec, 0.5);
  const double expected = std::exp(-1.0 / 3.0) * (0.75 / 0.875);
  const bool ok = r.accuracy == 1.0 && r.completeness == 0.75 && std::abs(r.score - expected) <= 1e-9 &&
                  std::abs(r.score - 0.614170) <= 1e-6;
  return {ok, "A=" + fmt("%.17g", r.accuracy) + " R=" + fmt("%.17g", r.completeness) + " E=" + fmt("%.9f", r.score)};
}

Outcome selection_example() {
  SemanticTriple a{{1, 1}, {2, 3}, {4, 4, 4}};     // 7 tokens
  SemanticTriple b{{1, 1, 1}, {2, 3}, {4, 4, 4}};  // 8 tokens
  const SemanticGraph g{{a, b}};
  const std::vector<double> f{0.7, 0.3};
  const auto sel = select_triples(g, f, 10);
  const bool ok = triple_token_count(a) == 7 && triple_token_count(b) == 8 && sel.size() == 1 && sel.triples[0] == a;
  return {ok, "selected " + std::to_string(sel.size()) + " triple(s), " + std::to_string(graph_token_count(sel)) +
                  " tokens"};
}

Outcome reduction_fixture() {
  const auto c = load_corpus(SEMCOM_DATA_DIR "/lexicon_abstract.jsonl");
  const auto* d = c.find("lexicon");
  if (!d) return {false, "fixture record missing"};
  const auto z = graph_token_count(d->graph);
  const auto n = d->document.tokens.size();
  const double reduction = 100.0 * (1.0 - static_cast<double>(z) / static_cast<double>(n));
  const bool ok = z == 86 && n == 178 && std::round(reduction * 10.0) / 10.0 == 51.7;
  return {ok, "Z=" + std::to_string(z) + " N=" + std::to_string(n) + " reduction=" + fmt("%.2f%%", reduction)};
}

Outcome penalty_table() {
  const PenaltyState p{1.0, 0.8, 2.0, 1e-4, 1e4};
  const double l1 = update_penalty(p, 2.0).lambda, l2 = update_penalty(p, 0.1).lambda,
               l3 = update_penalty(p, 1.0).lambda;
  return {l1 == 2.0 && l2 == 0.5 && l3 == 1.0,
          "lambda'=" + fmt("%g", l1) + "," + fmt("%g", l2) + "," + fmt("%g", l3)};
}

Outcome softmax_suite() {
  std::mt19937_64 rng(2024);
  const TokenId vocab = 400;
  const EmbeddingTable emb(vocab, 500, 1);
  const auto params = AttentionParams::random(64, 500, 2);
  double worst_sum = 0.0, worst_shift = 0.0, worst_perm = 0.0;
  bool argmax_ok = true;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto g = random_graph(rng, vocab, 12);
    TokenSeq text(1 + rng() % 60);
    for (auto& t : text) t = static_cast<TokenId>(rng() % vocab);
    const auto d = importance_distribution(g, text, emb, params);
    worst_sum = std::max(worst_sum, std::abs(std::accumulate(d.weights.begin(), d.weights.end(), 0.0) - 1.0));

    std::vector<double> shifted = d.raw;
    for (auto& x : shifted) x += 1000.0;
    const auto s = softmax(shifted);
    for (std::size_t i = 0; i < s.size(); ++i) worst_shift = std::max(worst_shift, std::abs(s[i] - d.weights[i]));
    argmax_ok = argmax_ok && std::max_element(s.begin(), s.end()) - s.begin() ==
                                 std::max_element(d.weights.begin(), d.weights.end()) - d.weights.begin();

    std::vector<std::size_t> perm(g.size());
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::shuffle(perm.begin(), perm.end(), rng);
    SemanticGraph pg;
    for (auto i : perm) pg.triples.push_back(g.triples[i]);
    const auto pd = importance_distribution(pg, text, emb, params);
    for (std::size_t k = 0; k < perm.size(); ++k)
      worst_perm = std::max(worst_perm, std::abs(pd.weights[k] - d.weights[perm[k]]));
  }
  const bool ok = worst_sum <= 1e-9 && worst_shift <= 1e-9 && worst_perm <= 1e-9 && argmax_ok;
  return {ok, "max |sum-1|=" + fmt("%.2e", worst_sum) + " shift=" + fmt("%.2e", worst_shift) +
                  " perm=" + fmt("%.2e", worst_perm)};
}

Outcome gradient_check() {
  std::mt19937_64 rng(77);
  PolicyShape shape;
  shape.state_dim = 8;
  shape.users = 2;
  shape.rbs = 2;
  shape.hidden = 8;
  shape.layers = 3;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> n(0.0, 0.3);
  double worst = 0.0;
  for (int draw = 0; draw < 50; ++draw) {
    const auto stored = PolicyParams::random(shape, rng(), 1.0);
    auto flat = stored.flatten();
    for (auto& x : flat) x += n(rng);
    PolicyParams theta = stored;
    theta.assign(flat);
    StateVector s(8);
    for (auto& x : s) x = u(rng);
    MssTable table(2, 2);
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t q = 0; q < 2; ++q) table.at(i, q) = u(rng);
    const auto batch = sample_actions(stored, s, 1 + rng() % 32, rng(), table);
    const double lambda = std::pow(10.0, -2.0 + 3.0 * u(rng));

    const auto g = surrogate_gradient(theta, stored, s, batch, lambda).flatten();
    Eigen::VectorXd fd(flat.size());
    const double h = 1e-5;
    for (Eigen::Index k = 0; k < flat.size(); ++k) {
      auto fp = flat, fm = flat;
      fp[k] += h;
      fm[k] -= h;
      PolicyParams plus = theta, minus = theta;
      plus.assign(fp);
      minus.assign(fm);
      fd[k] = (surrogate_objective(plus, stored, s, batch, lambda) - surrogate_objective(minus, stored, s, batch, lambda)) /
              (2.0 * h);
    }
    worst = std::max(worst, (g - fd).norm() / std::max({g.norm(), fd.norm(), 1e-300}));
  }
  return {worst <= 1e-4, "worst relative error " + fmt("%.2e", worst) + " over 50 draws"};
}

Outcome oracle_equivalence() {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t users = 1 + rng() % 5, rbs = 1 + rng() % 5;
    MssTable t(users, rbs);
    for (std::size_t i = 0; i < users; ++i)
      for (std::size_t q = 0; q < rbs; ++q) t.at(i, q) = u(rng);
    worst = std::max(worst, std::abs(hungarian_optimum(t).value - exhaustive_optimum(t).value));
  }
  return {worst <= 1e-12, "max |hungarian - exhaustive| = " + fmt("%.2e", worst)};
}

struct AppoRun {
  double ratio = 0.0;
  double reward = 0.0;
  double random_reward = 0.0;
  double wall_s = 0.0;
  PolicySnapshot snap;
};

std::vector<AppoRun> appo_runs() {
  SimConfig cfg;
  cfg.users = 4;
  cfg.rbs = 2;
  cfg.batch = 100;
  cfg.inner_iters = 10;
  cfg.max_outer = 500;
  const auto corpus = corpus_for(cfg);
  std::vector<AppoRun> runs;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    AppoRun r;
    const auto start = std::chrono::steady_clock::now();
    const auto sc = build_scenario(cfg, corpus, seed);
    r.snap = train(sc.table, sc.state, train_options(cfg), seed);
    r.wall_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const double opt = hungarian_optimum(sc.table).value;
    r.reward = r.snap.greedy_reward;
    r.ratio = opt > 0.0 ? r.reward / opt : 1.0;
    r.random_reward = baseline_random(sc.table, seed);
    runs.push_back(std::move(r));
  }
  return runs;
}

Outcome near_optimality(const std::vector<AppoRun>& runs) {
  int good = 0;
  double appo = 0.0, random = 0.0, slowest = 0.0, worst = 1.0;
  for (const auto& r : runs) {
    good += r.ratio >= 0.9;
    appo += r.reward;
    random += r.random_reward;
    slowest = std::max(slowest, r.wall_s);
    worst = std::min(worst, r.ratio);
  }
  appo /= static_cast<double>(runs.size());
  random /= static_cast<double>(runs.size());
  const bool ok = good >= 8 && slowest < 60.0 && appo >= random;
  return {ok, std::to_string(good) + "/10 seeds >= 0.9 (worst ratio " + fmt("%.4f", worst) + "), mean appo " +
                  fmt("%.4f", appo) + " vs random " + fmt("%.4f", random) + ", slowest seed " +
                  fmt("%.2f s", slowest)};
}

Outcome objective_trend(const std::vector<AppoRun>& runs) {
  int converged = 0, monotone = 0;
  double worst_drop = 0.0;
  for (const auto& r : runs) {
    if (!r.snap.converged) continue;
    ++converged;
    const auto ma = moving_average_objective(r.snap.log, 20);
    double drop = 0.0;
    for (std::size_t i = ma.size() / 2 + 1; i < ma.size(); ++i) drop = std::max(drop, ma[i - 1] - ma[i]);
    worst_drop = std::max(worst_drop, drop);
    monotone += drop <= 1e-6;
  }
  const bool ok = converged > 0 && monotone == converged;
  return {ok, std::to_string(monotone) + "/" + std::to_string(converged) +
                  " converged runs without a drop > 1e-6; largest drop " + fmt("%.2e", worst_drop)};
}

Outcome budget_fuzz() {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> log_c(3.0, 8.0), u(0.0, 1.0);
  const double o = 80.0, d = 1e-4;
  int violations = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    const auto g = random_graph(rng, 50, 12);
    std::vector<double> w(g.size());
    for (auto& x : w) x = u(rng);
    const double c = std::pow(10.0, log_c(rng));
    const auto sel = select_triples(g, w, token_budget(c, o, d));
    if (static_cast<double>(graph_token_count(sel)) * o > c * d) ++violations;
  }
  return {violations == 0, std::to_string(violations) + " violations in 10000 draws"};
}

}  // namespace

int main() {
  criterion("mss_worked_example", 1.0, mss_example);
  criterion("selection_worked_example", 1.0, selection_example);
  criterion("compression_fixture", 1.0, reduction_fixture);
  criterion("penalty_update_table", 1.0, penalty_table);
  criterion("softmax_simplex_suite", 5.0, softmax_suite);
  criterion("gradient_check", 30.0, gradient_check);
  criterion("oracle_equivalence", 10.0, oracle_equivalence);
  std::vector<AppoRun> runs;
  criterion("appo_near_optimality", 0.0, [&] {
    runs = appo_runs();
    return near_optimality(runs);
  });
  criterion("objective_trend", 0.0, [&] { return objective_trend(runs); });
  criterion("budget_feasibility_fuzz", 5.0, budget_fuzz);
  std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
