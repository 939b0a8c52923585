#include "semcom/commands.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "json.hpp"
#include "semcom/error.hpp"
#include "semcom/scenario.hpp"

namespace semcom::cli {
namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw InputError("cannot read " + p.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::filesystem::path& p, const std::string& contents) {
  std::ofstream out(p);
  if (!out) throw Error("cannot write " + p.string());
  out << contents;
}

json params_to_json(const PolicyParams& p) {
  json layers = json::array();
  for (std::size_t l = 0; l < p.weights.size(); ++l) {
    json w = json::array();
    for (Eigen::Index r = 0; r < p.weights[l].rows(); ++r) {
      json row = json::array();
      for (Eigen::Index c = 0; c < p.weights[l].cols(); ++c) row.push_back(p.weights[l](r, c));
      w.push_back(std::move(row));
    }
    layers.push_back({{"weight", std::move(w)}, {"bias", std::vector<double>(p.biases[l].begin(), p.biases[l].end())}});
  }
  return {{"state_dim", p.shape.state_dim}, {"users", p.shape.users}, {"rbs", p.shape.rbs},
          {"hidden", p.shape.hidden},       {"layers", std::move(layers)}};
}

json assignment_to_json(const RbAssignment& a) {
  json arr = json::array();
  for (const auto& u : a.user_of_rb) arr.push_back(u ? json(*u) : json(nullptr));
  return arr;
}

// Distinguishes configuration problems (exit 2) from everything else (exit 3).
template <typename F>
int guarded(std::ostream& err, F&& f) {
  try {
    return f();
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const SchemaError& e) {
    err << "schema error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

}  // namespace

bool resolve_config(const std::string& path, const std::vector<std::string>& overrides, SimConfig& cfg,
                    std::ostream& err) {
  try {
    cfg = path.empty() ? SimConfig{} : load_config(path);
    for (const auto& kv : overrides) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw ConfigError("override must be key=value: " + kv);
      set_config_value(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
    validate_config(cfg);
    return true;
  } catch (const Error& e) {
    err << "config error: " << e.what() << '\n';
    return false;
  }
}

int cmd_score(const std::filesystem::path& original, const std::filesystem::path& recovered, double phi,
              std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (!std::filesystem::exists(original)) throw InputError("missing file " + original.string());
    if (!std::filesystem::exists(recovered)) throw InputError("missing file " + recovered.string());
    Vocabulary vocab;
    const auto orig = tokenize(read_file(original), vocab, false);
    const auto rec_text = read_file(recovered);
    const TokenSeq rec = split_tokens(rec_text).empty() ? TokenSeq{} : tokenize(rec_text, vocab);
    const auto r = mss(orig, rec, phi);
    json j = {{"A", r.accuracy},     {"R", r.completeness},        {"xi", r.penalty},
              {"E", r.score},        {"M", r.recovered_length},    {"N", r.original_length},
              {"degenerate", r.degenerate}};
    out << j.dump() << '\n';
    return kExitOk;
  });
}

int cmd_importance(const SimConfig& cfg, const std::string& doc_id, const std::string& format, std::ostream& out,
                   std::ostream& err) {
  return guarded(err, [&] {
    if (format != "csv" && format != "json") throw InputError("format must be csv or json");
    const auto corpus = corpus_for(cfg);
    const auto* doc = corpus->find(doc_id);
    if (!doc) throw InputError("unknown document id " + doc_id);
    const auto model = make_attention(cfg, corpus->vocab);
    const auto dist = importance_distribution(doc->graph, doc->document.tokens, model.embeddings, model.params);
    auto words = [&](const TokenSeq& s) { return detokenize(s, corpus->vocab); };
    if (format == "json") {
      json rows = json::array();
      for (std::size_t g = 0; g < doc->graph.size(); ++g) {
        const auto& t = doc->graph.triples[g];
        rows.push_back({{"index", g},
                        {"head", words(t.head)},
                        {"relation", words(t.relation)},
                        {"tail", words(t.tail)},
                        {"tokens", triple_token_count(t)},
                        {"score", dist.raw[g]},
                        {"weight", dist.weights[g]}});
      }
      out << json{{"id", doc_id}, {"N", doc->document.tokens.size()}, {"Z", graph_token_count(doc->graph)},
                  {"triples", rows}}
                 .dump(2)
          << '\n';
    } else {
      out << std::setprecision(17) << "index,head,relation,tail,tokens,score,weight\n";
      for (std::size_t g = 0; g < doc->graph.size(); ++g) {
        const auto& t = doc->graph.triples[g];
        out << g << ',' << words(t.head) << ',' << words(t.relation) << ',' << words(t.tail) << ','
            << triple_token_count(t) << ',' << dist.raw[g] << ',' << dist.weights[g] << '\n';
      }
    }
    return kExitOk;
  });
}

int cmd_train(const SimConfig& cfg, const std::filesystem::path& run_dir, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    validate_config(cfg);
    const auto corpus = corpus_for(cfg);
    const auto started = Clock::now();
    const auto sc = build_scenario(cfg, corpus, cfg.seed);
    const auto snap = train(sc.table, sc.state, train_options(cfg), cfg.seed);
    const auto optimum = hungarian_optimum(sc.table);
    const double wall = std::chrono::duration<double>(Clock::now() - started).count();

    std::filesystem::create_directories(run_dir);
    write_file(run_dir / "config.resolved", to_resolved(cfg));
    write_file(run_dir / "convergence.csv", log_to_csv(snap.log));
    json snapshot = {{"theta", params_to_json(snap.theta)},
                     {"stored", params_to_json(snap.stored)},
                     {"lambda", snap.lambda}};
    write_file(run_dir / "snapshot.json", snapshot.dump() + "\n");
    const double ratio = optimum.value > 0.0 ? snap.greedy_reward / optimum.value : 1.0;
    json summary = {{"seed", cfg.seed},
                    {"final_reward", snap.greedy_reward},
                    {"hungarian_optimum", optimum.value},
                    {"ratio", ratio},
                    {"iterations", snap.iterations},
                    {"converged", snap.converged},
                    {"assignment", assignment_to_json(snap.greedy_assignment)},
                    {"optimal_assignment", assignment_to_json(optimum.assignment)},
                    {"wall_s", wall}};
    write_file(run_dir / "summary.json", summary.dump(2) + "\n");
    if (!snap.converged) err << "warning: not converged after " << snap.iterations << " outer rounds\n";
    out << summary.dump(2) << '\n';
    return kExitOk;
  });
}

int cmd_compare(const SimConfig& cfg, const std::filesystem::path& run_dir, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    validate_config(cfg);
    const auto corpus = corpus_for(cfg);
    const char* const methods[] = {"appo", "apg", "random", "random_selection", "truncated_text", "hungarian"};
    constexpr std::size_t kMethods = std::size(methods);
    std::vector<std::vector<double>> rewards(kMethods), iters(kMethods);
    std::vector<double> wall(kMethods, 0.0);
    std::filesystem::create_directories(run_dir);
    write_file(run_dir / "config.resolved", to_resolved(cfg));

    auto timed = [&](std::size_t m, auto&& f) {
      const auto t0 = Clock::now();
      f();
      wall[m] += std::chrono::duration<double>(Clock::now() - t0).count();
    };
    for (auto seed : cfg.seed_list()) {
      const auto sc = build_scenario(cfg, corpus, seed);
      const auto opts = train_options(cfg);
      PolicySnapshot appo;
      timed(0, [&] { appo = train(sc.table, sc.state, opts, seed); });
      rewards[0].push_back(appo.greedy_reward);
      iters[0].push_back(static_cast<double>(appo.iterations));
      write_file(run_dir / ("appo_seed" + std::to_string(seed) + ".csv"), log_to_csv(appo.log));

      PolicySnapshot apg;
      timed(1, [&] { apg = train(sc.table, sc.state, apg_options(opts), seed); });
      rewards[1].push_back(apg.greedy_reward);
      iters[1].push_back(static_cast<double>(apg.iterations));
      write_file(run_dir / ("apg_seed" + std::to_string(seed) + ".csv"), log_to_csv(apg.log));

      timed(2, [&] { rewards[2].push_back(baseline_random(sc.table, seed)); });
      timed(3, [&] {
        rewards[3].push_back(baseline_random_selection(sc.users, sc.links, sc.grid, sc.budget, sc.period,
                                                       appo.greedy_assignment, seed));
      });
      timed(4, [&] {
        rewards[4].push_back(baseline_truncated_text(sc.users, sc.links, sc.grid, sc.budget, appo.greedy_assignment));
      });
      timed(5, [&] { rewards[5].push_back(hungarian_optimum(sc.table).value); });
      for (std::size_t m = 2; m < kMethods; ++m) iters[m].push_back(0.0);
    }

    std::ostringstream csv;
    csv << std::setprecision(17) << "method,mean_reward,std_reward,mean_iters,wall_s\n";
    for (std::size_t m = 0; m < kMethods; ++m) {
      const auto& r = rewards[m];
      double mean = 0.0, var = 0.0, it = 0.0;
      for (double v : r) mean += v;
      mean /= static_cast<double>(r.size());
      for (double v : r) var += (v - mean) * (v - mean);
      var /= static_cast<double>(r.size());
      for (double v : iters[m]) it += v;
      it /= static_cast<double>(iters[m].size());
      csv << methods[m] << ',' << mean << ',' << std::sqrt(var) << ',' << it << ',' << wall[m] << '\n';
    }
    write_file(run_dir / "compare.csv", csv.str());
    out << csv.str();
    return kExitOk;
  });
}

int cmd_table(const SimConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto sc = build_scenario(cfg, corpus_for(cfg), cfg.seed);
    out << std::setprecision(17) << "user";
    for (std::size_t q = 0; q < sc.table.rbs(); ++q) out << ",rb" << q;
    out << '\n';
    for (std::size_t i = 0; i < sc.table.users(); ++i) {
      out << i;
      for (std::size_t q = 0; q < sc.table.rbs(); ++q) out << ',' << sc.table.at(i, q);
      out << '\n';
    }
    return kExitOk;
  });
}

int cmd_synth(std::size_t documents, std::uint64_t seed, const std::filesystem::path& path, std::ostream& err) {
  return guarded(err, [&] {
    write_file(path, to_jsonl(make_synthetic_corpus(documents, seed)));
    return kExitOk;
  });
}

}  // namespace semcom::cli
