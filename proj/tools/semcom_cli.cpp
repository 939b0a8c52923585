// Command-line front end: score, importance, train, compare, table, synth.
#include <iostream>

#include "CLI11.hpp"
#include "semcom/commands.hpp"

int main(int argc, char** argv) {
  using namespace semcom::cli;
  CLI::App app{"Semantic communication resource allocation toolkit"};
  app.require_subcommand(1);

  std::string original, recovered;
  double phi = 0.5;
  auto* score = app.add_subcommand("score", "Score a recovered text against the original");
  score->add_option("--original", original, "Original text file")->required();
  score->add_option("--recovered", recovered, "Recovered text file")->required();
  score->add_option("--phi", phi, "Accuracy/completeness trade-off in (0,1)");

  std::string config_path;
  std::vector<std::string> overrides;
  auto add_config = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "key=value config file");
    sub->add_option("--set", overrides, "Override a config key (key=value), repeatable");
  };

  std::string doc_id, format = "csv";
  auto* importance = app.add_subcommand("importance", "Print triple importance for one document");
  add_config(importance);
  importance->add_option("--doc", doc_id, "Document id")->required();
  importance->add_option("--format", format, "csv or json");

  std::string run_dir = "run";
  auto* train = app.add_subcommand("train", "Train the allocation policy on one instance");
  add_config(train);
  train->add_option("--out", run_dir, "Run directory");

  auto* compare = app.add_subcommand("compare", "Compare all methods over the configured seeds");
  add_config(compare);
  compare->add_option("--out", run_dir, "Run directory");

  auto* table = app.add_subcommand("table", "Print the user x RB MSS table");
  add_config(table);

  std::size_t documents = 30;
  std::uint64_t synth_seed = 7;
  std::string synth_path;
  auto* synth = app.add_subcommand("synth", "Write a synthetic corpus");
  synth->add_option("--documents", documents, "Number of documents");
  synth->add_option("--seed", synth_seed, "Generator seed");
  synth->add_option("--out", synth_path, "Output JSON-lines file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  if (score->parsed()) return cmd_score(original, recovered, phi, std::cout, std::cerr);
  if (synth->parsed()) return cmd_synth(documents, synth_seed, synth_path, std::cerr);

  semcom::SimConfig cfg;
  if (!resolve_config(config_path, overrides, cfg, std::cerr)) return kExitUsage;
  if (importance->parsed()) return cmd_importance(cfg, doc_id, format, std::cout, std::cerr);
  if (train->parsed()) return cmd_train(cfg, run_dir, std::cout, std::cerr);
  if (compare->parsed()) return cmd_compare(cfg, run_dir, std::cout, std::cerr);
  if (table->parsed()) return cmd_table(cfg, std::cout, std::cerr);
  return kExitUsage;
}
