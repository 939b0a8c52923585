// Runs the command-line tool end to end.
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out;
};

fs::path scratch() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / ("semcom_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

Result run(const std::string& args) {
  const auto out = scratch() / "stdout.txt";
  const std::string cmd = std::string(SEMCOM_CLI_PATH) + " " + args + " > " + out.string() + " 2> " +
                          (scratch() / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  std::ifstream in(out);
  std::stringstream buf;
  buf << in.rdbuf();
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, buf.str()};
}

fs::path write(const std::string& name, const std::string& text) {
  const auto p = scratch() / name;
  std::ofstream(p) << text;
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

TEST_CASE("score") {
  const auto orig = write("orig.txt", "little girls are playing\n");
  const auto rec = write("rec.txt", "girls are playing\n");
  const auto empty = write("empty.txt", "");

  auto r = run("score --original " + orig.string() + " --recovered " + rec.string());
  REQUIRE(r.code == 0);
  auto j = json::parse(r.out);
  CHECK(j["A"] == 1.0);
  CHECK(j["R"] == 0.75);
  CHECK(j["M"] == 3);
  CHECK(j["N"] == 4);
  CHECK(std::abs(j["E"].get<double>() - 0.614170) < 1e-6);

  r = run("score --original " + orig.string() + " --recovered " + orig.string());
  CHECK(json::parse(r.out)["E"] == 1.0);
  r = run("score --original " + orig.string() + " --recovered " + empty.string());
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out)["E"] == 0.0);

  CHECK(run("score --original " + orig.string() + " --recovered /nonexistent/file").code == 2);
  CHECK(run("score --original " + orig.string()).code == 2);
}

TEST_CASE("importance") {
  const auto single = write(
      "single.jsonl",
      R"({"id":"one","text":"little girls are playing .","triples":[{"head":["girls"],"relation":["are","playing"],"tail":["little"]}]})"
      "\n");
  auto r = run("importance --doc one --format json --set corpus_path=" + single.string());
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out)["triples"][0]["weight"] == 1.0);

  const std::string fixture = "--set corpus_path=" SEMCOM_DATA_DIR "/lexicon_abstract.jsonl";
  r = run("importance --doc lexicon --format json " + fixture);
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  CHECK(j["N"] == 178);
  CHECK(j["Z"] == 86);
  double total = 0.0;
  for (const auto& t : j["triples"]) total += t["weight"].get<double>();
  CHECK(std::abs(total - 1.0) < 1e-9);
  CHECK(run("importance --doc lexicon --format json " + fixture).out == r.out);
  CHECK(run("importance --doc lexicon " + fixture).out.rfind("index,head,relation,tail,tokens,score,weight", 0) == 0);

  CHECK(run("importance --doc missing " + fixture).code == 2);
}

TEST_CASE("train writes a reproducible run directory") {
  const auto dir = scratch() / "run_1x1";
  auto r = run("train --set U=1 --set Q=1 --set H=8 --out " + dir.string());
  REQUIRE(r.code == 0);
  const auto summary = json::parse(slurp(dir / "summary.json"));
  CHECK(summary["ratio"] == 1.0);
  CHECK(summary.contains("wall_s"));
  for (const char* f : {"convergence.csv", "snapshot.json", "config.resolved"}) CHECK(fs::exists(dir / f));

  const auto small = scratch() / "run_small";
  REQUIRE(run("train --set U=4 --set Q=2 --set max_outer=500 --set seed=3 --out " + small.string()).code == 0);
  CHECK(json::parse(slurp(small / "summary.json"))["ratio"].get<double>() >= 0.9);

  // Re-running from the resolved config reproduces the outputs.
  const auto again = scratch() / "run_again";
  REQUIRE(run("train --config " + (small / "config.resolved").string() + " --out " + again.string()).code == 0);
  CHECK(slurp(again / "convergence.csv") == slurp(small / "convergence.csv"));
  CHECK(slurp(again / "snapshot.json") == slurp(small / "snapshot.json"));
  CHECK(slurp(again / "config.resolved") == slurp(small / "config.resolved"));
  auto a = json::parse(slurp(again / "summary.json")), b = json::parse(slurp(small / "summary.json"));
  a.erase("wall_s");
  b.erase("wall_s");
  CHECK(a == b);

  CHECK(run("train --set phi=2 --out " + (scratch() / "bad").string()).code == 2);
  CHECK_FALSE(fs::exists(scratch() / "bad"));
  CHECK(run("train --config /nonexistent.cfg").code == 2);
}

TEST_CASE("compare and table") {
  const auto dir = scratch() / "cmp";
  auto r = run("compare --set U=4 --set Q=2 --set max_outer=200 --set seeds=1,2 --out " + dir.string());
  REQUIRE(r.code == 0);
  std::istringstream csv(slurp(dir / "compare.csv"));
  std::string line;
  std::getline(csv, line);
  CHECK(line == "method,mean_reward,std_reward,mean_iters,wall_s");
  std::map<std::string, double> mean;
  while (std::getline(csv, line)) {
    const auto c1 = line.find(','), c2 = line.find(',', c1 + 1);
    mean[line.substr(0, c1)] = std::stod(line.substr(c1 + 1, c2 - c1 - 1));
  }
  CHECK(mean.size() == 6);
  // Methods choosing from the same MSS table never beat the oracle.
  for (const char* m : {"appo", "apg", "random"}) CHECK(mean[m] <= mean["hungarian"] + 1e-12);

  r = run("table --set U=3 --set Q=2");
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("user,rb0,rb1\n", 0) == 0);
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 4);
}

TEST_CASE("synth writes a loadable corpus") {
  const auto p = scratch() / "synth.jsonl";
  REQUIRE(run("synth --documents 5 --seed 2 --out " + p.string()).code == 0);
  CHECK(run("importance --doc syn0 --set corpus_path=" + p.string()).code == 0);
}
