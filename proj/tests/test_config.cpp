#include <cmath>

#include "doctest.h"
#include "semcom/config.hpp"
#include "semcom/error.hpp"

using namespace semcom;

TEST_CASE("defaults match the reference system parameters") {
  const SimConfig c;
  CHECK(c.rbs == 10);
  CHECK(c.bandwidth_hz == 2e6);
  CHECK(c.power_w == 1.0);
  CHECK(c.noise_dbm_per_hz == -174.0);
  CHECK(c.delay_s == 1e-4);
  CHECK(c.bits_per_token == 80.0);
  CHECK(c.attention_dim == 64);
  CHECK(c.token_dim == 500);
  CHECK(c.phi == 0.5);
  CHECK(c.layers == 3);
  CHECK(c.batch == 100);
  CHECK(c.eta == 2.0);
  CHECK(c.tau == 0.8);
  CHECK(c.learning_rate == 1e-3);
  CHECK(c.lambda_init == 1.0);
  CHECK(c.max_outer == 2000);
  CHECK(c.g_max == 16);
  CHECK_NOTHROW(validate_config(c));
}

TEST_CASE("parse_config reads keys, comments and lists") {
  const auto c = parse_config(
      "# small run\n"
      "U = 4\n"
      "Q=2   # two blocks\n"
      "\n"
      "interference = 1e-12, 2e-12\n"
      "seeds = 1,2,3\n"
      "attention_tied = false\n");
  CHECK(c.users == 4);
  CHECK(c.rbs == 2);
  CHECK(c.interference_per_rb() == std::vector<double>{1e-12, 2e-12});
  CHECK(c.seed_list() == std::vector<std::uint64_t>{1, 2, 3});
  CHECK_FALSE(c.attention_tied);

  SimConfig d;
  d.rbs = 3;
  CHECK(d.interference_per_rb() == std::vector<double>{1e-12, 1e-12, 1e-12});
  CHECK(d.seed_list() == std::vector<std::uint64_t>{1});
}

TEST_CASE("parse_config rejects bad input with the line number") {
  auto message = [](const char* text) {
    try {
      parse_config(text);
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message("U=4\nbogus=1\n").find("line 2") != std::string::npos);
  CHECK(message("U=four\n").find("line 1") != std::string::npos);
  CHECK(message("just text\n").find("line 1") != std::string::npos);
  CHECK_FALSE(message("phi=1.0\n").empty());
  CHECK_FALSE(message("W=-1\n").empty());
  CHECK_FALSE(message("Q=3\ninterference=1,2\n").empty());
  CHECK_FALSE(message("tau=1.5\n").empty());
  CHECK_FALSE(message("eta=1\n").empty());
  CHECK_FALSE(message("K=0\n").empty());
  CHECK_THROWS_AS(load_config("/nonexistent/semcom.cfg"), ConfigError);
}

TEST_CASE("resolved config round trips exactly") {
  SimConfig c;
  c.users = 7;
  c.phi = 0.3;
  c.learning_rate = 0.1 + 0.2;  // not representable in few digits
  c.interference_w = {1e-12, 3.3e-13, 0.0, 1.0 / 3.0, 5e-12, 1e-12, 1e-12, 1e-12, 1e-12, 1e-12};
  c.seeds = {4, 5};
  c.corpus_path = "data/lexicon_abstract.jsonl";
  const auto text = to_resolved(c);
  const auto back = parse_config(text);
  CHECK(to_resolved(back) == text);
  CHECK(back.learning_rate == c.learning_rate);
  CHECK(back.interference_w == c.interference_w);
  CHECK(back.corpus_path == c.corpus_path);
}

TEST_CASE("set_config_value applies overrides") {
  SimConfig c;
  set_config_value(c, "U", "3");
  set_config_value(c, "delta", "0.01");
  CHECK(c.users == 3);
  CHECK(c.learning_rate == 0.01);
  CHECK_THROWS_AS(set_config_value(c, "nope", "1"), ConfigError);
}
