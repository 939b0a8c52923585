#include "semcom/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "semcom/error.hpp"

namespace semcom {
namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(std::string_view key, std::string_view v) {
  double out = 0.0;
  const auto s = std::string(v);
  std::size_t used = 0;
  try {
    out = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw ConfigError(std::string(key) + ": not a number: " + s);
  return out;
}

std::uint64_t to_uint(std::string_view key, std::string_view v) {
  std::uint64_t out = 0;
  const auto* end = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end) throw ConfigError(std::string(key) + ": not a nonnegative integer: " + std::string(v));
  return out;
}

bool to_bool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError(std::string(key) + ": expected true or false");
}

template <typename F>
void for_each_item(std::string_view v, F&& f) {
  std::size_t start = 0;
  while (start <= v.size()) {
    const auto comma = v.find(',', start);
    const auto item = trim(v.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (!item.empty()) f(item);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
}

std::string fmt(double v) {
  std::ostringstream o;
  o.precision(17);
  o << v;
  return o.str();
}

}  // namespace

std::vector<double> SimConfig::interference_per_rb() const {
  if (interference_w.size() == 1) return std::vector<double>(rbs, interference_w.front());
  return interference_w;
}

std::vector<std::uint64_t> SimConfig::seed_list() const {
  return seeds.empty() ? std::vector<std::uint64_t>{seed} : seeds;
}

void set_config_value(SimConfig& c, std::string_view key, std::string_view value) {
  const auto v = trim(value);
  auto sz = [&] { return static_cast<std::size_t>(to_uint(key, v)); };
  if (key == "corpus_path") c.corpus_path = std::string(v);
  else if (key == "synthetic_documents") c.synthetic_documents = sz();
  else if (key == "corpus_seed") c.corpus_seed = to_uint(key, v);
  else if (key == "U") c.users = sz();
  else if (key == "Q") c.rbs = sz();
  else if (key == "W") c.bandwidth_hz = to_double(key, v);
  else if (key == "P") c.power_w = to_double(key, v);
  else if (key == "N0") c.noise_dbm_per_hz = to_double(key, v);
  else if (key == "interference") {
    c.interference_w.clear();
    for_each_item(v, [&](std::string_view item) { c.interference_w.push_back(to_double(key, item)); });
  } else if (key == "D") c.delay_s = to_double(key, v);
  else if (key == "O") c.bits_per_token = to_double(key, v);
  else if (key == "phi") c.phi = to_double(key, v);
  else if (key == "cell_radius") c.cell_radius_m = to_double(key, v);
  else if (key == "min_distance") c.min_distance_m = to_double(key, v);
  else if (key == "D_x") c.token_dim = sz();
  else if (key == "D_a") c.attention_dim = sz();
  else if (key == "attention_tied") c.attention_tied = to_bool(key, v);
  else if (key == "attention_seed") c.attention_seed = to_uint(key, v);
  else if (key == "embedding_path") c.embedding_path = std::string(v);
  else if (key == "G_max") c.g_max = sz();
  else if (key == "K") c.batch = sz();
  else if (key == "T") c.inner_iters = sz();
  else if (key == "eta") c.eta = to_double(key, v);
  else if (key == "tau") c.tau = to_double(key, v);
  else if (key == "lambda_init") c.lambda_init = to_double(key, v);
  else if (key == "lambda_min") c.lambda_min = to_double(key, v);
  else if (key == "lambda_max") c.lambda_max = to_double(key, v);
  else if (key == "delta") c.learning_rate = to_double(key, v);
  else if (key == "max_outer") c.max_outer = sz();
  else if (key == "window") c.window = sz();
  else if (key == "tolerance") c.tolerance = to_double(key, v);
  else if (key == "L") c.layers = sz();
  else if (key == "H") c.hidden = sz();
  else if (key == "seed") c.seed = to_uint(key, v);
  else if (key == "seeds") {
    c.seeds.clear();
    for_each_item(v, [&](std::string_view item) { c.seeds.push_back(to_uint(key, item)); });
  } else throw ConfigError("unknown config key: " + std::string(key));
}

void validate_config(const SimConfig& c) {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw ConfigError(what);
  };
  require(c.users >= 1, "U must be >= 1");
  require(c.rbs >= 1, "Q must be >= 1");
  require(c.bandwidth_hz > 0, "W must be positive");
  require(c.power_w > 0, "P must be positive");
  require(c.delay_s > 0, "D must be positive");
  require(c.bits_per_token > 0, "O must be positive");
  require(c.phi > 0 && c.phi < 1, "phi must lie in (0, 1)");
  require(c.min_distance_m > 0 && c.cell_radius_m > c.min_distance_m, "need 0 < min_distance < cell_radius");
  require(!c.interference_w.empty(), "interference needs at least one value");
  require(c.interference_w.size() == 1 || c.interference_w.size() == c.rbs,
          "interference must have one value or exactly Q values");
  for (double i : c.interference_w) require(i >= 0, "interference must be nonnegative");
  require(c.token_dim >= 1 && c.attention_dim >= 1, "D_x and D_a must be positive");
  require(c.g_max >= 1, "G_max must be >= 1");
  require(c.batch >= 1, "K must be >= 1");
  require(c.inner_iters >= 1, "T must be >= 1");
  require(c.eta > 1, "eta must be > 1");
  require(c.tau > 0 && c.tau < 1, "tau must lie in (0, 1)");
  require(c.lambda_min > 0 && c.lambda_max >= c.lambda_min, "need 0 < lambda_min <= lambda_max");
  require(c.lambda_init >= c.lambda_min && c.lambda_init <= c.lambda_max, "lambda_init outside clamps");
  require(c.learning_rate > 0, "delta must be positive");
  require(c.max_outer >= 1, "max_outer must be >= 1");
  require(c.window >= 1, "window must be >= 1");
  require(c.tolerance > 0, "tolerance must be positive");
  require(c.layers >= 2, "L must be >= 2");
  require(c.hidden >= 1, "H must be >= 1");
}

SimConfig parse_config(std::string_view text) {
  SimConfig cfg;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view l = line;
    if (const auto hash = l.find('#'); hash != std::string_view::npos) l = l.substr(0, hash);
    l = trim(l);
    if (l.empty()) continue;
    const auto eq = l.find('=');
    if (eq == std::string_view::npos) throw ConfigError("line " + std::to_string(line_no) + ": expected key=value");
    try {
      set_config_value(cfg, trim(l.substr(0, eq)), l.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  validate_config(cfg);
  return cfg;
}

SimConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string to_resolved(const SimConfig& c) {
  std::ostringstream o;
  auto list = [](const auto& xs, auto&& f) {
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? "," : "") + f(xs[i]);
    return s;
  };
  o << "corpus_path=" << c.corpus_path << '\n'
    << "synthetic_documents=" << c.synthetic_documents << '\n'
    << "corpus_seed=" << c.corpus_seed << '\n'
    << "U=" << c.users << '\n'
    << "Q=" << c.rbs << '\n'
    << "W=" << fmt(c.bandwidth_hz) << '\n'
    << "P=" << fmt(c.power_w) << '\n'
    << "N0=" << fmt(c.noise_dbm_per_hz) << '\n'
    << "interference=" << list(c.interference_w, fmt) << '\n'
    << "D=" << fmt(c.delay_s) << '\n'
    << "O=" << fmt(c.bits_per_token) << '\n'
    << "phi=" << fmt(c.phi) << '\n'
    << "cell_radius=" << fmt(c.cell_radius_m) << '\n'
    << "min_distance=" << fmt(c.min_distance_m) << '\n'
    << "D_x=" << c.token_dim << '\n'
    << "D_a=" << c.attention_dim << '\n'
    << "attention_tied=" << (c.attention_tied ? "true" : "false") << '\n'
    << "attention_seed=" << c.attention_seed << '\n'
    << "embedding_path=" << c.embedding_path << '\n'
    << "G_max=" << c.g_max << '\n'
    << "K=" << c.batch << '\n'
    << "T=" << c.inner_iters << '\n'
    << "eta=" << fmt(c.eta) << '\n'
    << "tau=" << fmt(c.tau) << '\n'
    << "lambda_init=" << fmt(c.lambda_init) << '\n'
    << "lambda_min=" << fmt(c.lambda_min) << '\n'
    << "lambda_max=" << fmt(c.lambda_max) << '\n'
    << "delta=" << fmt(c.learning_rate) << '\n'
    << "max_outer=" << c.max_outer << '\n'
    << "window=" << c.window << '\n'
    << "tolerance=" << fmt(c.tolerance) << '\n'
    << "L=" << c.layers << '\n'
    << "H=" << c.hidden << '\n'
    << "seed=" << c.seed << '\n'
    << "seeds=" << list(c.seeds, [](std::uint64_t s) { return std::to_string(s); }) << '\n';
  return o.str();
}

}  // namespace semcom
