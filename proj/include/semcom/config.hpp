#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace semcom {

/// Every tunable of a simulation run. Defaults follow the system-parameter
/// table of the reference setup (Q=10, W=2 MHz, P=1 W, N0=-174 dBm/Hz,
/// D=0.1 ms, O=80 bits, D_a=64, D_x=500, phi=0.5, L=3, K=100, eta=2, tau=0.8).
struct SimConfig {
  std::string corpus_path;           ///< empty: generate a synthetic corpus
  std::size_t synthetic_documents = 0;  ///< 0: one per user
  std::uint64_t corpus_seed = 7;

  std::size_t users = 30;            ///< U
  std::size_t rbs = 10;              ///< Q
  double bandwidth_hz = 2e6;         ///< W
  double power_w = 1.0;              ///< P
  double noise_dbm_per_hz = -174.0;  ///< N0
  std::vector<double> interference_w{1e-12};  ///< I_q; one value is broadcast to all RBs
  double delay_s = 1e-4;             ///< D
  double bits_per_token = 80.0;      ///< O
  double phi = 0.5;
  double cell_radius_m = 500.0;
  double min_distance_m = 10.0;

  std::size_t token_dim = 500;       ///< D_x
  std::size_t attention_dim = 64;    ///< D_a
  bool attention_tied = true;
  std::uint64_t attention_seed = 42;
  std::string embedding_path;

  std::size_t g_max = 16;
  std::size_t batch = 100;           ///< K
  std::size_t inner_iters = 10;      ///< T
  double eta = 2.0;
  double tau = 0.8;
  double lambda_init = 1.0;
  double lambda_min = 1e-4;
  double lambda_max = 1e4;
  double learning_rate = 1e-3;       ///< delta
  std::size_t max_outer = 2000;
  std::size_t window = 20;
  double tolerance = 1e-4;
  std::size_t layers = 3;            ///< L
  std::size_t hidden = 64;           ///< H_l

  std::uint64_t seed = 1;
  std::vector<std::uint64_t> seeds;  ///< compare runs; empty: {seed}

  /// Interference per RB, after broadcasting.
  std::vector<double> interference_per_rb() const;
  std::vector<std::uint64_t> seed_list() const;
};

/// Parses `key = value` lines ('#' starts a comment). Unknown keys, bad
/// values and out-of-range parameters throw ConfigError naming the line.
SimConfig parse_config(std::string_view text);
SimConfig load_config(const std::filesystem::path& path);

/// Applies one `key=value` override.
void set_config_value(SimConfig& cfg, std::string_view key, std::string_view value);

/// Throws ConfigError on any invalid combination.
void validate_config(const SimConfig& cfg);

/// Every effective parameter in parse_config's format; parsing it yields an
/// identical config.
std::string to_resolved(const SimConfig& cfg);

}  // namespace semcom
