#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "semcom/attention.hpp"
#include "semcom/channel.hpp"
#include "semcom/oracle.hpp"

namespace semcom {

/// Concatenated per-user importance distributions, each zero-padded to G_max.
using StateVector = Eigen::VectorXd;

/// Throws ConfigError if any distribution is longer than `g_max`. A user
/// with an empty distribution contributes an all-zero block.
StateVector build_state(std::span<const ImportanceDistribution> distributions, std::size_t g_max);

/// Keeps the `g_max` highest-importance triples (ties by index) and
/// renormalizes their weights. Returns the kept indices in importance order.
std::vector<std::size_t> truncate_distribution(ImportanceDistribution& d, std::size_t g_max);

struct PolicyShape {
  std::size_t state_dim = 0;
  std::size_t users = 0;
  std::size_t rbs = 0;
  std::size_t hidden = 64;
  std::size_t layers = 3;  ///< input, hidden..., output

  std::size_t choices() const { return users + 1; }  ///< users plus idle
  std::size_t output_dim() const { return rbs * choices(); }
};

/// Fully connected tanh network producing one logit per (RB, choice).
struct PolicyParams {
  PolicyShape shape;
  std::vector<Eigen::MatrixXd> weights;
  std::vector<Eigen::VectorXd> biases;

  static PolicyParams zeros(const PolicyShape& shape);
  /// Hidden layers get U(-1/sqrt(fan_in), 1/sqrt(fan_in)); the output layer
  /// is scaled by `output_scale` so the initial policy is close to uniform.
  static PolicyParams random(const PolicyShape& shape, std::uint64_t seed, double output_scale = 0.01);

  std::size_t parameter_count() const;
  Eigen::VectorXd flatten() const;
  void assign(const Eigen::VectorXd& flat);
  bool all_finite() const;
  /// this += scale * other
  void add_scaled(const PolicyParams& other, double scale);
};

/// Logits for the whole action, as an RB x (users+1) matrix; column `users` is idle.
Eigen::MatrixXd policy_logits(const PolicyParams& theta, const StateVector& s);

/// One categorical factor per RB, in RB order, over the users not chosen by
/// earlier RBs plus idle. Masked users have probability exactly 0.
class FactorizedPolicy {
 public:
  explicit FactorizedPolicy(Eigen::MatrixXd logits);

  std::size_t users() const { return static_cast<std::size_t>(logits_.cols()) - 1; }
  std::size_t rbs() const { return static_cast<std::size_t>(logits_.rows()); }
  std::size_t idle() const { return users(); }
  const Eigen::MatrixXd& logits() const { return logits_; }

  /// Probabilities of RB `rb` given which users are already taken.
  std::vector<double> factor(std::size_t rb, const std::vector<char>& taken) const;
  /// Same as factor() in log space; masked choices are -inf.
  std::vector<double> log_factor(std::size_t rb, const std::vector<char>& taken) const;

  /// log pi(a) for a per-RB choice vector. -inf for unrepresentable actions.
  double log_prob(std::span<const std::size_t> choices) const;

  /// Argmax per factor, ties to the lowest index.
  std::vector<std::size_t> greedy() const;

 private:
  Eigen::MatrixXd logits_;
};

FactorizedPolicy policy_forward(const PolicyParams& theta, const StateVector& s);

RbAssignment to_assignment(std::span<const std::size_t> choices, std::size_t users);

struct ActionSample {
  std::vector<std::size_t> choices;  ///< per RB: user index, or users for idle
  RbAssignment assignment;
  double log_prob_old = 0.0;
  double reward = 0.0;
};

/// K independent draws from the stored policy, each with its exact log
/// probability and its reward from `table`.
std::vector<ActionSample> sample_actions(const PolicyParams& stored, const StateVector& s, std::size_t k,
                                         std::uint64_t seed, const MssTable& table);

/// Exact KL(p || q) for categoricals on a common support, in nats.
double categorical_kl(std::span<const double> p, std::span<const double> q);
/// KL from log-probabilities; stays finite when q underflows in linear space.
double categorical_kl_log(std::span<const double> log_p, std::span<const double> log_q);

/// Mean over the batch of sum over RBs of KL(stored factor || current factor),
/// with each factor conditioned on the sampled prefix.
double kl_divergence(const PolicyParams& stored, const PolicyParams& theta, const StateVector& s,
                     std::span<const ActionSample> batch);

/// Importance-sampled reward estimate minus lambda * KL.
double surrogate_objective(const PolicyParams& theta, const PolicyParams& stored, const StateVector& s,
                           std::span<const ActionSample> batch, double lambda);

/// Gradient of surrogate_objective with respect to theta.
PolicyParams surrogate_gradient(const PolicyParams& theta, const PolicyParams& stored, const StateVector& s,
                                std::span<const ActionSample> batch, double lambda);

/// theta + lr * grad J. Throws TrainingError on a non-finite gradient.
PolicyParams policy_gradient_step(const PolicyParams& theta, const PolicyParams& stored, const StateVector& s,
                                  std::span<const ActionSample> batch, double lambda, double learning_rate);

struct PenaltyState {
  double lambda = 1.0;
  double tau = 0.8;
  double eta = 2.0;
  double lambda_min = 1e-4;
  double lambda_max = 1e4;
};

/// Multiply lambda by eta above 1+tau, divide below 1-tau, then clamp.
PenaltyState update_penalty(PenaltyState p, double kl);

struct TrainOptions {
  std::size_t batch = 100;        ///< K
  std::size_t inner_iters = 10;   ///< T
  double learning_rate = 1e-3;    ///< delta
  PenaltyState penalty;
  bool kl_penalty = true;         ///< false: APG (lambda pinned to 0)
  std::size_t max_outer = 2000;
  std::size_t window = 20;
  double tolerance = 1e-4;
  std::size_t hidden = 64;
  std::size_t layers = 3;
};

/// Options for the static-learning-rate baseline: no KL term, lambda 0,
/// one update per sampled batch.
TrainOptions apg_options(TrainOptions base);

struct LogRow {
  std::size_t iter = 0;
  double objective = 0.0;    ///< J after the round's updates
  double mean_reward = 0.0;  ///< mean reward of the round's batch
  double kl = 0.0;
  double lambda = 0.0;       ///< penalty after the round's update
  double best_reward = 0.0;  ///< best sampled reward so far
};

struct PolicySnapshot {
  PolicyParams theta;
  PolicyParams stored;
  double lambda = 0.0;
  std::vector<LogRow> log;
  bool converged = false;
  std::size_t iterations = 0;
  RbAssignment greedy_assignment;
  double greedy_reward = 0.0;
};

/// Relative change between the last two non-overlapping `window`-round means
/// of J is below `tolerance`.
bool has_converged(std::span<const LogRow> log, std::size_t window, double tolerance);

/// Moving average of J over `window` rounds (entry i covers rounds
/// i-window+1..i); empty until `window` rows exist.
std::vector<double> moving_average_objective(std::span<const LogRow> log, std::size_t window);

PolicySnapshot train(const MssTable& table, const StateVector& s, const TrainOptions& opts, std::uint64_t seed);

std::string log_to_csv(std::span<const LogRow> log);

}  // namespace semcom
