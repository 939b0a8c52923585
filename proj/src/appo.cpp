#include "semcom/appo.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

#include "semcom/error.hpp"
#include "semcom/random.hpp"

namespace semcom {

StateVector build_state(std::span<const ImportanceDistribution> distributions, std::size_t g_max) {
  StateVector s = StateVector::Zero(static_cast<Eigen::Index>(distributions.size() * g_max));
  for (std::size_t u = 0; u < distributions.size(); ++u) {
    const auto& w = distributions[u].weights;
    if (w.size() > g_max)
      throw ConfigError("user " + std::to_string(u) + " has " + std::to_string(w.size()) +
                        " triples, more than G_max = " + std::to_string(g_max));
    for (std::size_t g = 0; g < w.size(); ++g) s[static_cast<Eigen::Index>(u * g_max + g)] = w[g];
  }
  return s;
}

std::vector<std::size_t> truncate_distribution(ImportanceDistribution& d, std::size_t g_max) {
  auto order = importance_order(d.weights);
  if (order.size() <= g_max) return order;
  order.resize(g_max);
  std::vector<double> raw, weights;
  double mass = 0.0;
  for (auto i : order) {
    if (i < d.raw.size()) raw.push_back(d.raw[i]);
    weights.push_back(d.weights[i]);
    mass += d.weights[i];
  }
  for (auto& w : weights) w /= mass;
  d.raw = std::move(raw);
  d.weights = std::move(weights);
  return order;
}

// ---------------------------------------------------------------------------
// Parameters

namespace {

std::vector<std::pair<std::size_t, std::size_t>> layer_dims(const PolicyShape& shape) {
  if (shape.layers < 2) throw ConfigError("policy network needs at least 2 layers");
  if (shape.state_dim == 0 || shape.rbs == 0) throw ConfigError("policy needs a nonempty state and at least one RB");
  std::vector<std::pair<std::size_t, std::size_t>> dims;  // (out, in)
  std::size_t in = shape.state_dim;
  for (std::size_t l = 0; l + 2 < shape.layers; ++l) {
    dims.emplace_back(shape.hidden, in);
    in = shape.hidden;
  }
  dims.emplace_back(shape.output_dim(), in);
  return dims;
}

}  // namespace

PolicyParams PolicyParams::zeros(const PolicyShape& shape) {
  PolicyParams p;
  p.shape = shape;
  for (auto [out, in] : layer_dims(shape)) {
    p.weights.push_back(Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(out), static_cast<Eigen::Index>(in)));
    p.biases.push_back(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(out)));
  }
  return p;
}

PolicyParams PolicyParams::random(const PolicyShape& shape, std::uint64_t seed, double output_scale) {
  PolicyParams p = zeros(shape);
  Rng rng(derive_seed(seed, "init"));
  for (std::size_t l = 0; l < p.weights.size(); ++l) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(p.weights[l].cols()));
    const double scale = (l + 1 == p.weights.size()) ? output_scale : 1.0;
    std::uniform_real_distribution<double> u(-bound, bound);
    for (auto& w : p.weights[l].reshaped()) w = scale * u(rng);
  }
  return p;
}

std::size_t PolicyParams::parameter_count() const {
  std::size_t n = 0;
  for (std::size_t l = 0; l < weights.size(); ++l)
    n += static_cast<std::size_t>(weights[l].size() + biases[l].size());
  return n;
}

Eigen::VectorXd PolicyParams::flatten() const {
  Eigen::VectorXd flat(static_cast<Eigen::Index>(parameter_count()));
  Eigen::Index at = 0;
  for (std::size_t l = 0; l < weights.size(); ++l) {
    flat.segment(at, weights[l].size()) = weights[l].reshaped();
    at += weights[l].size();
    flat.segment(at, biases[l].size()) = biases[l];
    at += biases[l].size();
  }
  return flat;
}

void PolicyParams::assign(const Eigen::VectorXd& flat) {
  if (static_cast<std::size_t>(flat.size()) != parameter_count()) throw InputError("parameter vector size mismatch");
  Eigen::Index at = 0;
  for (std::size_t l = 0; l < weights.size(); ++l) {
    weights[l].reshaped() = flat.segment(at, weights[l].size());
    at += weights[l].size();
    biases[l] = flat.segment(at, biases[l].size());
    at += biases[l].size();
  }
}

bool PolicyParams::all_finite() const {
  for (std::size_t l = 0; l < weights.size(); ++l)
    if (!weights[l].allFinite() || !biases[l].allFinite()) return false;
  return true;
}

void PolicyParams::add_scaled(const PolicyParams& other, double scale) {
  if (other.weights.size() != weights.size()) throw InputError("policy shape mismatch");
  for (std::size_t l = 0; l < weights.size(); ++l) {
    weights[l] += scale * other.weights[l];
    biases[l] += scale * other.biases[l];
  }
}

// ---------------------------------------------------------------------------
// Forward pass

namespace {

struct Activations {
  std::vector<Eigen::VectorXd> inputs;  // input to each layer
  Eigen::VectorXd output;
};

Activations forward(const PolicyParams& theta, const StateVector& s) {
  if (static_cast<std::size_t>(s.size()) != theta.shape.state_dim) throw InputError("state length mismatch");
  Activations act;
  Eigen::VectorXd a = s;
  for (std::size_t l = 0; l < theta.weights.size(); ++l) {
    act.inputs.push_back(a);
    Eigen::VectorXd z = theta.weights[l] * a + theta.biases[l];
    if (l + 1 < theta.weights.size()) a = z.array().tanh().matrix();
    else act.output = std::move(z);
  }
  return act;
}

Eigen::MatrixXd to_logit_matrix(const Eigen::VectorXd& out, const PolicyShape& shape) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(shape.rbs), static_cast<Eigen::Index>(shape.choices()));
  for (Eigen::Index q = 0; q < m.rows(); ++q)
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(q, j) = out[q * m.cols() + j];
  return m;
}

}  // namespace

Eigen::MatrixXd policy_logits(const PolicyParams& theta, const StateVector& s) {
  return to_logit_matrix(forward(theta, s).output, theta.shape);
}

FactorizedPolicy::FactorizedPolicy(Eigen::MatrixXd logits) : logits_(std::move(logits)) {
  if (logits_.cols() < 1) throw InputError("policy needs an idle choice");
}

std::vector<double> FactorizedPolicy::log_factor(std::size_t rb, const std::vector<char>& taken) const {
  const std::size_t n = users() + 1;
  const auto r = static_cast<Eigen::Index>(rb);
  std::vector<double> lp(n, -std::numeric_limits<double>::infinity());
  double mx = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < n; ++j)
    if (j == idle() || !taken[j]) mx = std::max(mx, logits_(r, static_cast<Eigen::Index>(j)));
  double total = 0.0;
  for (std::size_t j = 0; j < n; ++j)
    if (j == idle() || !taken[j]) total += std::exp(logits_(r, static_cast<Eigen::Index>(j)) - mx);
  const double log_norm = mx + std::log(total);
  for (std::size_t j = 0; j < n; ++j)
    if (j == idle() || !taken[j]) lp[j] = logits_(r, static_cast<Eigen::Index>(j)) - log_norm;
  return lp;
}

std::vector<double> FactorizedPolicy::factor(std::size_t rb, const std::vector<char>& taken) const {
  auto p = log_factor(rb, taken);
  for (auto& v : p) v = std::exp(v);
  return p;
}

double FactorizedPolicy::log_prob(std::span<const std::size_t> choices) const {
  if (choices.size() != rbs()) throw InputError("action length does not match RB count");
  std::vector<char> taken(users(), false);
  double lp = 0.0;
  for (std::size_t q = 0; q < rbs(); ++q) {
    const auto c = choices[q];
    if (c > idle() || (c != idle() && taken[c])) return -std::numeric_limits<double>::infinity();
    lp += log_factor(q, taken)[c];
    if (c != idle()) taken[c] = true;
  }
  return lp;
}

std::vector<std::size_t> FactorizedPolicy::greedy() const {
  std::vector<char> taken(users(), false);
  std::vector<std::size_t> out;
  for (std::size_t q = 0; q < rbs(); ++q) {
    std::size_t best = idle();
    double best_logit = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j <= idle(); ++j) {
      if (j != idle() && taken[j]) continue;
      const double l = logits_(static_cast<Eigen::Index>(q), static_cast<Eigen::Index>(j));
      if (l > best_logit) {
        best_logit = l;
        best = j;
      }
    }
    out.push_back(best);
    if (best != idle()) taken[best] = true;
  }
  return out;
}

FactorizedPolicy policy_forward(const PolicyParams& theta, const StateVector& s) {
  return FactorizedPolicy(policy_logits(theta, s));
}

RbAssignment to_assignment(std::span<const std::size_t> choices, std::size_t users) {
  RbAssignment a(choices.size());
  for (std::size_t q = 0; q < choices.size(); ++q)
    if (choices[q] < users) a.user_of_rb[q] = choices[q];
  return a;
}

std::vector<ActionSample> sample_actions(const PolicyParams& stored, const StateVector& s, std::size_t k,
                                         std::uint64_t seed, const MssTable& table) {
  if (k == 0) throw InputError("batch size must be positive");
  const auto policy = policy_forward(stored, s);
  Rng rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<ActionSample> batch;
  batch.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    ActionSample a;
    std::vector<char> taken(policy.users(), false);
    for (std::size_t q = 0; q < policy.rbs(); ++q) {
      const auto p = policy.factor(q, taken);
      const double u = unit(rng);
      double cum = 0.0;
      std::size_t pick = policy.idle();
      // Inverse CDF; falls back to the last available choice on round-off.
      for (std::size_t j = 0; j < p.size(); ++j) {
        if (p[j] == 0.0) continue;
        pick = j;
        cum += p[j];
        if (u < cum) break;
      }
      a.choices.push_back(pick);
      if (pick != policy.idle()) taken[pick] = true;
    }
    a.assignment = to_assignment(a.choices, policy.users());
    a.log_prob_old = policy.log_prob(a.choices);
    a.reward = evaluate_reward(a.assignment, table);
    batch.push_back(std::move(a));
  }
  return batch;
}

double categorical_kl(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw InputError("categorical supports differ");
  double kl = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= 0.0) continue;
    kl += p[i] * (std::log(p[i]) - std::log(q[i]));
  }
  return std::max(kl, 0.0);
}

double categorical_kl_log(std::span<const double> log_p, std::span<const double> log_q) {
  if (log_p.size() != log_q.size()) throw InputError("categorical supports differ");
  double kl = 0.0;
  for (std::size_t i = 0; i < log_p.size(); ++i) {
    if (!std::isfinite(log_p[i])) continue;
    kl += std::exp(log_p[i]) * (log_p[i] - log_q[i]);
  }
  return std::max(kl, 0.0);
}

double kl_divergence(const PolicyParams& stored, const PolicyParams& theta, const StateVector& s,
                     std::span<const ActionSample> batch) {
  if (batch.empty()) return 0.0;
  const auto old_policy = policy_forward(stored, s);
  const auto cur_policy = policy_forward(theta, s);
  double total = 0.0;
  for (const auto& a : batch) {
    std::vector<char> taken(old_policy.users(), false);
    for (std::size_t q = 0; q < old_policy.rbs(); ++q) {
      total += categorical_kl_log(old_policy.log_factor(q, taken), cur_policy.log_factor(q, taken));
      if (a.choices[q] != old_policy.idle()) taken[a.choices[q]] = true;
    }
  }
  return total / static_cast<double>(batch.size());
}

double surrogate_objective(const PolicyParams& theta, const PolicyParams& stored, const StateVector& s,
                           std::span<const ActionSample> batch, double lambda) {
  if (batch.empty()) throw InputError("empty batch");
  const auto cur = policy_forward(theta, s);
  double estimate = 0.0;
  for (const auto& a : batch) {
    if (!std::isfinite(a.log_prob_old)) throw TrainingError("sampled action has zero probability under the stored policy");
    estimate += a.reward * std::exp(cur.log_prob(a.choices) - a.log_prob_old);
  }
  estimate /= static_cast<double>(batch.size());
  const double kl = lambda != 0.0 ? kl_divergence(stored, theta, s, batch) : 0.0;
  return estimate - lambda * kl;
}

PolicyParams surrogate_gradient(const PolicyParams& theta, const PolicyParams& stored, const StateVector& s,
                                std::span<const ActionSample> batch, double lambda) {
  if (batch.empty()) throw InputError("empty batch");
  const auto act = forward(theta, s);
  const FactorizedPolicy cur(to_logit_matrix(act.output, theta.shape));
  const FactorizedPolicy old = lambda != 0.0 ? policy_forward(stored, s) : cur;
  const double inv_k = 1.0 / static_cast<double>(batch.size());

  Eigen::MatrixXd dlogits = Eigen::MatrixXd::Zero(cur.logits().rows(), cur.logits().cols());
  for (const auto& a : batch) {
    const double ratio = std::exp(cur.log_prob(a.choices) - a.log_prob_old);
    const double w = a.reward * ratio * inv_k;
    std::vector<char> taken(cur.users(), false);
    for (std::size_t q = 0; q < cur.rbs(); ++q) {
      const auto p = cur.factor(q, taken);
      const auto qi = static_cast<Eigen::Index>(q);
      // d log p_c / d z_j = [j == c] - p_j
      for (std::size_t j = 0; j < p.size(); ++j) dlogits(qi, static_cast<Eigen::Index>(j)) -= w * p[j];
      dlogits(qi, static_cast<Eigen::Index>(a.choices[q])) += w;
      if (lambda != 0.0) {
        // d KL(p* || p) / d z_j = p_j - p*_j
        const auto p_old = old.factor(q, taken);
        for (std::size_t j = 0; j < p.size(); ++j)
          dlogits(qi, static_cast<Eigen::Index>(j)) -= lambda * inv_k * (p[j] - p_old[j]);
      }
      if (a.choices[q] != cur.idle()) taken[a.choices[q]] = true;
    }
  }

  PolicyParams grad = PolicyParams::zeros(theta.shape);
  Eigen::VectorXd g(dlogits.size());
  for (Eigen::Index q = 0; q < dlogits.rows(); ++q)
    for (Eigen::Index j = 0; j < dlogits.cols(); ++j) g[q * dlogits.cols() + j] = dlogits(q, j);
  for (std::size_t l = theta.weights.size(); l-- > 0;) {
    grad.weights[l] = g * act.inputs[l].transpose();
    grad.biases[l] = g;
    if (l > 0) {
      const auto& a_in = act.inputs[l];  // tanh output of layer l-1
      g = ((theta.weights[l].transpose() * g).array() * (1.0 - a_in.array().square())).matrix();
    }
  }
  return grad;
}

PolicyParams policy_gradient_step(const PolicyParams& theta, const PolicyParams& stored, const StateVector& s,
                                  std::span<const ActionSample> batch, double lambda, double learning_rate) {
  if (!(learning_rate > 0.0)) throw InputError("learning rate must be positive");
  const auto grad = surrogate_gradient(theta, stored, s, batch, lambda);
  if (!grad.all_finite())
    throw TrainingError("non-finite policy gradient (lambda = " + std::to_string(lambda) + ")");
  PolicyParams next = theta;
  next.add_scaled(grad, learning_rate);
  return next;
}

PenaltyState update_penalty(PenaltyState p, double kl) {
  if (kl > 1.0 + p.tau) p.lambda *= p.eta;
  else if (kl < 1.0 - p.tau) p.lambda /= p.eta;
  p.lambda = std::clamp(p.lambda, p.lambda_min, p.lambda_max);
  return p;
}

TrainOptions apg_options(TrainOptions base) {
  base.kl_penalty = false;
  base.inner_iters = 1;
  base.penalty.lambda = 0.0;
  return base;
}

std::vector<double> moving_average_objective(std::span<const LogRow> log, std::size_t window) {
  std::vector<double> out;
  if (window == 0 || log.size() < window) return out;
  double sum = 0.0;
  for (std::size_t i = 0; i < log.size(); ++i) {
    sum += log[i].objective;
    if (i >= window) sum -= log[i - window].objective;
    if (i + 1 >= window) out.push_back(sum / static_cast<double>(window));
  }
  return out;
}

bool has_converged(std::span<const LogRow> log, std::size_t window, double tolerance) {
  if (window == 0 || log.size() < 2 * window) return false;
  double recent = 0.0, previous = 0.0;
  for (std::size_t i = 0; i < window; ++i) {
    recent += log[log.size() - 1 - i].objective;
    previous += log[log.size() - 1 - window - i].objective;
  }
  recent /= static_cast<double>(window);
  previous /= static_cast<double>(window);
  const double scale = std::max(std::abs(previous), 1e-12);
  return std::abs(recent - previous) / scale < tolerance;
}

PolicySnapshot train(const MssTable& table, const StateVector& s, const TrainOptions& opts, std::uint64_t seed) {
  if (opts.batch == 0 || opts.inner_iters == 0) throw ConfigError("K and T must be positive");
  PolicyShape shape;
  shape.state_dim = static_cast<std::size_t>(s.size());
  shape.users = table.users();
  shape.rbs = table.rbs();
  shape.hidden = opts.hidden;
  shape.layers = opts.layers;

  PolicySnapshot snap;
  snap.stored = PolicyParams::random(shape, seed);
  snap.theta = snap.stored;
  PenaltyState penalty = opts.penalty;
  if (!opts.kl_penalty) penalty.lambda = 0.0;
  double best = -std::numeric_limits<double>::infinity();

  for (std::size_t round = 0; round < opts.max_outer; ++round) {
    const auto batch =
        sample_actions(snap.stored, s, opts.batch, derive_seed(seed, "sampling", round), table);
    const double lambda = opts.kl_penalty ? penalty.lambda : 0.0;
    PolicyParams theta = snap.stored;
    for (std::size_t t = 0; t < opts.inner_iters; ++t)
      theta = policy_gradient_step(theta, snap.stored, s, batch, lambda, opts.learning_rate);

    LogRow row;
    row.iter = round;
    row.kl = kl_divergence(snap.stored, theta, s, batch);
    row.objective = surrogate_objective(theta, snap.stored, s, batch, lambda);
    double mean = 0.0;
    for (const auto& a : batch) {
      mean += a.reward;
      best = std::max(best, a.reward);
    }
    row.mean_reward = mean / static_cast<double>(batch.size());
    row.best_reward = best;
    if (opts.kl_penalty) penalty = update_penalty(penalty, row.kl);
    row.lambda = opts.kl_penalty ? penalty.lambda : 0.0;
    snap.log.push_back(row);

    snap.stored = theta;
    snap.theta = theta;
    if (has_converged(snap.log, opts.window, opts.tolerance)) {
      snap.converged = true;
      break;
    }
  }
  snap.lambda = opts.kl_penalty ? penalty.lambda : 0.0;
  snap.iterations = snap.log.size();
  const auto policy = policy_forward(snap.theta, s);
  snap.greedy_assignment = to_assignment(policy.greedy(), table.users());
  snap.greedy_reward = evaluate_reward(snap.greedy_assignment, table);
  return snap;
}

std::string log_to_csv(std::span<const LogRow> log) {
  std::ostringstream out;
  out << std::setprecision(17);
  out << "iter,J,mean_reward,kl,lambda,best_reward\n";
  for (const auto& r : log)
    out << r.iter << ',' << r.objective << ',' << r.mean_reward << ',' << r.kl << ',' << r.lambda << ','
        << r.best_reward << '\n';
  return out.str();
}

}  // namespace semcom
