#include "semcom/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "semcom/error.hpp"
#include "semcom/random.hpp"

namespace semcom {

std::size_t user_token_budget(const UserLink& user, std::optional<std::size_t> rb, const RbGrid& grid,
                              const LinkBudget& lb) {
  return token_budget(capacity(user, rb, grid), lb.bits_per_token, lb.delay_s);
}

MssReport score_semantic(const UserPayload& user, std::size_t token_budget, TokenId period, double phi) {
  if (!user.document) return {};
  const auto& doc = *user.document;
  SemanticGraph received;
  if (!doc.graph.empty()) received = select_triples(doc.graph, user.importance.weights, token_budget);
  return mss(doc.document.tokens, recover_text(received, period), phi);
}

MssReport score_truncated(const AnnotatedDocument& doc, std::size_t token_budget, double phi) {
  const auto& orig = doc.document.tokens;
  const TokenSeq prefix(orig.begin(), orig.begin() + static_cast<std::ptrdiff_t>(std::min(token_budget, orig.size())));
  return mss(orig, prefix, phi);
}

MssTable build_mss_table(const std::vector<UserPayload>& users, const std::vector<UserLink>& links,
                         const RbGrid& grid, const LinkBudget& lb, TokenId period) {
  if (links.size() != users.size()) throw InputError("one link per user required");
  MssTable t(users.size(), grid.rb_count());
  for (std::size_t i = 0; i < users.size(); ++i)
    for (std::size_t q = 0; q < grid.rb_count(); ++q)
      t.at(i, q) = score_semantic(users[i], user_token_budget(links[i], q, grid, lb), period, lb.phi).score;
  return t;
}

double evaluate_reward(const RbAssignment& a, const MssTable& t) {
  double total = 0.0;
  for (std::size_t q = 0; q < a.rb_count(); ++q)
    if (a.user_of_rb[q]) total += t.at(*a.user_of_rb[q], q);
  return total;
}

Solution hungarian_optimum(const MssTable& t) {
  Solution sol;
  sol.assignment = RbAssignment(t.rbs());
  if (t.empty()) return sol;
  const std::size_t n = std::max(t.users(), t.rbs());
  // Rows are users, columns RBs; padding cells cost 0. Idle is always
  // allowed, so a negative cell is no better than leaving it unmatched.
  auto cost = [&](std::size_t i, std::size_t j) {
    return (i < t.users() && j < t.rbs()) ? -std::max(t.at(i, j), 0.0) : 0.0;
  };
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, false);
    do {
      used[j0] = true;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  for (std::size_t j = 1; j <= n; ++j) {
    const std::size_t user = p[j] - 1, rb = j - 1;
    // Zero-valued real cells are left idle; they add nothing.
    if (user < t.users() && rb < t.rbs() && t.at(user, rb) > 0.0) sol.assignment.user_of_rb[rb] = user;
  }
  sol.value = evaluate_reward(sol.assignment, t);
  return sol;
}

double count_assignments(std::size_t users, std::size_t rbs) {
  // sum_k C(Q,k) * U!/(U-k)!
  double total = 0.0;
  for (std::size_t k = 0; k <= std::min(users, rbs); ++k) {
    double c = 1.0;
    for (std::size_t j = 0; j < k; ++j) c = c * static_cast<double>(rbs - j) / static_cast<double>(j + 1);
    double perm = 1.0;
    for (std::size_t j = 0; j < k; ++j) perm *= static_cast<double>(users - j);
    total += c * perm;
  }
  return total;
}

namespace {

void enumerate(const MssTable& t, std::size_t rb, std::vector<char>& taken, RbAssignment& cur, double value,
               Solution& best, bool& have_best) {
  if (rb == t.rbs()) {
    if (!have_best || value > best.value) {
      best.assignment = cur;
      best.value = value;
      have_best = true;
    }
    return;
  }
  cur.user_of_rb[rb].reset();
  enumerate(t, rb + 1, taken, cur, value, best, have_best);
  for (std::size_t u = 0; u < t.users(); ++u) {
    if (taken[u]) continue;
    taken[u] = true;
    cur.user_of_rb[rb] = u;
    enumerate(t, rb + 1, taken, cur, value + t.at(u, rb), best, have_best);
    taken[u] = false;
  }
  cur.user_of_rb[rb].reset();
}

}  // namespace

Solution exhaustive_optimum(const MssTable& t, double limit) {
  const double n = count_assignments(t.users(), t.rbs());
  if (n > limit)
    throw InstanceSizeError("exhaustive search over " + std::to_string(n) + " assignments exceeds limit " +
                            std::to_string(limit));
  Solution best;
  best.assignment = RbAssignment(t.rbs());
  bool have_best = false;
  std::vector<char> taken(t.users(), false);
  RbAssignment cur(t.rbs());
  enumerate(t, 0, taken, cur, 0.0, best, have_best);
  return best;
}

RbAssignment random_maximal_assignment(std::size_t users, std::size_t rbs, Rng& rng) {
  std::vector<std::size_t> us(users), qs(rbs);
  std::iota(us.begin(), us.end(), std::size_t{0});
  std::iota(qs.begin(), qs.end(), std::size_t{0});
  std::shuffle(us.begin(), us.end(), rng);
  std::shuffle(qs.begin(), qs.end(), rng);
  RbAssignment a(rbs);
  for (std::size_t k = 0; k < std::min(users, rbs); ++k) a.user_of_rb[qs[k]] = us[k];
  return a;
}

double baseline_random(const MssTable& t, std::uint64_t seed) {
  if (t.empty()) return 0.0;
  Rng rng(derive_seed(seed, "baseline"));
  return evaluate_reward(random_maximal_assignment(t.users(), t.rbs(), rng), t);
}

double baseline_random_selection(const std::vector<UserPayload>& users, const std::vector<UserLink>& links,
                                 const RbGrid& grid, const LinkBudget& lb, TokenId period,
                                 const RbAssignment& assignment, std::uint64_t seed) {
  if (!validate_assignment(assignment, users.size(), grid.rb_count()))
    throw InputError("invalid RB assignment");
  Rng rng(derive_seed(seed, "random_selection"));
  double total = 0.0;
  for (std::size_t i = 0; i < users.size(); ++i) {
    const auto rb = assignment.rb_of(i);
    if (!rb || !users[i].document) continue;
    const auto& doc = *users[i].document;
    std::vector<std::size_t> order(doc.graph.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), rng);
    const auto received = select_prefix(doc.graph, order, user_token_budget(links[i], rb, grid, lb));
    total += mss(doc.document.tokens, recover_text(received, period), lb.phi).score;
  }
  return total;
}

double baseline_truncated_text(const std::vector<UserPayload>& users, const std::vector<UserLink>& links,
                               const RbGrid& grid, const LinkBudget& lb, const RbAssignment& assignment) {
  if (!validate_assignment(assignment, users.size(), grid.rb_count()))
    throw InputError("invalid RB assignment");
  double total = 0.0;
  for (std::size_t i = 0; i < users.size(); ++i) {
    const auto rb = assignment.rb_of(i);
    if (!rb || !users[i].document) continue;
    total += score_truncated(*users[i].document, user_token_budget(links[i], rb, grid, lb), lb.phi).score;
  }
  return total;
}

}  // namespace semcom
