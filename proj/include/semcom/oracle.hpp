#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "semcom/attention.hpp"
#include "semcom/channel.hpp"
#include "semcom/corpus.hpp"
#include "semcom/mss.hpp"

namespace semcom {

/// Physical and scoring parameters a table cell depends on.
struct LinkBudget {
  double bits_per_token = 80.0;  ///< O
  double delay_s = 1e-4;         ///< D
  double phi = 0.5;
};

/// What a user receives: its document and the importance of its triples.
/// A user without a document has `document == nullptr`.
struct UserPayload {
  const AnnotatedDocument* document = nullptr;
  ImportanceDistribution importance;
};

/// E_i when user i is granted RB q. Row-major users x RBs.
class MssTable {
 public:
  MssTable() = default;
  MssTable(std::size_t users, std::size_t rbs, double fill = 0.0)
      : users_(users), rbs_(rbs), values_(users * rbs, fill) {}

  std::size_t users() const { return users_; }
  std::size_t rbs() const { return rbs_; }
  bool empty() const { return users_ == 0 || rbs_ == 0; }
  double& at(std::size_t user, std::size_t rb) { return values_.at(user * rbs_ + rb); }
  double at(std::size_t user, std::size_t rb) const { return values_.at(user * rbs_ + rb); }

 private:
  std::size_t users_ = 0;
  std::size_t rbs_ = 0;
  std::vector<double> values_;
};

/// Token budget of `user` on `rb` (0 when no RB).
std::size_t user_token_budget(const UserLink& user, std::optional<std::size_t> rb, const RbGrid& grid,
                              const LinkBudget& lb);

/// select -> recover -> score for one user at one token budget.
MssReport score_semantic(const UserPayload& user, std::size_t token_budget, TokenId period, double phi);

/// Recovered text is the first `token_budget` tokens of the original.
MssReport score_truncated(const AnnotatedDocument& doc, std::size_t token_budget, double phi);

MssTable build_mss_table(const std::vector<UserPayload>& users, const std::vector<UserLink>& links,
                         const RbGrid& grid, const LinkBudget& lb, TokenId period);

/// Sum of table entries over assigned (user, RB) pairs.
double evaluate_reward(const RbAssignment& a, const MssTable& t);

struct Solution {
  RbAssignment assignment;
  double value = 0.0;
};

/// Maximum-weight matching (Kuhn-Munkres on the negated table, padded square).
Solution hungarian_optimum(const MssTable& t);

/// Number of valid (possibly partial) assignments of `users` to `rbs`.
double count_assignments(std::size_t users, std::size_t rbs);

/// Enumerates every valid assignment, ties broken lexicographically on the
/// per-RB choice (idle < user 0 < user 1 ...). Throws InstanceSizeError
/// above `limit` candidates.
Solution exhaustive_optimum(const MssTable& t, double limit = 1e6);

/// Uniformly random maximal assignment.
RbAssignment random_maximal_assignment(std::size_t users, std::size_t rbs, Rng& rng);
double baseline_random(const MssTable& t, std::uint64_t seed);

/// Total MSS of `assignment` when each user fills its budget with triples in
/// a uniformly random order instead of importance order.
double baseline_random_selection(const std::vector<UserPayload>& users, const std::vector<UserLink>& links,
                                 const RbGrid& grid, const LinkBudget& lb, TokenId period,
                                 const RbAssignment& assignment, std::uint64_t seed);

/// Total MSS of `assignment` when the original text is sent token by token.
double baseline_truncated_text(const std::vector<UserPayload>& users, const std::vector<UserLink>& links,
                               const RbGrid& grid, const LinkBudget& lb, const RbAssignment& assignment);

}  // namespace semcom
