#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "semcom/random.hpp"

namespace semcom {

/// Downlink resource blocks. All quantities in linear SI units.
struct RbGrid {
  double bandwidth_hz = 2e6;               ///< W, per RB
  std::vector<double> interference_w;      ///< I_q, one per RB
  double noise_psd_w_per_hz = 3.981e-21;   ///< N0

  std::size_t rb_count() const { return interference_w.size(); }
};

/// dBm/Hz -> W/Hz.
double dbm_per_hz_to_watts(double dbm_per_hz);

struct UserLink {
  double distance_m = 1.0;
  double fading = 1.0;           ///< gamma, Rayleigh power fading draw
  double transmit_power_w = 1.0; ///< P

  double gain() const;
};

/// gamma * d^-2. Throws InputError for d <= 0 or gamma < 0.
double channel_gain(double fading, double distance_m);

/// W log2(1 + P phi / (I_q + W N0)), or 0 without an RB.
double capacity(const UserLink& user, std::optional<std::size_t> rb, const RbGrid& grid);

/// Largest Z with Z * bits_per_token / c <= delay_s.
std::size_t token_budget(double capacity_bps, double bits_per_token, double delay_s);

/// For each RB, the user it serves (if any).
struct RbAssignment {
  std::vector<std::optional<std::size_t>> user_of_rb;

  RbAssignment() = default;
  explicit RbAssignment(std::size_t rbs) : user_of_rb(rbs) {}

  std::size_t rb_count() const { return user_of_rb.size(); }
  std::size_t assigned_count() const;
  /// RB held by `user`, if any. Assumes the assignment is valid.
  std::optional<std::size_t> rb_of(std::size_t user) const;
  /// Binary alpha matrix, users x RBs.
  std::vector<std::vector<int>> to_matrix(std::size_t users) const;

  friend bool operator==(const RbAssignment&, const RbAssignment&) = default;
};

/// Row sums <= 1, column sums <= 1, entries in {0,1}, shape users x rbs.
bool validate_assignment(const std::vector<std::vector<int>>& alpha, std::size_t users, std::size_t rbs);
bool validate_assignment(const RbAssignment& a, std::size_t users, std::size_t rbs);

/// Users placed uniformly in a disk of `radius_m` (at least `min_distance_m`
/// from the BS), with exponential(1) power fading.
std::vector<UserLink> place_users(std::size_t users, double radius_m, double min_distance_m,
                                  double transmit_power_w, Rng& rng);

}  // namespace semcom
