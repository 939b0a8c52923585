#include "semcom/channel.hpp"

#include <cmath>

#include "semcom/error.hpp"

namespace semcom {

double dbm_per_hz_to_watts(double dbm_per_hz) { return std::pow(10.0, (dbm_per_hz - 30.0) / 10.0); }

double channel_gain(double fading, double distance_m) {
  if (!(distance_m > 0.0)) throw InputError("distance must be positive");
  if (fading < 0.0) throw InputError("fading must be nonnegative");
  return fading / (distance_m * distance_m);
}

double UserLink::gain() const { return channel_gain(fading, distance_m); }

double capacity(const UserLink& user, std::optional<std::size_t> rb, const RbGrid& grid) {
  if (!rb) return 0.0;
  if (*rb >= grid.rb_count()) throw InputError("RB index out of range");
  const double sinr = user.transmit_power_w * user.gain() /
                      (grid.interference_w[*rb] + grid.bandwidth_hz * grid.noise_psd_w_per_hz);
  return grid.bandwidth_hz * std::log2(1.0 + sinr);
}

std::size_t token_budget(double capacity_bps, double bits_per_token, double delay_s) {
  if (!(bits_per_token > 0.0) || !(delay_s > 0.0)) throw InputError("bits per token and delay must be positive");
  if (!(capacity_bps > 0.0)) return 0;
  auto fits = [&](double z) { return z * bits_per_token / capacity_bps <= delay_s; };
  auto z = static_cast<std::size_t>(std::floor(capacity_bps * delay_s / bits_per_token));
  // floor() of a rounded product can be off by one either way.
  while (z > 0 && !fits(static_cast<double>(z))) --z;
  while (fits(static_cast<double>(z + 1))) ++z;
  return z;
}

std::size_t RbAssignment::assigned_count() const {
  std::size_t n = 0;
  for (const auto& u : user_of_rb) n += u.has_value();
  return n;
}

std::optional<std::size_t> RbAssignment::rb_of(std::size_t user) const {
  for (std::size_t q = 0; q < user_of_rb.size(); ++q)
    if (user_of_rb[q] == user) return q;
  return std::nullopt;
}

std::vector<std::vector<int>> RbAssignment::to_matrix(std::size_t users) const {
  std::vector<std::vector<int>> alpha(users, std::vector<int>(user_of_rb.size(), 0));
  for (std::size_t q = 0; q < user_of_rb.size(); ++q)
    if (user_of_rb[q] && *user_of_rb[q] < users) alpha[*user_of_rb[q]][q] = 1;
  return alpha;
}

bool validate_assignment(const std::vector<std::vector<int>>& alpha, std::size_t users, std::size_t rbs) {
  if (alpha.size() != users) return false;
  std::vector<int> col(rbs, 0);
  for (const auto& row : alpha) {
    if (row.size() != rbs) return false;
    int row_sum = 0;
    for (std::size_t q = 0; q < rbs; ++q) {
      if (row[q] != 0 && row[q] != 1) return false;
      row_sum += row[q];
      col[q] += row[q];
    }
    if (row_sum > 1) return false;
  }
  for (int c : col)
    if (c > 1) return false;
  return true;
}

bool validate_assignment(const RbAssignment& a, std::size_t users, std::size_t rbs) {
  if (a.rb_count() != rbs) return false;
  std::vector<int> held(users, 0);
  for (const auto& u : a.user_of_rb) {
    if (!u) continue;
    if (*u >= users || ++held[*u] > 1) return false;
  }
  return true;
}

std::vector<UserLink> place_users(std::size_t users, double radius_m, double min_distance_m,
                                  double transmit_power_w, Rng& rng) {
  if (!(radius_m > min_distance_m) || !(min_distance_m > 0.0))
    throw InputError("need 0 < min distance < cell radius");
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::exponential_distribution<double> fading(1.0);
  std::vector<UserLink> links;
  links.reserve(users);
  const double r0 = min_distance_m * min_distance_m, r1 = radius_m * radius_m;
  for (std::size_t i = 0; i < users; ++i) {
    UserLink l;
    // Uniform over the annulus: r^2 uniform in [r0^2, r1^2].
    l.distance_m = std::sqrt(r0 + (r1 - r0) * unit(rng));
    l.fading = fading(rng);
    l.transmit_power_w = transmit_power_w;
    links.push_back(l);
  }
  return links;
}

}  // namespace semcom
