#pragma once

#include <cmath>
#include <cstddef>

#include "coopbandit/exp3.hpp"
#include "coopbandit/mass.hpp"

// Closed-form step counts and regret bounds. Everything here is a pure
// function of the run parameters so report columns can be recomputed from
// (K, T, n_bar, mass, degree) alone.

namespace coopbandit {

/// min{|N(v)|, K}.
inline std::size_t capped_degree(std::size_t closed_degree, std::size_t arms) {
  return closed_degree < arms ? closed_degree : arms;
}

/// Theta_K = floor(12 ln K): the index of the last iteration of the
/// components broadcast. The broadcast runs Theta_K + 1 steps.
inline std::size_t components_iterations(std::size_t arms) {
  require_arms(arms);
  return static_cast<std::size_t>(std::floor(12.0 * std::log(static_cast<double>(arms))));
}

inline std::size_t components_steps(std::size_t arms) { return components_iterations(arms) + 1; }

/// ceil(3 ln(|V| / sqrt(delta))) rounds of Luby give a 2-MIS w.p. 1 - delta.
inline std::size_t luby_rounds_for(std::size_t node_count, double delta) {
  return static_cast<std::size_t>(
      std::ceil(3.0 * (std::log(static_cast<double>(node_count)) - 0.5 * std::log(delta))));
}

/// Round budget per Luby call in the uninformed protocol:
/// ceil(3 ln(n_bar * sqrt(K T))), i.e. delta = 1 / (K T).
inline std::size_t uninformed_luby_rounds(std::size_t arms, std::size_t n_bar, std::size_t horizon) {
  const double kt = static_cast<double>(arms) * static_cast<double>(horizon);
  return static_cast<std::size_t>(
      std::ceil(3.0 * (std::log(static_cast<double>(n_bar)) + 0.5 * std::log(kt))));
}

inline constexpr std::size_t kLubyStepsPerRound = 4;

/// K * (4 ceil(3 ln(n_bar sqrt(KT))) + floor(12 ln K) + 1): the K-iteration
/// center election alone.
inline std::size_t uninformed_election_steps(std::size_t arms, std::size_t n_bar, std::size_t horizon) {
  return arms * (kLubyStepsPerRound * uninformed_luby_rounds(arms, n_bar, horizon) + components_steps(arms));
}

/// Election plus the final components pass that fixes the partition.
inline std::size_t uninformed_setup_steps(std::size_t arms, std::size_t n_bar, std::size_t horizon) {
  return uninformed_election_steps(arms, n_bar, horizon) + components_steps(arms);
}

/// 12 K ln(K^2 n_bar T): the upper bound on the election length.
inline double uninformed_steps_bound(std::size_t arms, std::size_t n_bar, std::size_t horizon) {
  const double k = static_cast<double>(arms);
  return 12.0 * k * std::log(k * k * static_cast<double>(n_bar) * static_cast<double>(horizon));
}

/// T >= K^2 ln K, the regime where eta <= 1/(2K) and the bounds apply.
inline bool bounds_regime(std::size_t arms, std::size_t horizon) {
  const double k = static_cast<double>(arms);
  return static_cast<double>(horizon) >= k * k * std::log(k);
}

/// 4 sqrt(ln K * K / M(c) * T) for a center with mass M(c).
inline double center_regret_bound(std::size_t arms, std::size_t horizon, double center_mass) {
  const double k = static_cast<double>(arms);
  return 4.0 * std::sqrt(std::log(k) * k / center_mass * static_cast<double>(horizon));
}

/// 7 sqrt(ln K * K / M(v) * T) for any agent.
inline double agent_regret_bound(std::size_t arms, std::size_t horizon, const Mass& mass) {
  const double k = static_cast<double>(arms);
  return 7.0 * std::sqrt(std::log(k) * k / mass.value() * static_cast<double>(horizon));
}

/// 12 sqrt(ln K (1 + K/|N(v)|) T), informed partition.
inline double informed_regret_bound(std::size_t arms, std::size_t horizon, std::size_t closed_degree) {
  const double k = static_cast<double>(arms);
  return 12.0 * std::sqrt(std::log(k) * (1.0 + k / static_cast<double>(closed_degree)) *
                          static_cast<double>(horizon));
}

/// 12 (K ln(K^2 n_bar T) + sqrt(ln K (1 + K/|N(v)|) T)) + 1, uninformed
/// partition with the election charged to the same agent.
inline double uninformed_regret_bound(std::size_t arms, std::size_t n_bar, std::size_t horizon,
                                      std::size_t closed_degree) {
  const double k = static_cast<double>(arms);
  return 12.0 * (k * std::log(k * k * static_cast<double>(n_bar) * static_cast<double>(horizon)) +
                 std::sqrt(std::log(k) * (1.0 + k / static_cast<double>(closed_degree)) *
                           static_cast<double>(horizon))) +
         1.0;
}

/// sqrt((1 + K alpha / N) T): the scale of the average-regret guarantee.
inline double average_regret_scale(std::size_t arms, std::size_t horizon, std::size_t node_count,
                                   std::size_t independence) {
  const double k = static_cast<double>(arms);
  return std::sqrt((1.0 + k * static_cast<double>(independence) / static_cast<double>(node_count)) *
                   static_cast<double>(horizon));
}

}  // namespace coopbandit
