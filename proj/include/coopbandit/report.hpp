#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "coopbandit/bounds.hpp"
#include "coopbandit/graph.hpp"
#include "coopbandit/simulation.hpp"

namespace coopbandit {

struct AgentRow {
  std::uint64_t seed = 0;
  NodeId agent = 0;
  std::size_t degree = 0;  // |N(v)|, closed
  Mass mass;
  std::size_t delay = kUnreachable;
  Role role = Role::Unassigned;
  double regret = 0.0;
  double regret_semi = 0.0;
  double policy_regret = 0.0;
  double policy_regret_semi = 0.0;
  /// 4 sqrt(ln K K/M T) for centers, NaN otherwise.
  double bound_center = std::numeric_limits<double>::quiet_NaN();
  /// 7 sqrt(ln K K/M(v) T), plus setup_steps in the uninformed setting.
  double bound_individual = std::numeric_limits<double>::infinity();
  /// Degree-only form: informed 12 sqrt(..), uninformed 12(K ln(..) + sqrt(..)) + 1.
  double bound_corollary = 0.0;
  std::size_t setup_steps = 0;

  double ratio_individual() const { return regret / bound_individual; }
  double ratio_corollary() const { return regret / bound_corollary; }
};

struct RegretReport {
  std::vector<AgentRow> rows;
  bool bounds_applicable = false;
  /// alpha(G) when N is small enough for the exact search.
  std::optional<std::size_t> independence;
  double inverse_degree_sum = 0.0;  // sum_v 1/|N(v)|
  double mean_regret = 0.0;
  double mean_regret_semi = 0.0;
  /// sqrt((1 + K alpha / N) T), present with `independence`.
  std::optional<double> average_scale;

  /// Sum_v 1/|N(v)| <= alpha(G); vacuous when alpha is unknown.
  bool inverse_sum_within_alpha() const {
    return !independence || inverse_degree_sum <= static_cast<double>(*independence) + 1e-12;
  }
};

inline double individual_bound(const RunResult& r, const Mass& mass) {
  if (mass.is_nil()) return std::numeric_limits<double>::infinity();
  const double b = agent_regret_bound(r.arms, r.horizon, mass);
  return r.setting == Setting::Uninformed ? b + static_cast<double>(r.setup_steps) : b;
}

inline double corollary_bound(const RunResult& r, std::size_t closed_degree) {
  return r.setting == Setting::Uninformed ? uninformed_regret_bound(r.arms, r.n_bar, r.horizon, closed_degree)
                                          : informed_regret_bound(r.arms, r.horizon, closed_degree);
}

inline RegretReport regret_report(const Graph& g, const RunResult& r) {
  RegretReport out;
  out.bounds_applicable = r.bounds_applicable;
  const std::size_t n = g.node_count();
  for (NodeId v = 0; v < n; ++v) {
    AgentRow row;
    row.seed = r.policy_seed;
    row.agent = v;
    row.degree = g.closed_degree(v);
    row.mass = r.partition.mass[v];
    row.delay = r.partition.delay[v];
    row.role = role_of(r.partition, v);
    row.regret = r.regret[v];
    row.regret_semi = r.regret_semi[v];
    row.policy_regret = r.policy_regret[v];
    row.policy_regret_semi = r.policy_regret_semi[v];
    if (row.role == Role::Center)
      row.bound_center = center_regret_bound(r.arms, r.horizon, static_cast<double>(row.mass.center_mass()));
    row.bound_individual = individual_bound(r, row.mass);
    row.bound_corollary = corollary_bound(r, row.degree);
    row.setup_steps = r.setup_steps;
    out.mean_regret += row.regret / static_cast<double>(n);
    out.mean_regret_semi += row.regret_semi / static_cast<double>(n);
    out.inverse_degree_sum += 1.0 / static_cast<double>(row.degree);
    out.rows.push_back(row);
  }
  if (n <= kBruteForceLimit) {
    out.independence = independence_number(g);
    out.average_scale = average_regret_scale(r.arms, r.horizon, n, *out.independence);
  }
  return out;
}

/// Per-agent means over seeds. Bounds are averaged too: in the uninformed
/// setting the partition, hence M(v), can differ between seeds.
struct AgentSummary {
  NodeId agent = 0;
  std::size_t degree = 0;
  std::size_t runs = 0;
  double mean_regret = 0.0;
  double mean_regret_semi = 0.0;
  double mean_bound_individual = 0.0;
  double mean_bound_corollary = 0.0;
  double max_ratio_individual = 0.0;

  bool within_individual() const { return mean_regret_semi <= mean_bound_individual; }
  bool within_corollary() const { return mean_regret_semi <= mean_bound_corollary; }
};

inline std::vector<AgentSummary> summarize(std::span<const RegretReport> reports) {
  std::vector<AgentSummary> out;
  if (reports.empty()) return out;
  const std::size_t n = reports.front().rows.size();
  out.resize(n);
  for (const auto& rep : reports) {
    for (std::size_t v = 0; v < n; ++v) {
      const AgentRow& row = rep.rows.at(v);
      AgentSummary& s = out[v];
      s.agent = row.agent;
      s.degree = row.degree;
      ++s.runs;
      s.mean_regret += row.regret;
      s.mean_regret_semi += row.regret_semi;
      s.mean_bound_individual += row.bound_individual;
      s.mean_bound_corollary += row.bound_corollary;
      s.max_ratio_individual = std::max(s.max_ratio_individual, row.ratio_individual());
    }
  }
  for (auto& s : out) {
    const double k = static_cast<double>(s.runs);
    s.mean_regret /= k;
    s.mean_regret_semi /= k;
    s.mean_bound_individual /= k;
    s.mean_bound_corollary /= k;
  }
  return out;
}

}  // namespace coopbandit
