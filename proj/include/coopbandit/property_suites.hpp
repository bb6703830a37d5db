#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "coopbandit/adversary.hpp"
#include "coopbandit/exp3.hpp"
#include "coopbandit/graph.hpp"
#include "coopbandit/luby.hpp"
#include "coopbandit/partition.hpp"
#include "coopbandit/random.hpp"
#include "coopbandit/simulation.hpp"
#include "coopbandit/validate.hpp"

// Randomized property suites behind `validate <suite> --seed S`. Each suite
// returns named checks with the first counterexample as witness.

namespace coopbandit {

namespace detail {

class SuiteBuilder {
 public:
  PropertyCheck& check(const std::string& name) {
    for (auto& c : report_.checks)
      if (c.name == name) return c;
    report_.checks.push_back({name, true, {}});
    return report_.checks.back();
  }

  void fail(const std::string& name, const std::string& witness) {
    auto& c = check(name);
    if (c.passed) {
      c.passed = false;
      c.witness = witness;
    }
  }

  void expect(const std::string& name, bool ok, const std::function<std::string()>& witness) {
    check(name);
    if (!ok) fail(name, witness());
  }

  ValidationReport take() { return std::move(report_); }

 private:
  ValidationReport report_;
};

inline Graph suite_graph(Rng& rng, std::size_t min_n, std::size_t max_n) {
  const std::size_t n = min_n + static_cast<std::size_t>(uniform01(rng) * static_cast<double>(max_n - min_n + 1));
  const double density = uniform01(rng);
  return random_connected_graph(std::min(n, max_n), density * density, rng);
}

inline std::string describe(const Graph& g) {
  std::ostringstream s;
  s << "N=" << g.node_count() << " edges={";
  bool first = true;
  for (const auto& e : g.edges()) {
    s << (first ? "" : ",") << e.u << "-" << e.v;
    first = false;
  }
  s << "}";
  return s.str();
}

}  // namespace detail

/// 200 graphs with N in [1, 12]: exact independence number against subset
/// enumeration, BFS distances against Floyd-Warshall, r-MIS checks against
/// the definition, edge-list round trip.
inline ValidationReport suite_graph_oracles(std::uint64_t seed) {
  detail::SuiteBuilder out;
  Rng rng(seed);
  for (int inst = 0; inst < 200; ++inst) {
    const Graph g = detail::suite_graph(rng, 1, 12);
    const std::size_t n = g.node_count();

    std::size_t alpha = 0;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      bool independent = true;
      for (const auto& e : g.edges())
        if ((mask >> e.u & 1u) && (mask >> e.v & 1u)) independent = false;
      if (independent) alpha = std::max<std::size_t>(alpha, static_cast<std::size_t>(std::popcount(mask)));
    }
    const std::size_t got = independence_number(g);
    out.expect("independence_number", got == alpha, [&] {
      return detail::describe(g) + " got " + std::to_string(got) + " expected " + std::to_string(alpha);
    });

    std::vector<std::vector<std::size_t>> fw(n, std::vector<std::size_t>(n, kUnreachable));
    for (NodeId v = 0; v < n; ++v) fw[v][v] = 0;
    for (const auto& e : g.edges()) fw[e.u][e.v] = fw[e.v][e.u] = 1;
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          if (fw[i][k] != kUnreachable && fw[k][j] != kUnreachable) fw[i][j] = std::min(fw[i][j], fw[i][k] + fw[k][j]);
    for (NodeId v = 0; v < n; ++v) {
      auto d = bfs_from(g, v);
      out.expect("bfs_distance", d == fw[v], [&] { return detail::describe(g) + " source " + std::to_string(v); });
    }

    // Random candidate sets: is_r_mis iff independent at radius r and no
    // universe node can be added.
    for (std::size_t r = 1; r <= 2; ++r) {
      std::vector<NodeId> universe, candidate;
      for (NodeId v = 0; v < n; ++v) {
        if (uniform01(rng) < 0.7) universe.push_back(v);
      }
      for (NodeId v : universe)
        if (uniform01(rng) < 0.3) candidate.push_back(v);
      bool independent = true;
      for (NodeId a : candidate)
        for (NodeId b : candidate)
          if (a < b && fw[a][b] <= r) independent = false;
      bool maximal = true;
      for (NodeId u : universe) {
        bool covered = false;
        for (NodeId c : candidate) covered = covered || fw[u][c] <= r;
        if (!covered) maximal = false;
      }
      const bool got_mis = is_r_mis(g, candidate, universe, r);
      out.expect("is_r_mis", got_mis == (independent && maximal), [&] {
        return detail::describe(g) + " r=" + std::to_string(r) + " candidate size " + std::to_string(candidate.size());
      });
    }

    std::stringstream io;
    write_edge_list(io, g);
    const Graph back = read_edge_list(io);
    out.expect("edge_list_round_trip", back.edges() == g.edges() && back.node_count() == n,
               [&] { return detail::describe(g); });
  }
  return out.take();
}

/// 1000 random center updates with eta <= 1/(2K) and estimates drawn from
/// the observation model: probability sandwich and normalization. Plus
/// 10^5-draw unbiasedness checks at q in {0.1, 0.5, 0.9}.
inline ValidationReport suite_exp3(std::uint64_t seed) {
  detail::SuiteBuilder out;
  Rng rng(seed);
  for (int inst = 0; inst < 1000; ++inst) {
    const std::size_t k = 2 + static_cast<std::size_t>(uniform01(rng) * 9);
    const std::size_t hood = 1 + static_cast<std::size_t>(uniform01(rng) * 6);
    std::vector<double> w(k);
    for (double& x : w) x = std::exp(-8.0 * uniform01(rng));
    const double eta = uniform01(rng) / (2.0 * static_cast<double>(k));
    const auto state = Exp3State::from_weights(w, eta);
    const auto p = state.distribution();
    std::vector<ActionDistribution> views{p};
    for (std::size_t j = 1; j < hood; ++j) {
      std::vector<double> q(k);
      double total = 0.0;
      for (double& x : q) total += (x = uniform01(rng) + 1e-3);
      for (double& x : q) x /= total;
      views.emplace_back(std::move(q));
    }
    std::vector<bool> observed(k, false);
    for (const auto& d : views) observed[sample_action(d, uniform01(rng))] = true;
    std::vector<double> est(k);
    for (Arm i = 0; i < k; ++i)
      est[i] = estimated_loss({i, observed[i], observation_probability(views, i), uniform01(rng)});
    const auto next = exp3_update(state, est).distribution();
    out.expect("distribution_valid", next.is_valid(1e-9), [&] { return "instance " + std::to_string(inst); });
    const auto bad = sandwich_violation(p, next, est, eta);
    out.expect("sandwich", !bad, [&] {
      return "instance " + std::to_string(inst) + " K=" + std::to_string(k) + " arm " + std::to_string(*bad);
    });
  }

  const int draws = 100000;
  for (double q : {0.1, 0.5, 0.9}) {
    const double loss = 0.7;
    double sum = 0.0, sq = 0.0;
    for (int d = 0; d < draws; ++d) {
      const double x = estimated_loss({0, uniform01(rng) < q, q, loss});
      sum += x;
      sq += x * x;
    }
    const double mean = sum / draws;
    const double sd = std::sqrt(std::max(0.0, sq / draws - mean * mean));
    out.expect("unbiased", std::abs(mean - loss) <= 3.0 * sd / std::sqrt(static_cast<double>(draws)), [&] {
      return "q=" + std::to_string(q) + " mean " + std::to_string(mean);
    });
  }
  return out.take();
}

/// 200 graphs with N in [2, 50], each with K in {2, 5, 10}: every structural
/// partition property of the informed construction.
inline ValidationReport suite_partition(std::uint64_t seed) {
  detail::SuiteBuilder out;
  Rng rng(seed);
  for (int inst = 0; inst < 200; ++inst) {
    const Graph g = detail::suite_graph(rng, 2, 50);
    for (std::size_t k : {2, 5, 10}) {
      const auto report = validate_partition(g, partition_informed(g, k), k);
      for (const auto& c : report.checks)
        out.expect(c.name, c.passed, [&] { return "K=" + std::to_string(k) + " " + detail::describe(g) + ": " + c.witness; });
    }
  }
  return out.take();
}

/// 2000 budgeted Luby runs on graphs with N in [2, 40] at delta = 0.01:
/// outputs always 2-independent, maximal whenever nobody is left over, and
/// the non-maximality rate at most delta plus three binomial standard errors.
inline ValidationReport suite_luby(std::uint64_t seed) {
  detail::SuiteBuilder out;
  Rng rng(seed);
  const double delta = 0.01;
  const int calls = 2000;
  int failures = 0;
  for (int inst = 0; inst < calls; ++inst) {
    const Graph g = detail::suite_graph(rng, 2, 40);
    std::vector<NodeId> universe;
    for (NodeId v = 0; v < g.node_count(); ++v)
      if (uniform01(rng) < 0.8) universe.push_back(v);
    const auto t = luby_2mis(g, universe, luby_rounds_for(g.node_count(), delta), rng);
    out.expect("two_independent", is_r_independent(g, t.joined, 2), [&] { return detail::describe(g); });
    const bool maximal = is_r_mis(g, t.joined, universe, 2);
    out.expect("leftover_iff_non_maximal", maximal == t.leftover.empty(), [&] { return detail::describe(g); });
    out.expect("step_cost", t.step_cost == kLubyStepsPerRound * t.rounds_used, [&] { return detail::describe(g); });
    if (!maximal) ++failures;
  }
  const double rate = static_cast<double>(failures) / calls;
  const double sigma = std::sqrt(delta * (1.0 - delta) / calls);
  out.expect("failure_rate", rate <= delta + 3.0 * sigma, [&] {
    return std::to_string(failures) + "/" + std::to_string(calls) + " non-maximal";
  });
  return out.take();
}

/// 20 short runs on random graphs with N in [2, 12], half informed and half
/// uninformed: determinism, loss ledger consistency, obliviousness and the
/// probability sandwich; plus message causality on path graphs.
inline ValidationReport suite_simulation(std::uint64_t seed) {
  detail::SuiteBuilder out;
  Rng rng(seed);
  for (int inst = 0; inst < 20; ++inst) {
    const Graph g = detail::suite_graph(rng, 2, 12);
    const std::size_t k = 2 + static_cast<std::size_t>(uniform01(rng) * 4);
    const std::size_t horizon = 300;
    const std::uint64_t adv_seed = rng(), pol_seed = rng();
    std::vector<double> means(k);
    for (double& m : means) m = uniform01(rng);
    const auto oracle = LossOracle::bernoulli(means, adv_seed);
    const bool informed = inst % 2 == 0;

    std::vector<double> charged(g.node_count(), 0.0);
    SimulationOptions opts;
    opts.debug_invariants = true;
    opts.observer = [&](const PlayRecord& r) {
      charged[r.agent] += r.loss;
    };
    auto run = [&](const SimulationOptions& o) {
      return informed ? run_informed(g, k, horizon, oracle, pol_seed, o)
                      : run_uninformed(g, k, 2 * g.node_count(), horizon, oracle, pol_seed, o);
    };
    const auto a = run(opts);
    const auto b = run(SimulationOptions{true, {}});
    const std::string where = std::string(informed ? "informed " : "uninformed ") + detail::describe(g);
    out.expect("determinism", a.digest == b.digest && a.cumulative_loss == b.cumulative_loss, [&] { return where; });
    out.expect("ledger_consistency", charged == a.cumulative_loss, [&] { return where; });
    out.expect("sandwich", a.sandwich_violations == 0 && a.sandwich_checks > 0, [&] {
      return where + ": " + std::to_string(a.sandwich_violations) + " violations";
    });

    // A different policy seed must not change a single loss.
    std::vector<double> arm_a(k), arm_c(k);
    const auto c = informed ? run_informed(g, k, horizon, oracle, pol_seed + 1)
                            : run_uninformed(g, k, 2 * g.node_count(), horizon, oracle, pol_seed + 1);
    bool same = true;
    for (std::size_t t = 0; t < a.setup_steps + horizon; ++t) {
      oracle.fill_round(t, arm_a);
      const auto replay = LossOracle::bernoulli(means, adv_seed);
      replay.fill_round(t, arm_c);
      same = same && arm_a == arm_c;
    }
    if (a.setup_steps == c.setup_steps) same = same && a.arm_loss == c.arm_loss;
    out.expect("oblivious", same, [&] { return where; });
  }

  for (std::size_t n : {3, 5, 8}) {
    const Graph g = path_graph(n);
    const std::size_t k = 2, horizon = 40;
    const auto oracle = LossOracle::bernoulli({0.3, 0.6}, seed);
    std::map<std::pair<std::size_t, NodeId>, std::vector<double>> played;
    SimulationOptions opts;
    opts.observer = [&](const PlayRecord& r) {
      played[{r.step, r.agent}].assign(r.distribution.begin(), r.distribution.end());
    };
    const auto res = run_informed(g, k, horizon, oracle, seed, opts);
    for (NodeId v = 0; v < n; ++v) {
      const std::size_t d = res.partition.delay[v];
      const NodeId c = res.partition.center_of[v];
      for (std::size_t t = 0; t + d < horizon; ++t) {
        out.expect("message_causality", played[{t, c}] == played[{t + d, v}], [&] {
          return "path N=" + std::to_string(n) + " agent " + std::to_string(v) + " step " + std::to_string(t);
        });
      }
    }
  }
  return out.take();
}

inline const std::map<std::string, std::function<ValidationReport(std::uint64_t)>>& property_suites() {
  static const std::map<std::string, std::function<ValidationReport(std::uint64_t)>> suites{
      {"graph-oracles", suite_graph_oracles},
      {"exp3", suite_exp3},
      {"partition", suite_partition},
      {"luby", suite_luby},
      {"simulation", suite_simulation},
  };
  return suites;
}

}  // namespace coopbandit
