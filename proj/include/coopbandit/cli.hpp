#pragma once

#include <algorithm>
#include <atomic>
#include <cinttypes>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "coopbandit/adversary.hpp"
#include "coopbandit/graph.hpp"
#include "coopbandit/partition.hpp"
#include "coopbandit/partition_io.hpp"
#include "coopbandit/property_suites.hpp"
#include "coopbandit/report.hpp"
#include "coopbandit/simulation.hpp"
#include "coopbandit/uninformed.hpp"
#include "coopbandit/validate.hpp"

namespace coopbandit {

inline constexpr int kExitOk = 0;
inline constexpr int kExitPropertyFailure = 1;
inline constexpr int kExitUsage = 2;

struct RunConfig {
  std::string graph_path;
  std::size_t arms = 0;
  std::size_t horizon = 0;
  Setting setting = Setting::Informed;
  std::optional<std::size_t> n_bar;
  std::string adversary;
  std::size_t seeds = 1;
  std::uint64_t adversary_seed = 0;
  std::uint64_t policy_seed = 0;
  std::string out_dir;
  std::string log_path;
  bool debug_invariants = false;
  unsigned workers = 0;  // 0: hardware concurrency
};

inline std::string hex64(std::uint64_t x) {
  char buf[19];
  std::snprintf(buf, sizeof buf, "0x%016" PRIx64, x);
  return buf;
}

inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace detail {

inline void check_config(const RunConfig& cfg, const Graph& g) {
  require_arms(cfg.arms);
  if (cfg.horizon == 0) throw Error(ErrorCode::Config, "--horizon must be at least 1");
  if (cfg.setting == Setting::Uninformed) {
    if (!cfg.n_bar) throw Error(ErrorCode::Config, "--nbar is required for the uninformed setting");
    if (*cfg.n_bar < g.node_count())
      throw Error(ErrorCode::Config, "--nbar " + std::to_string(*cfg.n_bar) + " is below N = " +
                                         std::to_string(g.node_count()));
  }
  if (cfg.seeds == 0) throw Error(ErrorCode::Config, "--seeds must be at least 1");
}

inline std::filesystem::path prepare_out_dir(const std::string& dir) {
  std::filesystem::path p(dir);
  std::error_code ec;
  std::filesystem::create_directories(p, ec);
  if (ec) throw Error(ErrorCode::Config, "cannot create output directory " + dir + ": " + ec.message());
  return p;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::Config, "cannot write " + path.string());
  f << text;
}

inline std::string delay_cell(std::size_t d) { return d == kUnreachable ? std::string() : std::to_string(d); }

}  // namespace detail

/// Header: seed,agent,degree,mass_m,mass_d,delay,regret,regret_semi,
/// bound_individual,bound_corollary,setup_steps. `degree` is |N(v)|
/// (closed); rows sorted by (seed, agent).
inline std::string results_csv(std::span<const RegretReport> reports) {
  std::vector<const AgentRow*> rows;
  for (const auto& r : reports)
    for (const auto& row : r.rows) rows.push_back(&row);
  std::stable_sort(rows.begin(), rows.end(), [](const AgentRow* a, const AgentRow* b) {
    return a->seed != b->seed ? a->seed < b->seed : a->agent < b->agent;
  });
  std::string csv = "seed,agent,degree,mass_m,mass_d,delay,regret,regret_semi,bound_individual,bound_corollary,setup_steps\n";
  for (const AgentRow* r : rows) {
    csv += std::to_string(r->seed) + ',' + std::to_string(r->agent) + ',' + std::to_string(r->degree) + ',' +
           std::to_string(r->mass.center_mass()) + ',' + std::to_string(r->mass.depth()) + ',' +
           detail::delay_cell(r->delay) + ',' + format_double(r->regret) + ',' + format_double(r->regret_semi) + ',' +
           format_double(r->bound_individual) + ',' + format_double(r->bound_corollary) + ',' +
           std::to_string(r->setup_steps) + '\n';
  }
  return csv;
}

struct SweepResult {
  std::vector<RunResult> runs;
  std::vector<RegretReport> reports;
};

/// Runs seeds base+0 .. base+S-1 on a worker pool. Each run owns its state;
/// results are stored by seed index so the output order never depends on
/// scheduling. With a log path every run streams its records to a part file
/// that is concatenated in seed order afterwards.
inline SweepResult run_sweep(const Graph& g, const RunConfig& cfg) {
  SweepResult out;
  out.runs.resize(cfg.seeds);
  out.reports.resize(cfg.seeds);
  std::vector<std::exception_ptr> errors(cfg.seeds);
  std::vector<std::filesystem::path> parts(cfg.seeds);
  std::atomic<std::size_t> next{0};

  auto work = [&] {
    for (std::size_t i = next++; i < cfg.seeds; i = next++) {
      try {
        const std::uint64_t adv_seed = cfg.adversary_seed + i;
        const std::uint64_t pol_seed = cfg.policy_seed + i;
        const auto oracle = parse_adversary(cfg.adversary, cfg.arms, adv_seed);
        SimulationOptions opts;
        opts.debug_invariants = cfg.debug_invariants;
        std::ofstream log;
        if (!cfg.log_path.empty()) {
          parts[i] = cfg.log_path + ".part" + std::to_string(i);
          log.open(parts[i], std::ios::binary);
          if (!log) throw Error(ErrorCode::Config, "cannot write " + parts[i].string());
          opts.observer = [&log, pol_seed](const PlayRecord& r) {
            char buf[200];
            std::snprintf(buf, sizeof buf,
                          "{\"seed\":%" PRIu64 ",\"t\":%zu,\"v\":%u,\"action\":%zu,\"loss\":%.17g,\"role\":\"%s\"}\n",
                          pol_seed, r.step, static_cast<unsigned>(r.agent), r.action, r.loss,
                          std::string(to_string(r.role)).c_str());
            log << buf;
          };
        }
        out.runs[i] = cfg.setting == Setting::Informed
                          ? run_informed(g, cfg.arms, cfg.horizon, oracle, pol_seed, opts)
                          : run_uninformed(g, cfg.arms, *cfg.n_bar, cfg.horizon, oracle, pol_seed, opts);
        out.reports[i] = regret_report(g, out.runs[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  unsigned workers = cfg.workers ? cfg.workers : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, cfg.seeds));
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  if (!cfg.log_path.empty()) {
    std::ofstream log(cfg.log_path, std::ios::binary);
    if (!log) throw Error(ErrorCode::Config, "cannot write " + cfg.log_path);
    for (const auto& part : parts) {
      {
        std::ifstream in(part, std::ios::binary);
        log << in.rdbuf();
      }
      std::filesystem::remove(part);
    }
  }
  return out;
}

inline nlohmann::json summary_json(const Graph& g, const RunConfig& cfg, const SweepResult& sweep) {
  using nlohmann::json;
  json s;
  s["setting"] = std::string(to_string(cfg.setting));
  s["arms"] = cfg.arms;
  s["horizon"] = cfg.horizon;
  s["n_bar"] = cfg.n_bar ? json(*cfg.n_bar) : json(nullptr);
  s["adversary"] = cfg.adversary;
  s["adversary_seed"] = cfg.adversary_seed;
  s["policy_seed"] = cfg.policy_seed;
  s["seeds"] = cfg.seeds;
  s["nodes"] = g.node_count();
  s["edges"] = g.edge_count();
  const bool applicable = bounds_regime(cfg.arms, cfg.horizon);
  s["bounds_applicable"] = applicable;

  Fnv1a64 combined;
  json runs = json::array();
  std::size_t violations = 0;
  double mean_regret = 0.0;
  for (const auto& r : sweep.runs) {
    combined.add(r.digest);
    violations += r.sandwich_violations;
    runs.push_back({{"policy_seed", r.policy_seed},
                    {"adversary_seed", r.adversary_seed},
                    {"setup_steps", r.setup_steps},
                    {"centers", r.partition.centers},
                    {"best_arm", r.best_arm},
                    {"best_arm_loss", r.best_arm_loss},
                    {"policy_best_arm", r.policy_best_arm},
                    {"luby_failures", r.luby_failures},
                    {"warmup_plays", r.warmup_plays},
                    {"sandwich_checks", r.sandwich_checks},
                    {"sandwich_violations", r.sandwich_violations},
                    {"digest", hex64(r.digest)}});
  }
  for (const auto& rep : sweep.reports) mean_regret += rep.mean_regret_semi / static_cast<double>(sweep.reports.size());
  s["runs"] = std::move(runs);
  s["digest"] = hex64(combined.value());

  json agents = json::array();
  bool within = true;
  for (const auto& a : summarize(sweep.reports)) {
    within = within && a.within_individual() && a.within_corollary();
    agents.push_back({{"agent", a.agent},
                      {"degree", a.degree},
                      {"mean_regret", a.mean_regret},
                      {"mean_regret_semi", a.mean_regret_semi},
                      {"mean_bound_individual", a.mean_bound_individual},
                      {"mean_bound_corollary", a.mean_bound_corollary},
                      {"within_individual", a.within_individual()},
                      {"within_corollary", a.within_corollary()}});
  }
  s["agents"] = std::move(agents);
  s["within_bounds"] = within;
  s["sandwich_violations"] = violations;
  s["mean_regret_semi"] = mean_regret;

  const auto& first = sweep.reports.front();
  s["inverse_degree_sum"] = first.inverse_degree_sum;
  s["independence_number"] = first.independence ? json(*first.independence) : json(nullptr);
  s["average_regret_scale"] = first.average_scale ? json(*first.average_scale) : json(nullptr);
  s["inverse_sum_within_alpha"] = first.inverse_sum_within_alpha();
  s["passed"] = violations == 0 && (!applicable || within) && first.inverse_sum_within_alpha();
  return s;
}

inline int cli_simulate(const RunConfig& cfg, std::ostream& out) {
  const Graph g = load_edge_list(cfg.graph_path);
  detail::check_config(cfg, g);
  parse_adversary(cfg.adversary, cfg.arms, cfg.adversary_seed);  // fail fast on a bad spec
  if (!bounds_regime(cfg.arms, cfg.horizon))
    std::cerr << "warning: T < K^2 ln K, bound comparisons disabled\n";

  const auto sweep = run_sweep(g, cfg);
  const std::string csv = results_csv(sweep.reports);
  const auto summary = summary_json(g, cfg, sweep);
  if (cfg.out_dir.empty()) {
    out << csv;
  } else {
    const auto dir = detail::prepare_out_dir(cfg.out_dir);
    detail::write_text(dir / "results.csv", csv);
    detail::write_text(dir / "summary.json", summary.dump(2) + "\n");
    out << "wrote " << (dir / "results.csv").string() << " and " << (dir / "summary.json").string() << "\n";
  }
  out << "digest " << summary["digest"].get<std::string>() << " "
      << (summary["passed"].get<bool>() ? "PASS" : "FAIL") << "\n";
  return summary["passed"].get<bool>() ? kExitOk : kExitPropertyFailure;
}

inline int cli_partition(const RunConfig& cfg, std::ostream& out) {
  const Graph g = load_edge_list(cfg.graph_path);
  require_arms(cfg.arms);
  nlohmann::json extra;
  Partition p;
  ValidationReport report;
  std::vector<std::string> skipped;
  if (cfg.setting == Setting::Informed) {
    p = partition_informed(g, cfg.arms);
    report = validate_partition(g, p, cfg.arms);
  } else {
    detail::check_config(cfg, g);
    Rng rng(cfg.policy_seed);
    auto res = compute_centers_uninformed(g, cfg.arms, *cfg.n_bar, cfg.horizon, rng);
    p = std::move(res.partition);
    report = validate_partition(g, p, cfg.arms);
    extra["setup_steps"] = res.setup_steps;
    extra["luby_round_budget"] = res.luby_round_budget;
    extra["luby_failures"] = res.luby_failures;
    if (res.luby_failures > 0) {
      // The degree guarantees assume every Luby call returned a maximal set.
      std::erase_if(report.checks, [&](const PropertyCheck& c) {
        const bool conditional = c.name == "mass_lower_bound" || c.name == "center_distance_bound";
        if (conditional) skipped.push_back(c.name);
        return conditional;
      });
    }
  }
  auto rep = report_to_json(report);
  rep["setting"] = std::string(to_string(cfg.setting));
  rep["arms"] = cfg.arms;
  if (!skipped.empty()) rep["skipped"] = skipped;
  if (!extra.is_null()) rep.update(extra);

  const auto pj = partition_to_json(p);
  if (cfg.out_dir.empty()) {
    out << nlohmann::json{{"partition", pj}, {"report", rep}}.dump(2) << "\n";
  } else {
    const auto dir = detail::prepare_out_dir(cfg.out_dir);
    detail::write_text(dir / "partition.json", pj.dump(2) + "\n");
    detail::write_text(dir / "report.json", rep.dump(2) + "\n");
  }
  for (const auto& c : report.checks)
    out << (c.passed ? "PASS " : "FAIL ") << c.name << (c.passed ? "" : ": " + c.witness) << "\n";
  return report.all_passed() ? kExitOk : kExitPropertyFailure;
}

inline int cli_validate(const std::string& suite, std::uint64_t seed, std::ostream& out) {
  const auto& suites = property_suites();
  const auto it = suites.find(suite);
  if (it == suites.end()) throw Error(ErrorCode::Config, "unknown suite '" + suite + "'");
  const auto report = it->second(seed);
  for (const auto& c : report.checks)
    out << (c.passed ? "PASS " : "FAIL ") << suite << "/" << c.name << (c.passed ? "" : ": " + c.witness) << "\n";
  return report.all_passed() ? kExitOk : kExitPropertyFailure;
}

/// Entry point shared by the binary and the tests. Exit codes: 0 pass,
/// 1 property failure, 2 usage, parse or input error.
inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cooperative multi-agent bandits on a communication graph"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::string setting = "informed";
  std::size_t n_bar = 0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--graph", cfg.graph_path, "edge-list file")->required();
    sub->add_option("--arms", cfg.arms, "number of arms K")->required();
    sub->add_option("--setting", setting, "informed or uninformed")
        ->check(CLI::IsMember({"informed", "uninformed"}));
    sub->add_option("--nbar", n_bar, "upper bound on N (uninformed)");
    sub->add_option("--policy-seed", cfg.policy_seed, "policy RNG seed (sweep base)");
    sub->add_option("--out", cfg.out_dir, "output directory");
    sub->add_flag("--debug-invariants", cfg.debug_invariants, "check the probability sandwich every update");
  };

  auto* partition = app.add_subcommand("partition", "compute and validate the agent partition");
  add_common(partition);
  partition->add_option("--horizon", cfg.horizon, "horizon T (sets the uninformed Luby budget)");

  auto* simulate = app.add_subcommand("simulate", "run the cooperative policy and report regret");
  add_common(simulate);
  simulate->add_option("--horizon", cfg.horizon, "horizon T")->required();
  simulate->add_option("--adversary", cfg.adversary, "bernoulli:..., matrix:PATH or switch:...")->required();
  simulate->add_option("--seeds", cfg.seeds, "number of seeds in the sweep");
  simulate->add_option("--adversary-seed", cfg.adversary_seed, "adversary seed (sweep base)");
  simulate->add_option("--log", cfg.log_path, "JSON-lines play log");
  simulate->add_option("--workers", cfg.workers, "worker threads (default: all cores)");

  auto* validate = app.add_subcommand("validate", "run a randomized property suite");
  std::string suite;
  std::uint64_t seed = 0;
  validate->add_option("suite", suite, "graph-oracles, exp3, partition, luby or simulation")->required();
  validate->add_option("--seed", seed, "suite RNG seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    cfg.setting = setting == "uninformed" ? Setting::Uninformed : Setting::Informed;
    if (n_bar > 0) cfg.n_bar = n_bar;
    if (*partition) {
      if (cfg.setting == Setting::Uninformed && cfg.horizon == 0)
        throw Error(ErrorCode::Config, "--horizon is required for the uninformed setting");
      return cli_partition(cfg, out);
    }
    if (*simulate) return cli_simulate(cfg, out);
    return cli_validate(suite, seed, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace coopbandit
