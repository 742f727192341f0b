#ifndef BIM_HARNESS_HPP
#define BIM_HARNESS_HPP

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "bim/baselines.hpp"
#include "bim/boost_sa.hpp"
#include "bim/candidate.hpp"
#include "bim/diffusion.hpp"
#include "bim/graph.hpp"
#include "bim/indicators.hpp"

namespace bim {

struct CostSensitivity {
  double fraction = 0.02;
  double alt_p = 0.05;
};

struct ExperimentConfig {
  std::string dataset;                   // edge list; empty means `synthetic`
  bool symmetrize = false;
  PowerLawSpec synthetic{};
  std::vector<std::string> solvers{"boost-sa", "combination-sa"};
  std::vector<double> budgets{100.0};
  SAConfig sa{};
  double p = 0.1;                        // propagation and cost probability
  CandidateOptions candidates{};
  ObjectiveKind objective = ObjectiveKind::Sigma2;
  std::size_t mc_replications = 10000;
  std::size_t repeats = 30;
  std::optional<CostSensitivity> cost_sensitivity;
  std::uint64_t master_seed = 1;
  unsigned workers = 1;                  // cells evaluated concurrently
  std::filesystem::path output_dir;      // empty: no files written

  void validate() const {
    if (budgets.empty()) throw Error("budget sweep is empty");
    for (std::size_t i = 0; i < budgets.size(); ++i) {
      if (!(budgets[i] > 0.0)) throw Error("budgets must be positive");
      if (i > 0 && !(budgets[i] > budgets[i - 1])) throw Error("budgets must be strictly ascending");
    }
    if (repeats < 1) throw Error("repeats must be at least 1");
    if (mc_replications < 1) throw Error("at least one Monte-Carlo replication is required");
    if (!(p >= 0.0 && p <= 1.0)) throw Error("probability must lie in [0, 1]");
    if (solvers.empty()) throw Error("no solvers selected");
    sa.validate();
  }
};

inline DirectedGraph load_graph(const ExperimentConfig& config) {
  if (config.dataset.empty()) return generate_powerlaw_graph(config.synthetic);
  return load_edge_list(config.dataset, {.symmetrize = config.symmetrize});
}

/// Everything a solver needs besides the budget and SA settings.
struct SolverContext {
  const DirectedGraph& graph;
  const CostModel& costs;
  const DegreePartition& partition;
  double p = 0.1;
  CandidateOptions candidates{};
  SetObjective objective;
};

using SolverFn = std::function<RunReport(const SolverContext&, double budget, const SAConfig&)>;

namespace detail {

template <class F>
RunReport timed_set_solver(const char* name, const SolverContext& ctx, double budget, F&& solve) {
  const auto started = std::chrono::steady_clock::now();
  RunReport report;
  report.solver = name;
  report.budget = budget;
  report.final_seeds = solve();
  report.objective_value = ctx.objective(report.final_seeds.nodes());
  report.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return report;
}

}  // namespace detail

struct SolverInfo {
  SolverFn run;
  bool randomized = true;  // deterministic solvers run once per budget
};

inline const std::map<std::string, SolverInfo>& solver_registry() {
  static const std::map<std::string, SolverInfo> registry{
      {"boost-sa",
       {[](const SolverContext& ctx, double budget, const SAConfig& cfg) {
          const auto started = std::chrono::steady_clock::now();
          const auto cs = build_candidates(ctx.graph, ctx.costs, ctx.partition, budget,
                                           {ctx.candidates.alpha, ctx.candidates.beta_percent, ctx.p});
          if (cs.empty()) {
            RunReport empty;
            empty.solver = "boost-sa";
            empty.budget = budget;
            return empty;
          }
          auto report = boost_sa_solve(ctx.graph, ctx.costs, cs, budget, cfg, ctx.objective);
          // Candidate construction is part of the solver's running time.
          report.wall_time_seconds =
              std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
          return report;
        },
        true}},
      {"combination-sa",
       {[](const SolverContext& ctx, double budget, const SAConfig& cfg) {
          return combination_sa_solve(ctx.graph, ctx.costs, ctx.partition, budget, cfg, ctx.objective, ctx.p);
        },
        true}},
      {"celf",
       {[](const SolverContext& ctx, double budget, const SAConfig&) {
          return detail::timed_set_solver("celf", ctx, budget,
                                          [&] { return celf_bim_solve(ctx.graph, ctx.costs, budget, ctx.objective); });
        },
        false}},
      {"max-degree",
       {[](const SolverContext& ctx, double budget, const SAConfig&) {
          return detail::timed_set_solver("max-degree", ctx, budget,
                                          [&] { return max_degree_solve(ctx.graph, ctx.costs, budget); });
        },
        false}},
  };
  return registry;
}

inline const SolverInfo& find_solver(const std::string& name) {
  const auto& registry = solver_registry();
  const auto it = registry.find(name);
  if (it == registry.end()) {
    std::string known;
    for (const auto& [key, info] : registry) known += (known.empty() ? "" : ", ") + key;
    throw Error("unknown solver '" + name + "' (known: " + known + ")");
  }
  return it->second;
}

/// Seed for one (solver, budget, repeat) cell. Keyed by the solver's name and
/// the budget value, so adding solvers or budgets leaves other cells untouched.
inline std::uint64_t cell_seed(std::uint64_t master, const std::string& solver, double budget, std::size_t repeat) {
  return derive_seed(derive_seed(master, stable_hash(solver)), std::bit_cast<std::uint64_t>(budget), repeat);
}

struct CellResult {
  std::string solver;
  double budget = 0.0;
  std::size_t repeat = 0;
  std::size_t seed_count = 0;
  double cost = 0.0;
  double objective = 0.0;
  SpreadEstimate influence;
  double wall_time_seconds = 0.0;
  std::vector<NodeId> seeds;
};

struct SummaryRow {
  std::string solver;
  double budget = 0.0;
  std::size_t runs = 0;
  double mean_influence = 0.0;
  double sd_influence = 0.0;
  double mean_objective = 0.0;
  double mean_seed_count = 0.0;
  double mean_wall_time = 0.0;
};

struct ExperimentResult {
  std::vector<CellResult> cells;  // ordered by (solver, budget, repeat) as configured
  std::vector<SummaryRow> summary;

  const SummaryRow& row(const std::string& solver, double budget) const {
    for (const auto& r : summary) {
      if (r.solver == solver && r.budget == budget) return r;
    }
    throw Error("no summary row for " + solver);
  }
};

namespace detail {

struct CellTask {
  std::string solver;
  std::size_t budget_index = 0;
  std::size_t repeat = 0;
};

template <class F>
void for_each_parallel(std::size_t count, unsigned workers, F&& body) {
  if (workers <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> threads;
  std::mutex error_mutex;
  std::exception_ptr error;
  for (unsigned w = 0; w < std::min<std::size_t>(workers, count); ++w) {
    threads.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  threads.clear();
  if (error) std::rethrow_exception(error);
}

inline std::vector<SummaryRow> summarize(const std::vector<CellResult>& cells) {
  std::vector<SummaryRow> rows;
  for (const auto& c : cells) {
    auto it = std::find_if(rows.begin(), rows.end(),
                           [&](const SummaryRow& r) { return r.solver == c.solver && r.budget == c.budget; });
    if (it == rows.end()) {
      rows.push_back({c.solver, c.budget});
      it = rows.end() - 1;
    }
    ++it->runs;
    it->mean_influence += c.influence.mean;
    it->mean_objective += c.objective;
    it->mean_seed_count += static_cast<double>(c.seed_count);
    it->mean_wall_time += c.wall_time_seconds;
  }
  for (auto& r : rows) {
    const auto n = static_cast<double>(r.runs);
    r.mean_influence /= n;
    r.mean_objective /= n;
    r.mean_seed_count /= n;
    r.mean_wall_time /= n;
    double ss = 0.0;
    for (const auto& c : cells) {
      if (c.solver == r.solver && c.budget == r.budget) ss += std::pow(c.influence.mean - r.mean_influence, 2);
    }
    r.sd_influence = r.runs > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  }
  return rows;
}

inline std::ofstream open_output(const std::filesystem::path& dir, const std::string& name) {
  std::filesystem::create_directories(dir);
  std::ofstream out(dir / name);
  if (!out) throw Error("cannot write " + (dir / name).string());
  out << std::setprecision(10);
  return out;
}

}  // namespace detail

/// Runs every (solver, budget, repeat) cell and evaluates each final seed set
/// with Monte Carlo. `costs` may differ from the graph's default cost model.
inline ExperimentResult run_cells(const DirectedGraph& g, const CostModel& costs, const ExperimentConfig& config) {
  config.validate();
  const auto partition = partition_by_outdegree(g);
  const SolverContext ctx{g, costs, partition, config.p, config.candidates, make_objective(g, config.p, config.objective)};

  std::vector<detail::CellTask> tasks;
  for (const auto& name : config.solvers) {
    const auto& info = find_solver(name);
    const std::size_t runs = info.randomized ? config.repeats : 1;
    for (std::size_t b = 0; b < config.budgets.size(); ++b) {
      for (std::size_t r = 0; r < runs; ++r) tasks.push_back({name, b, r});
    }
  }

  ExperimentResult result;
  result.cells.resize(tasks.size());
  detail::for_each_parallel(tasks.size(), config.workers, [&](std::size_t i) {
    const auto& task = tasks[i];
    const double budget = config.budgets[task.budget_index];
    const auto seed = cell_seed(config.master_seed, task.solver, budget, task.repeat);
    SAConfig cfg = config.sa;
    cfg.rng_seed = seed;
    cfg.workers = 1;
    const auto report = find_solver(task.solver).run(ctx, budget, cfg);
    auto& cell = result.cells[i];
    cell.solver = task.solver;
    cell.budget = budget;
    cell.repeat = task.repeat;
    cell.seed_count = report.final_seeds.size();
    cell.cost = report.final_seeds.total_cost();
    cell.objective = report.objective_value;
    cell.seeds.assign(report.final_seeds.nodes().begin(), report.final_seeds.nodes().end());
    cell.wall_time_seconds = report.wall_time_seconds;
    cell.influence = estimate_spread(g, cell.seeds, {.p = config.p}, config.mc_replications, derive_seed(seed, 0x6d63));
  });
  result.summary = detail::summarize(result.cells);
  return result;
}

inline void write_cells_csv(std::ostream& out, const std::vector<CellResult>& cells) {
  out << "solver,budget,repeat,seeds,cost,objective,influence,std_error\n";
  for (const auto& c : cells) {
    out << c.solver << ',' << c.budget << ',' << c.repeat << ',' << c.seed_count << ',' << c.cost << ','
        << c.objective << ',' << c.influence.mean << ',' << c.influence.std_error << '\n';
  }
}

inline void write_cells_timing_csv(std::ostream& out, const std::vector<CellResult>& cells) {
  out << "solver,budget,repeat,wall_time\n";
  for (const auto& c : cells) out << c.solver << ',' << c.budget << ',' << c.repeat << ',' << c.wall_time_seconds << '\n';
}

inline void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows) {
  out << "solver,budget,runs,mean_influence,sd_influence,mean_objective,mean_seeds\n";
  for (const auto& r : rows) {
    out << r.solver << ',' << r.budget << ',' << r.runs << ',' << r.mean_influence << ',' << r.sd_influence << ','
        << r.mean_objective << ',' << r.mean_seed_count << '\n';
  }
}

inline void write_summary_timing_csv(std::ostream& out, const std::vector<SummaryRow>& rows) {
  out << "solver,budget,mean_wall_time\n";
  for (const auto& r : rows) out << r.solver << ',' << r.budget << ',' << r.mean_wall_time << '\n';
}

/// "influence/seconds" table with one column per solver, one row per budget.
inline void print_summary_table(std::ostream& out, const ExperimentResult& result,
                                const std::vector<std::string>& solvers, const std::vector<double>& budgets) {
  out << std::left << std::setw(10) << "budget";
  for (const auto& s : solvers) out << std::setw(22) << s;
  out << '\n';
  for (double b : budgets) {
    out << std::setw(10) << b;
    for (const auto& s : solvers) {
      const auto& r = result.row(s, b);
      std::ostringstream cell;
      cell << std::fixed << std::setprecision(1) << r.mean_influence << '/' << std::setprecision(3)
           << r.mean_wall_time;
      out << std::setw(22) << cell.str();
    }
    out << '\n';
  }
  out << std::right;
}

inline void write_experiment_files(const std::filesystem::path& dir, const std::string& stem,
                                   const ExperimentResult& result) {
  auto raw = detail::open_output(dir, stem + "_raw.csv");
  write_cells_csv(raw, result.cells);
  auto raw_time = detail::open_output(dir, stem + "_raw_timing.csv");
  write_cells_timing_csv(raw_time, result.cells);
  auto summary = detail::open_output(dir, stem + "_summary.csv");
  write_summary_csv(summary, result.summary);
  auto summary_time = detail::open_output(dir, stem + "_summary_timing.csv");
  write_summary_timing_csv(summary_time, result.summary);
}

inline CostModel experiment_costs(const DirectedGraph& g, const ExperimentConfig& config) {
  if (!config.cost_sensitivity) return CostModel(g, config.p);
  const auto& cs = *config.cost_sensitivity;
  if (!(cs.fraction >= 0.0 && cs.fraction <= 1.0)) throw Error("override fraction must lie in [0, 1]");
  if (!(cs.alt_p >= 0.0)) throw Error("override probability must be non-negative");
  return CostModel::with_random_overrides(g, config.p, cs.fraction, cs.alt_p,
                                          derive_seed(config.master_seed, stable_hash("cost-overrides")));
}

/// Budget sweep over the configured solvers.
inline ExperimentResult run_experiment(const ExperimentConfig& config) {
  const auto g = load_graph(config);
  const auto costs = experiment_costs(g, config);
  auto result = run_cells(g, costs, config);
  if (!config.output_dir.empty()) write_experiment_files(config.output_dir, "experiment", result);
  return result;
}

struct InitComparisonRow {
  double budget = 0.0;
  double random_influence = 0.0;
  double unified_influence = 0.0;
  double random_objective = 0.0;
  double unified_objective = 0.0;
};

/// Boost SA with ensemble versus unified initialization. Both variants of a
/// cell share the same random stream.
inline std::vector<InitComparisonRow> run_init_comparison(const ExperimentConfig& config) {
  const auto g = load_graph(config);
  const auto costs = experiment_costs(g, config);
  auto random_cfg = config;
  random_cfg.solvers = {"boost-sa"};
  random_cfg.sa.init = InitStrategy::RandomEnsemble;
  auto unified_cfg = random_cfg;
  unified_cfg.sa.init = InitStrategy::Unified;
  const auto random_result = run_cells(g, costs, random_cfg);
  const auto unified_result = run_cells(g, costs, unified_cfg);

  std::vector<InitComparisonRow> rows;
  for (double b : config.budgets) {
    const auto& r = random_result.row("boost-sa", b);
    const auto& u = unified_result.row("boost-sa", b);
    rows.push_back({b, r.mean_influence, u.mean_influence, r.mean_objective, u.mean_objective});
  }
  if (!config.output_dir.empty()) {
    auto out = detail::open_output(config.output_dir, "init_compare.csv");
    out << "budget,random_influence,unified_influence,random_objective,unified_objective\n";
    for (const auto& r : rows) {
      out << r.budget << ',' << r.random_influence << ',' << r.unified_influence << ',' << r.random_objective << ','
          << r.unified_objective << '\n';
    }
    auto timing = detail::open_output(config.output_dir, "init_compare_timing.csv");
    timing << "budget,random_wall_time,unified_wall_time\n";
    for (double b : config.budgets) {
      timing << b << ',' << random_result.row("boost-sa", b).mean_wall_time << ','
             << unified_result.row("boost-sa", b).mean_wall_time << '\n';
    }
  }
  return rows;
}

/// The configured solvers under a cost model where a seeded random fraction
/// of nodes uses a different cost probability.
inline ExperimentResult run_cost_sensitivity(const ExperimentConfig& config) {
  auto cfg = config;
  if (!cfg.cost_sensitivity) cfg.cost_sensitivity = CostSensitivity{};
  if (!(cfg.cost_sensitivity->fraction > 0.0 && cfg.cost_sensitivity->fraction < 1.0)) {
    throw Error("cost-sensitivity fraction must lie in (0, 1)");
  }
  if (!(cfg.cost_sensitivity->alt_p > 0.0)) throw Error("cost-sensitivity probability must be positive");
  const auto g = load_graph(cfg);
  const auto costs = experiment_costs(g, cfg);
  auto result = run_cells(g, costs, cfg);
  if (!cfg.output_dir.empty()) write_experiment_files(cfg.output_dir, "cost_sensitivity", result);
  return result;
}

struct BetaSweepRow {
  double beta = 0.0;
  double budget = 0.0;
  double mean_influence = 0.0;
  double mean_objective = 0.0;
  double mean_wall_time = 0.0;
};

/// Boost SA with the candidate set rebuilt for each beta.
inline std::vector<BetaSweepRow> run_beta_sweep(const ExperimentConfig& config, const std::vector<double>& betas) {
  if (betas.empty()) throw Error("beta sweep is empty");
  const auto g = load_graph(config);
  const auto costs = experiment_costs(g, config);
  std::vector<BetaSweepRow> rows;
  for (double beta : betas) {
    auto cfg = config;
    cfg.solvers = {"boost-sa"};
    cfg.candidates.beta_percent = beta;
    const auto result = run_cells(g, costs, cfg);
    for (double b : config.budgets) {
      const auto& r = result.row("boost-sa", b);
      rows.push_back({beta, b, r.mean_influence, r.mean_objective, r.mean_wall_time});
    }
  }
  if (!config.output_dir.empty()) {
    auto out = detail::open_output(config.output_dir, "beta_sweep.csv");
    out << "beta,budget,mean_influence,mean_objective\n";
    for (const auto& r : rows) out << r.beta << ',' << r.budget << ',' << r.mean_influence << ',' << r.mean_objective << '\n';
    auto timing = detail::open_output(config.output_dir, "beta_sweep_timing.csv");
    timing << "beta,budget,mean_wall_time\n";
    for (const auto& r : rows) timing << r.beta << ',' << r.budget << ',' << r.mean_wall_time << '\n';
  }
  return rows;
}

/// Table of |C|, |T1 u T2| and |T3| over a budget sweep.
inline std::vector<ReachabilityRow> run_candidate_report(const ExperimentConfig& config) {
  const auto g = load_graph(config);
  const auto costs = experiment_costs(g, config);
  const auto partition = partition_by_outdegree(g);
  auto opt = config.candidates;
  opt.p = config.p;
  const auto rows = t_reachability_report(g, costs, partition, config.budgets, opt);
  if (!config.output_dir.empty()) {
    auto out = detail::open_output(config.output_dir, "candidates.csv");
    write_reachability_csv(out, rows);
  }
  return rows;
}

}  // namespace bim

#endif  // BIM_HARNESS_HPP
