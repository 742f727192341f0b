// bim: budgeted influence maximization experiments from the command line.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "bim/bim.hpp"

namespace {

namespace fs = std::filesystem;
using namespace bim;

struct Options {
  std::string graph;
  bool symmetrize = false;
  PowerLawSpec synthetic{};
  double budget = 100.0;
  std::vector<double> budgets{100, 200, 300, 400, 500, 600};
  std::vector<std::string> solvers{"boost-sa", "combination-sa"};
  std::size_t q = 1000;
  std::size_t gp = 3;
  std::size_t k = 10;
  std::size_t num = 10;
  double t0 = 1e6;
  double tf = 1e5;
  double delta_t = 1e3;
  double alpha = 1.5;
  double beta = 60.0;
  std::vector<double> betas{20, 30, 40, 50, 60, 70, 80};
  double p = 0.1;
  std::string objective = "sigma2";
  std::size_t mc_reps = 10000;
  std::size_t repeats = 30;
  std::uint64_t seed = 1;
  unsigned workers = 1;
  double fraction = 0.02;
  double alt_p = 0.05;
  std::string out;
};

void add_graph_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--graph", o.graph, "Edge list file (default: synthetic power-law graph)");
  cmd->add_flag("--symmetrize,!--directed", o.symmetrize, "Treat edges as undirected (default: directed)");
  cmd->add_option("--nodes", o.synthetic.nodes, "Synthetic graph: node count")->capture_default_str();
  cmd->add_option("--avg-degree", o.synthetic.avg_degree, "Synthetic graph: average degree")->capture_default_str();
  cmd->add_option("--max-degree", o.synthetic.max_degree, "Synthetic graph: maximum degree")->capture_default_str();
  cmd->add_option("--exponent", o.synthetic.exponent, "Synthetic graph: power-law exponent")->capture_default_str();
  cmd->add_option("--graph-seed", o.synthetic.seed, "Synthetic graph: generator seed")->capture_default_str();
  cmd->add_option("--p", o.p, "Propagation probability, also used by the cost model")->capture_default_str();
}

void add_sa_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--q", o.q, "Inner Metropolis steps")->capture_default_str();
  cmd->add_option("--gp", o.gp, "Voting groups per outer iteration")->capture_default_str();
  cmd->add_option("--k", o.k, "Initial random ensembles")->capture_default_str();
  cmd->add_option("--num", o.num, "Interrupt patience")->capture_default_str();
  cmd->add_option("--t0", o.t0, "Initial temperature")->capture_default_str();
  cmd->add_option("--tf", o.tf, "Final temperature")->capture_default_str();
  cmd->add_option("--delta-t", o.delta_t, "Temperature drop per outer iteration")->capture_default_str();
  cmd->add_option("--alpha", o.alpha, "C1 budget multiplier")->capture_default_str();
  cmd->add_option("--beta", o.beta, "C2 rank cutoff, percent of H")->capture_default_str();
  cmd->add_option("--objective", o.objective, "Set estimator inside the solvers")
      ->check(CLI::IsMember({"sigma2", "edv"}))
      ->capture_default_str();
  cmd->add_option("--seed", o.seed, "Master random seed")->capture_default_str();
}

void add_experiment_options(CLI::App* cmd, Options& o, bool with_solvers) {
  cmd->add_option("--budgets", o.budgets, "Budget sweep")->delimiter(',')->capture_default_str();
  if (with_solvers) {
    cmd->add_option("--solver", o.solvers, "Solvers: boost-sa, combination-sa, celf, max-degree")
        ->delimiter(',')
        ->capture_default_str();
  }
  cmd->add_option("--mc-reps", o.mc_reps, "Monte-Carlo replications per evaluation")->capture_default_str();
  cmd->add_option("--repeats", o.repeats, "Runs per randomized cell")->capture_default_str();
  cmd->add_option("--workers", o.workers, "Cells evaluated concurrently")->capture_default_str();
  cmd->add_option("--out", o.out, "Output directory for CSV files");
}

SAConfig sa_config(const Options& o) {
  SAConfig cfg;
  cfg.t0 = o.t0;
  cfg.tf = o.tf;
  cfg.delta_t = o.delta_t;
  cfg.q = o.q;
  cfg.gp = o.gp;
  cfg.k = o.k;
  cfg.num = o.num;
  cfg.rng_seed = o.seed;
  return cfg;
}

ExperimentConfig experiment_config(const Options& o) {
  ExperimentConfig cfg;
  cfg.dataset = o.graph;
  cfg.symmetrize = o.symmetrize;
  cfg.synthetic = o.synthetic;
  cfg.solvers = o.solvers;
  cfg.budgets = o.budgets;
  cfg.sa = sa_config(o);
  cfg.p = o.p;
  cfg.candidates = {.alpha = o.alpha, .beta_percent = o.beta, .p = o.p};
  cfg.objective = o.objective == "edv" ? ObjectiveKind::Edv : ObjectiveKind::Sigma2;
  cfg.mc_replications = o.mc_reps;
  cfg.repeats = o.repeats;
  cfg.master_seed = o.seed;
  cfg.workers = o.workers;
  cfg.output_dir = o.out;
  return cfg;
}

void print_graph_line(const DirectedGraph& g) {
  std::cout << "graph: " << g.node_count() << " nodes, " << g.edge_count() << " edges, average degree "
            << g.average_degree() << "\n";
}

int cmd_solve(const Options& o) {
  const auto cfg = experiment_config(o);
  const auto g = load_graph(cfg);
  print_graph_line(g);
  const CostModel cm(g, o.p);
  const auto part = partition_by_outdegree(g);
  const SolverContext ctx{g, cm, part, o.p, cfg.candidates, make_objective(g, o.p, cfg.objective)};
  if (o.solvers.size() != 1) throw Error("solve takes exactly one --solver");
  auto report = find_solver(o.solvers.front()).run(ctx, o.budget, cfg.sa);
  report.mc = estimate_spread(g, report.final_seeds.nodes(), {.p = o.p}, o.mc_reps, derive_seed(o.seed, 0x6d63),
                              std::max(1u, o.workers));
  write_summary(std::cout, report);
  if (!o.out.empty()) {
    fs::create_directories(o.out);
    std::ofstream trajectory(fs::path(o.out) / "trajectory.csv");
    write_trajectory_csv(trajectory, report);
    std::ofstream summary(fs::path(o.out) / "summary.json");
    write_summary(summary, report);
  }
  return 0;
}

int cmd_bench(const Options& o) {
  const auto cfg = experiment_config(o);
  const auto result = run_experiment(cfg);
  std::cout << "mean influence / mean seconds over " << o.repeats << " runs\n";
  print_summary_table(std::cout, result, cfg.solvers, cfg.budgets);
  return 0;
}

int cmd_candidates(const Options& o) {
  const auto rows = run_candidate_report(experiment_config(o));
  write_reachability_csv(std::cout, rows);
  return 0;
}

int cmd_init_compare(const Options& o) {
  const auto rows = run_init_comparison(experiment_config(o));
  std::cout << "budget,random_influence,unified_influence\n";
  for (const auto& r : rows) std::cout << r.budget << ',' << r.random_influence << ',' << r.unified_influence << '\n';
  return 0;
}

int cmd_cost_sens(const Options& o) {
  auto cfg = experiment_config(o);
  cfg.cost_sensitivity = CostSensitivity{o.fraction, o.alt_p};
  const auto result = run_cost_sensitivity(cfg);
  std::cout << "cost probability " << o.alt_p << " on " << o.fraction * 100.0 << "% of nodes\n";
  print_summary_table(std::cout, result, cfg.solvers, cfg.budgets);
  return 0;
}

int cmd_beta_sweep(const Options& o) {
  const auto rows = run_beta_sweep(experiment_config(o), o.betas);
  std::cout << "beta,budget,mean_influence,mean_wall_time\n";
  for (const auto& r : rows) std::cout << r.beta << ',' << r.budget << ',' << r.mean_influence << ',' << r.mean_wall_time << '\n';
  return 0;
}

int cmd_gen(const Options& o) {
  const auto g = generate_powerlaw_graph(o.synthetic);
  if (o.out.empty()) {
    write_edge_list(std::cout, g);
  } else {
    save_edge_list(o.out, g);
    print_graph_line(g);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Budgeted influence maximization under the independent cascade model"};
  app.require_subcommand(1);
  Options o;

  auto* solve = app.add_subcommand("solve", "Run one solver at one budget");
  add_graph_options(solve, o);
  add_sa_options(solve, o);
  solve->add_option("--budget", o.budget, "Budget")->capture_default_str();
  solve->add_option("--solver", o.solvers, "Solver: boost-sa, combination-sa, celf, max-degree")->expected(1);
  solve->add_option("--mc-reps", o.mc_reps, "Monte-Carlo replications")->capture_default_str();
  solve->add_option("--workers", o.workers, "Monte-Carlo worker threads")->capture_default_str();
  solve->add_option("--out", o.out, "Directory for trajectory.csv and summary.json");

  auto* bench = app.add_subcommand("bench", "Budget sweep over several solvers");
  add_graph_options(bench, o);
  add_sa_options(bench, o);
  add_experiment_options(bench, o, true);

  auto* candidates = app.add_subcommand("candidates", "Candidate set size and T reachability per budget");
  add_graph_options(candidates, o);
  add_sa_options(candidates, o);
  candidates->add_option("--budgets", o.budgets, "Budget sweep")->delimiter(',')->capture_default_str();
  candidates->add_option("--out", o.out, "Output directory for candidates.csv");

  auto* init = app.add_subcommand("init-compare", "Random-ensemble versus unified initialization");
  add_graph_options(init, o);
  add_sa_options(init, o);
  add_experiment_options(init, o, false);

  auto* cost = app.add_subcommand("cost-sens", "Solvers under randomly perturbed node costs");
  add_graph_options(cost, o);
  add_sa_options(cost, o);
  add_experiment_options(cost, o, true);
  cost->add_option("--fraction", o.fraction, "Fraction of nodes with a different cost probability")
      ->capture_default_str();
  cost->add_option("--alt-p", o.alt_p, "Cost probability for those nodes")->capture_default_str();

  auto* beta = app.add_subcommand("beta-sweep", "Boost SA across candidate cutoffs");
  add_graph_options(beta, o);
  add_sa_options(beta, o);
  add_experiment_options(beta, o, false);
  beta->add_option("--betas", o.betas, "Cutoffs to try, percent")->delimiter(',')->capture_default_str();

  auto* gen = app.add_subcommand("gen", "Write a synthetic power-law graph");
  gen->add_option("--nodes", o.synthetic.nodes, "Node count")->capture_default_str();
  gen->add_option("--avg-degree", o.synthetic.avg_degree, "Average degree")->capture_default_str();
  gen->add_option("--max-degree", o.synthetic.max_degree, "Maximum degree")->capture_default_str();
  gen->add_option("--exponent", o.synthetic.exponent, "Power-law exponent")->capture_default_str();
  gen->add_option("--seed", o.synthetic.seed, "Generator seed")->capture_default_str();
  gen->add_option("--out", o.out, "Output edge list (default: stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve) return cmd_solve(o);
    if (*bench) return cmd_bench(o);
    if (*candidates) return cmd_candidates(o);
    if (*init) return cmd_init_compare(o);
    if (*cost) return cmd_cost_sens(o);
    if (*beta) return cmd_beta_sweep(o);
    if (*gen) return cmd_gen(o);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
