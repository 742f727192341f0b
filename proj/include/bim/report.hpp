#ifndef BIM_REPORT_HPP
#define BIM_REPORT_HPP

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "bim/diffusion.hpp"
#include "bim/seed_set.hpp"

namespace bim {

struct TrajectoryPoint {
  std::size_t iteration = 0;
  double max_influence = 0.0;
};

/// Outcome of one solver run. `mc` is filled in by whoever evaluates the
/// final seeds with Monte Carlo; solvers leave it empty.
struct RunReport {
  std::string solver;
  double budget = 0.0;
  SeedSet final_seeds;
  double objective_value = 0.0;
  std::vector<TrajectoryPoint> trajectory;
  std::optional<std::size_t> interrupted_at;
  double wall_time_seconds = 0.0;
  std::size_t estimator_calls = 0;
  std::size_t improving_moves = 0;
  std::optional<SpreadEstimate> mc;
};

inline void write_trajectory_csv(std::ostream& out, const RunReport& report) {
  out << "iteration,max_influence\n";
  const auto old_precision = out.precision(17);
  for (const auto& pt : report.trajectory) out << pt.iteration << ',' << pt.max_influence << '\n';
  out.precision(old_precision);
}

inline nlohmann::json summary_json(const RunReport& report) {
  nlohmann::json j;
  j["solver"] = report.solver;
  j["budget"] = report.budget;
  j["final_cost"] = report.final_seeds.total_cost();
  j["seeds"] = std::vector<NodeId>(report.final_seeds.nodes().begin(), report.final_seeds.nodes().end());
  j["objective"] = report.objective_value;
  j["mc_influence"] = report.mc ? nlohmann::json(report.mc->mean) : nlohmann::json(nullptr);
  j["mc_std_error"] = report.mc ? nlohmann::json(report.mc->std_error) : nlohmann::json(nullptr);
  j["wall_time"] = report.wall_time_seconds;
  j["interrupted_at"] = report.interrupted_at ? nlohmann::json(*report.interrupted_at) : nlohmann::json(nullptr);
  j["outer_iterations"] = report.trajectory.size();
  j["estimator_calls"] = report.estimator_calls;
  return j;
}

inline void write_summary(std::ostream& out, const RunReport& report) { out << summary_json(report).dump(2) << '\n'; }

}  // namespace bim

#endif  // BIM_REPORT_HPP
