#ifndef BIM_BASELINES_HPP
#define BIM_BASELINES_HPP

#include <algorithm>
#include <chrono>
#include <queue>
#include <vector>

#include "bim/boost_sa.hpp"
#include "bim/diffusion.hpp"
#include "bim/graph.hpp"
#include "bim/indicators.hpp"
#include "bim/report.hpp"
#include "bim/seed_set.hpp"

namespace bim {

// ---------------------------------------------------------------------------
// MaxDegree

inline SeedSet max_degree_solve(const DirectedGraph& g, const CostModel& cm, double budget) {
  if (!(budget > 0.0)) throw Error("budget must be positive");
  SeedSet s;
  for (NodeId v : nodes_by_out_degree(g)) {
    if (s.total_cost() + cm.cost(v) <= budget) s.insert(v, cm);
  }
  return s;
}

// ---------------------------------------------------------------------------
// Budgeted CELF

/// Spread estimated by Monte Carlo with a fixed stream, so repeated
/// evaluations of nested sets share random numbers.
inline SetObjective make_mc_objective(const DirectedGraph& g, ICParams params, std::size_t replications,
                                      std::uint64_t seed, unsigned workers = 1) {
  return [&g, params, replications, seed, workers](std::span<const NodeId> s) {
    return estimate_spread(g, s, params, replications, seed, workers).mean;
  };
}

struct CelfStats {
  std::size_t evaluations = 0;
  std::size_t recomputations = 0;
  // Largest amount by which a recomputed gain exceeded its stale value;
  // zero (up to rounding) for a submodular estimator.
  double max_gain_increase = 0.0;
};

/// Lazy greedy on marginal gain per unit cost. Ties go to the lower node id.
inline SeedSet celf_bim_solve(const DirectedGraph& g, const CostModel& cm, double budget,
                              const SetObjective& objective, CelfStats* stats = nullptr) {
  if (!(budget > 0.0)) throw Error("budget must be positive");
  CelfStats local;
  CelfStats& st = stats ? *stats : local;

  struct Entry {
    double ratio;
    double gain;
    NodeId node;
    std::size_t round;  // size of the seed set the gain was computed against
  };
  auto worse = [](const Entry& a, const Entry& b) {
    if (a.ratio != b.ratio) return a.ratio < b.ratio;
    return a.node > b.node;
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(worse)> heap(worse);

  SeedSet s;
  double current = objective(s.nodes());
  ++st.evaluations;
  std::vector<NodeId> probe;
  auto gain_of = [&](NodeId v) {
    probe.assign(s.nodes().begin(), s.nodes().end());
    probe.insert(std::lower_bound(probe.begin(), probe.end(), v), v);
    ++st.evaluations;
    return objective(probe) - current;
  };

  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (cm.cost(v) > budget) continue;
    const double gain = gain_of(v);
    heap.push({gain / cm.cost(v), gain, v, 0});
  }

  while (!heap.empty()) {
    Entry top = heap.top();
    heap.pop();
    // Remaining budget only shrinks, so an unaffordable node stays unaffordable.
    if (s.total_cost() + cm.cost(top.node) > budget) continue;
    if (top.round == s.size()) {
      s.insert(top.node, cm);
      current = objective(s.nodes());
      ++st.evaluations;
      continue;
    }
    const double gain = gain_of(top.node);
    ++st.recomputations;
    st.max_gain_increase = std::max(st.max_gain_increase, gain - top.gain);
    heap.push({gain / cm.cost(top.node), gain, top.node, s.size()});
  }
  return s;
}

// ---------------------------------------------------------------------------
// Combination SA (billboard / handbill)

struct BillboardHandbill {
  SeedSet billboard;  // from T by sigma2 desc under the budget
  SeedSet handbill;   // from H by ce2 desc under the budget
  std::vector<NodeId> billboard_order;
};

inline BillboardHandbill billboard_handbill(const DirectedGraph& g, const CostModel& cm,
                                            const DegreePartition& partition, double budget, double p) {
  BillboardHandbill bh;
  std::vector<std::pair<double, NodeId>> top;
  for (NodeId v : partition.top) top.emplace_back(sigma2_node(g, v, p), v);
  std::vector<std::pair<double, NodeId>> bottom;
  for (NodeId v : partition.bottom) bottom.emplace_back(cedv_node(g, cm, v, p), v);
  auto by_score = [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  };
  std::sort(top.begin(), top.end(), by_score);
  std::sort(bottom.begin(), bottom.end(), by_score);
  for (const auto& [score, v] : top) {
    if (bh.billboard.total_cost() + cm.cost(v) <= budget) {
      bh.billboard.insert(v, cm);
      bh.billboard_order.push_back(v);
    }
  }
  for (const auto& [score, v] : bottom) {
    if (bh.handbill.total_cost() + cm.cost(v) <= budget) bh.handbill.insert(v, cm);
  }
  return bh;
}

/// Starts from the billboard set and, for each billboard node in turn, tries
/// to swap it for a budget-feasible refill from the handbill set. An accepted
/// swap is followed by q random swaps. Temperature drops by delta_t per
/// billboard node (floored at tf). Returns the best set seen.
inline RunReport combination_sa_solve(const DirectedGraph& g, const CostModel& cm, const DegreePartition& partition,
                                      double budget, const SAConfig& cfg, const SetObjective& objective,
                                      double p = 0.1) {
  cfg.validate();
  if (!(budget > 0.0)) throw Error("budget must be positive");
  const auto started = std::chrono::steady_clock::now();
  RunReport report;
  report.solver = "combination-sa";
  report.budget = budget;

  const auto bh = billboard_handbill(g, cm, partition, budget, p);
  const auto handbill = bh.handbill.nodes();
  detail::Counters counters;

  SeedSet current = bh.billboard;
  double value = objective(current.nodes());
  ++counters.calls;
  SeedSet best = current;
  double best_value = value;

  auto try_swap = [&](NodeId removed, double temperature, Rng& rng) {
    SeedSet next = current;
    next.erase(removed, cm);
    if (detail::random_fill(next, handbill, cm, budget, rng, removed) == 0) return false;
    const double next_value = objective(next.nodes());
    ++counters.calls;
    const double delta = next_value - value;
    if (delta > 0.0) ++counters.improving;
    if (!metropolis_accept(delta, temperature, rng)) return false;
    current = std::move(next);
    value = next_value;
    if (value > best_value) {
      best = current;
      best_value = value;
    }
    return true;
  };

  if (!handbill.empty()) {
    for (std::size_t i = 0; i < bh.billboard_order.size(); ++i) {
      const NodeId u = bh.billboard_order[i];
      const double temperature = std::max(cfg.temperature(i), cfg.tf);
      Rng rng(derive_seed(cfg.rng_seed, 3, i));
      if (current.contains(u) && try_swap(u, temperature, rng)) {
        for (std::size_t step = 0; step < cfg.q; ++step) {
          if (current.empty()) break;
          try_swap(current.nodes()[uniform_index(rng, current.size())], temperature, rng);
        }
      }
      report.trajectory.push_back({i + 1, best_value});
    }
  }

  report.final_seeds = std::move(best);
  report.objective_value = best_value;
  report.estimator_calls = counters.calls;
  report.improving_moves = counters.improving;
  report.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return report;
}

}  // namespace bim

#endif  // BIM_BASELINES_HPP
