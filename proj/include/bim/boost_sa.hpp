#ifndef BIM_BOOST_SA_HPP
#define BIM_BOOST_SA_HPP

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <map>
#include <span>
#include <thread>
#include <utility>
#include <vector>

#include "bim/candidate.hpp"
#include "bim/indicators.hpp"
#include "bim/random.hpp"
#include "bim/report.hpp"
#include "bim/seed_set.hpp"

namespace bim {

enum class InitStrategy {
  RandomEnsemble,  // k annealed random sets, consolidated by vote
  Unified,         // deterministic ce2-rank fill of the candidates
};

struct SAConfig {
  double t0 = 1e6;
  double tf = 1e5;
  double delta_t = 1e3;
  std::size_t q = 1000;
  std::size_t gp = 3;
  std::size_t k = 10;
  std::size_t num = 10;
  std::uint64_t rng_seed = 1;
  InitStrategy init = InitStrategy::RandomEnsemble;
  unsigned workers = 1;  // voting groups run concurrently when > 1

  void validate() const {
    if (!(t0 > tf && tf > 0.0)) throw Error("temperatures must satisfy t0 > tf > 0");
    if (!(delta_t > 0.0)) throw Error("temperature drop must be positive");
    if (q < 1 || gp < 1 || k < 1 || num < 1) throw Error("q, gp, k and num must be at least 1");
  }

  /// Number of temperatures t0, t0 - dT, ... strictly above tf.
  std::size_t outer_iterations() const {
    std::size_t n = 0;
    while (temperature(n) > tf) ++n;
    return n;
  }

  double temperature(std::size_t iteration) const { return t0 - static_cast<double>(iteration) * delta_t; }
};

/// How often each candidate appeared in the sets being consolidated.
class VoteTally {
 public:
  void record(const SeedSet& s) {
    for (NodeId v : s.nodes()) ++counts_[v];
  }
  void merge(const VoteTally& other) {
    for (const auto& [v, c] : other.counts_) counts_[v] += c;
  }
  std::size_t count(NodeId v) const {
    const auto it = counts_.find(v);
    return it == counts_.end() ? 0 : it->second;
  }
  void set(NodeId v, std::size_t c) { counts_[v] = c; }
  bool empty() const noexcept { return counts_.empty(); }
  const std::map<NodeId, std::size_t>& counts() const noexcept { return counts_; }

 private:
  std::map<NodeId, std::size_t> counts_;
};

/// Accept an improvement always; otherwise accept with probability exp(delta / T).
inline bool metropolis_accept(double delta, double temperature, Rng& rng) {
  if (delta > 0.0) return true;
  return std::exp(delta / temperature) > uniform01(rng);
}

namespace detail {

// Adds nodes of `pool` in uniformly random order whenever they fit the
// remaining budget. Equivalent to repeatedly drawing a random fitting node,
// since a node that does not fit now never fits later.
inline std::size_t random_fill(SeedSet& s, std::span<const NodeId> pool, const CostModel& cm, double budget,
                               Rng& rng, NodeId excluded = static_cast<NodeId>(-1)) {
  std::vector<NodeId> order(pool.begin(), pool.end());
  std::shuffle(order.begin(), order.end(), rng);
  std::size_t added = 0;
  for (NodeId v : order) {
    if (v == excluded || s.contains(v)) continue;
    if (s.total_cost() + cm.cost(v) <= budget) {
      s.insert(v, cm);
      ++added;
    }
  }
  return added;
}

inline SeedSet neighbor_of(const SeedSet& s, std::span<const NodeId> pool, const CostModel& cm, double budget,
                           Rng& rng) {
  if (s.empty()) return s;
  SeedSet next = s;
  const NodeId removed = s.nodes()[uniform_index(rng, s.size())];
  next.erase(removed, cm);
  if (random_fill(next, pool, cm, budget, rng, removed) == 0) next.insert(removed, cm);
  return next;
}

struct Counters {
  std::atomic<std::size_t> calls{0};
  std::atomic<std::size_t> improving{0};
};

// q Metropolis steps at a fixed temperature, starting from (s, value).
inline void anneal_at(SeedSet& s, double& value, std::span<const NodeId> pool, const CostModel& cm, double budget,
                      double temperature, std::size_t steps, const SetObjective& objective, Rng& rng,
                      Counters& counters) {
  for (std::size_t step = 0; step < steps; ++step) {
    SeedSet next = neighbor_of(s, pool, cm, budget, rng);
    const double next_value = objective(next.nodes());
    ++counters.calls;
    const double delta = next_value - value;
    if (delta > 0.0) ++counters.improving;
    if (metropolis_accept(delta, temperature, rng)) {
      s = std::move(next);
      value = next_value;
    }
  }
}

// Streams: 1 = initial ensembles, 2 = voting groups.
inline Rng ensemble_rng(std::uint64_t seed, std::size_t i) { return Rng(derive_seed(seed, 1, i)); }
inline Rng group_rng(std::uint64_t seed, std::size_t outer, std::size_t group) {
  return Rng(derive_seed(derive_seed(seed, 2), outer, group));
}

}  // namespace detail

/// Random budget-feasible subset of the candidates, filled until nothing fits.
inline SeedSet random_seed_set(const CandidateSet& cs, const CostModel& cm, double budget, Rng& rng) {
  if (!(budget > 0.0)) throw Error("budget must be positive");
  SeedSet s;
  detail::random_fill(s, cs.nodes(), cm, budget, rng);
  return s;
}

/// Drops one random member of `s` and refills from the other candidates under
/// the budget. When nothing can take its place the removed node is restored.
inline SeedSet neighbor_set(const SeedSet& s, const CandidateSet& cs, const CostModel& cm, double budget, Rng& rng) {
  return detail::neighbor_of(s, cs.nodes(), cm, budget, rng);
}

/// Fills the budget with tallied nodes in order (votes desc, ce2 desc, id asc).
/// Nodes without votes are not considered.
inline SeedSet rank_fill(const VoteTally& tally, const CandidateSet& cs, const CostModel& cm, double budget) {
  std::vector<std::pair<NodeId, std::size_t>> ranked;
  for (const auto& [v, c] : tally.counts()) {
    if (c > 0) ranked.emplace_back(v, c);
  }
  std::sort(ranked.begin(), ranked.end(), [&](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    if (cs.ce[a.first] != cs.ce[b.first]) return cs.ce[a.first] > cs.ce[b.first];
    return a.first < b.first;
  });
  SeedSet s;
  for (const auto& [v, c] : ranked) {
    if (s.total_cost() + cm.cost(v) <= budget) s.insert(v, cm);
  }
  return s;
}

/// Deterministic initial set: candidates by ce2 rank under the budget.
inline SeedSet unified_seed_set(const CandidateSet& cs, const CostModel& cm, double budget) {
  SeedSet s;
  for (NodeId v : cs.by_ce()) {
    if (s.total_cost() + cm.cost(v) <= budget) s.insert(v, cm);
  }
  return s;
}

/// Ensemble initialization: k random sets, each annealed for q steps at t0,
/// consolidated by vote.
inline SeedSet sa_initialize(const CandidateSet& cs, const CostModel& cm, double budget, const SAConfig& cfg,
                             const SetObjective& objective, std::size_t* estimator_calls = nullptr) {
  // q = 0 is allowed here: the ensembles are then just random sets.
  auto checked = cfg;
  checked.q = std::max<std::size_t>(cfg.q, 1);
  checked.validate();
  const auto pool = cs.nodes();
  detail::Counters counters;
  VoteTally tally;
  for (std::size_t i = 0; i < cfg.k; ++i) {
    auto rng = detail::ensemble_rng(cfg.rng_seed, i);
    SeedSet s;
    detail::random_fill(s, pool, cm, budget, rng);
    double value = objective(s.nodes());
    ++counters.calls;
    detail::anneal_at(s, value, pool, cm, budget, cfg.t0, cfg.q, objective, rng, counters);
    tally.record(s);
  }
  if (estimator_calls) *estimator_calls += counters.calls;
  return rank_fill(tally, cs, cm, budget);
}

struct VoteResult {
  SeedSet seeds;
  double max_influence = 0.0;
};

/// Consolidates the tally; the voted set replaces the previous one only if it
/// scores strictly higher.
inline VoteResult vote_update(const VoteTally& tally, const SeedSet& previous, const CandidateSet& cs,
                              const CostModel& cm, double budget, const SetObjective& objective) {
  const double previous_value = objective(previous.nodes());
  if (tally.empty()) return {previous, previous_value};
  SeedSet voted = rank_fill(tally, cs, cm, budget);
  const double voted_value = objective(voted.nodes());
  if (voted_value - previous_value > 0.0) return {std::move(voted), voted_value};
  return {previous, previous_value};
}

/// Adaptive interrupt: the latest value repeats the previous `num` values.
inline bool plateau_reached(std::span<const TrajectoryPoint> trajectory, std::size_t num) {
  if (trajectory.size() < num + 1) return false;
  const double latest = trajectory.back().max_influence;
  return std::all_of(trajectory.end() - static_cast<std::ptrdiff_t>(num + 1), trajectory.end(),
                     [&](const TrajectoryPoint& pt) { return pt.max_influence == latest; });
}

inline RunReport boost_sa_solve(const DirectedGraph& g, const CostModel& cm, const CandidateSet& cs, double budget,
                                const SAConfig& cfg, const SetObjective& objective) {
  cfg.validate();
  if (!(budget > 0.0)) throw Error("budget must be positive");
  if (cs.empty()) throw Error("candidate set is empty");
  if (cs.ce.size() != g.node_count() || cm.size() != g.node_count()) {
    throw Error("candidate set or cost model does not belong to this graph");
  }
  const auto started = std::chrono::steady_clock::now();
  const auto pool = cs.nodes();

  RunReport report;
  report.solver = "boost-sa";
  report.budget = budget;

  SeedSet current = cfg.init == InitStrategy::Unified
                        ? unified_seed_set(cs, cm, budget)
                        : sa_initialize(cs, cm, budget, cfg, objective, &report.estimator_calls);
  double current_value = objective(current.nodes());
  detail::Counters counters;
  ++counters.calls;

  const std::size_t outer = cfg.outer_iterations();
  for (std::size_t it = 0; it < outer; ++it) {
    const double temperature = cfg.temperature(it);
    std::vector<SeedSet> finals(cfg.gp, current);
    auto run_group = [&](std::size_t grp) {
      auto rng = detail::group_rng(cfg.rng_seed, it, grp);
      double value = current_value;
      detail::anneal_at(finals[grp], value, pool, cm, budget, temperature, cfg.q, objective, rng, counters);
    };
    if (cfg.workers > 1 && cfg.gp > 1) {
      std::vector<std::jthread> pool_threads;
      for (std::size_t grp = 0; grp < cfg.gp; ++grp) pool_threads.emplace_back(run_group, grp);
    } else {
      for (std::size_t grp = 0; grp < cfg.gp; ++grp) run_group(grp);
    }

    VoteTally tally;
    for (const auto& s : finals) tally.record(s);
    auto voted = vote_update(tally, current, cs, cm, budget, objective);
    counters.calls += 2;
    current = std::move(voted.seeds);
    current_value = voted.max_influence;
    report.trajectory.push_back({it + 1, current_value});
    if (plateau_reached(report.trajectory, cfg.num)) {
      report.interrupted_at = it + 1;
      break;
    }
  }

  report.final_seeds = std::move(current);
  report.objective_value = current_value;
  report.estimator_calls += counters.calls;
  report.improving_moves = counters.improving;
  report.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return report;
}

}  // namespace bim

#endif  // BIM_BOOST_SA_HPP
