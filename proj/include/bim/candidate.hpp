#ifndef BIM_CANDIDATE_HPP
#define BIM_CANDIDATE_HPP

#include <algorithm>
#include <cmath>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "bim/graph.hpp"
#include "bim/indicators.hpp"

namespace bim {

struct CandidateOptions {
  double alpha = 1.5;         // C1 is filled under alpha * budget
  double beta_percent = 60.0; // C2 draws from the top beta% of H by ce2
  double p = 0.1;             // probability used by the two-hop indicator
};

/// Single candidate pool for the annealer. C1 holds cost-effective low-degree
/// nodes; C2 adds, for each high-degree node that C1 cannot reach within two
/// hops, its best in-neighbor among the top-ranked low-degree nodes.
struct CandidateSet {
  std::vector<NodeId> c1;  // admission order (ce2 desc, id asc)
  std::vector<NodeId> c2;  // admission order (T order of the node they cover)
  std::vector<double> ce;  // ce2 for every node of the graph
  std::vector<NodeId> t1;  // T nodes with an in-neighbor in C1
  std::vector<NodeId> t2;  // T nodes reached through a T1 node
  std::vector<NodeId> t3;  // remaining T nodes
  double budget = 0.0;
  double c1_cost = 0.0;
  std::vector<std::string> warnings;

  std::size_t size() const noexcept { return c1.size() + c2.size(); }
  bool empty() const noexcept { return c1.empty() && c2.empty(); }

  /// C1 followed by C2.
  std::vector<NodeId> nodes() const {
    std::vector<NodeId> all(c1);
    all.insert(all.end(), c2.begin(), c2.end());
    return all;
  }

  /// Candidates ordered by (ce2 desc, id asc).
  std::vector<NodeId> by_ce() const {
    auto all = nodes();
    std::sort(all.begin(), all.end(), [&](NodeId a, NodeId b) {
      if (ce[a] != ce[b]) return ce[a] > ce[b];
      return a < b;
    });
    return all;
  }
};

inline CandidateSet build_candidates(const DirectedGraph& g, const CostModel& cm, const DegreePartition& partition,
                                     double budget, const CandidateOptions& opt = {}) {
  if (g.empty()) throw Error("cannot build candidates on an empty graph");
  if (!(budget > 0.0)) throw Error("budget must be positive");
  if (!(opt.alpha > 1.0 && opt.alpha < 2.0)) throw Error("alpha must lie in (1, 2)");
  if (!(opt.beta_percent > 0.0 && opt.beta_percent <= 100.0)) throw Error("beta must lie in (0, 100]");

  CandidateSet cs;
  cs.budget = budget;
  cs.ce.resize(g.node_count());
  for (NodeId v = 0; v < g.node_count(); ++v) cs.ce[v] = cedv_node(g, cm, v, opt.p);

  std::vector<NodeId> h_order(partition.bottom);
  std::sort(h_order.begin(), h_order.end(), [&](NodeId a, NodeId b) {
    if (cs.ce[a] != cs.ce[b]) return cs.ce[a] > cs.ce[b];
    return a < b;
  });
  constexpr std::size_t kUnranked = static_cast<std::size_t>(-1);
  std::vector<std::size_t> h_rank(g.node_count(), kUnranked);
  for (std::size_t i = 0; i < h_order.size(); ++i) h_rank[h_order[i]] = i;

  if (!h_order.empty()) {
    double cheapest = cm.cost(h_order.front());
    for (NodeId v : h_order) cheapest = std::min(cheapest, cm.cost(v));
    if (budget < cheapest) cs.warnings.push_back("budget is below the cheapest low-degree node cost; C1 is empty");
  }

  // C1: cost-effective H nodes under alpha * B, skipping any node with an
  // out-neighbor already admitted.
  std::vector<bool> in_c(g.node_count(), false);
  const double cap = opt.alpha * budget;
  double total = 0.0;
  for (NodeId v : h_order) {
    if (total + cm.cost(v) > cap) continue;
    const auto out = g.out_neighbors(v);
    if (std::any_of(out.begin(), out.end(), [&](NodeId w) { return in_c[w]; })) continue;
    total += cm.cost(v);
    in_c[v] = true;
    cs.c1.push_back(v);
  }
  cs.c1_cost = total;

  // Reachability of T from C1.
  std::vector<bool> is_t1(g.node_count(), false);
  for (NodeId t : partition.top) {
    const auto in = g.in_neighbors(t);
    if (std::any_of(in.begin(), in.end(), [&](NodeId u) { return in_c[u]; })) {
      is_t1[t] = true;
      cs.t1.push_back(t);
    }
  }
  for (NodeId t : partition.top) {
    if (is_t1[t]) continue;
    const auto in = g.in_neighbors(t);
    if (std::any_of(in.begin(), in.end(), [&](NodeId u) { return is_t1[u]; })) {
      cs.t2.push_back(t);
    } else {
      cs.t3.push_back(t);
    }
  }

  // C2: best top-beta% H in-neighbor of each unreached T node.
  const std::size_t cutoff = detail::ceil_fraction(opt.beta_percent / 100.0, h_order.size());
  for (NodeId t : cs.t3) {
    std::size_t best = kUnranked;
    for (NodeId u : g.in_neighbors(t)) {
      if (h_rank[u] < cutoff) best = std::min(best, h_rank[u]);
    }
    if (best == kUnranked) continue;
    const NodeId pick = h_order[best];
    if (in_c[pick]) continue;
    in_c[pick] = true;
    cs.c2.push_back(pick);
  }
  return cs;
}

struct ReachabilityRow {
  double budget = 0.0;
  std::size_t candidates = 0;
  std::size_t reached = 0;    // |T1| + |T2|
  std::size_t unreached = 0;  // |T3|
};

inline ReachabilityRow t_reachability_row(const CandidateSet& cs) {
  return {cs.budget, cs.size(), cs.t1.size() + cs.t2.size(), cs.t3.size()};
}

inline std::vector<ReachabilityRow> t_reachability_report(const DirectedGraph& g, const CostModel& cm,
                                                          const DegreePartition& partition,
                                                          std::span<const double> budgets,
                                                          const CandidateOptions& opt = {}) {
  std::vector<ReachabilityRow> rows;
  rows.reserve(budgets.size());
  for (double b : budgets) rows.push_back(t_reachability_row(build_candidates(g, cm, partition, b, opt)));
  return rows;
}

inline void write_reachability_csv(std::ostream& out, std::span<const ReachabilityRow> rows) {
  out << "budget,C,T1T2,T3\n";
  for (const auto& r : rows) out << r.budget << ',' << r.candidates << ',' << r.reached << ',' << r.unreached << '\n';
}

}  // namespace bim

#endif  // BIM_CANDIDATE_HPP
