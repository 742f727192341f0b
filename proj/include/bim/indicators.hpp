#ifndef BIM_INDICATORS_HPP
#define BIM_INDICATORS_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <numeric>
#include <span>
#include <vector>

#include "bim/graph.hpp"

namespace bim {

/// Activation cost per node: c(v) = outdeg(v) * p_v + 1, where p_v is the
/// override for v if one is set and the base probability otherwise.
class CostModel {
 public:
  CostModel() = default;

  CostModel(const DirectedGraph& g, double base_p, std::map<NodeId, double> overrides = {})
      : base_p_(base_p), overrides_(std::move(overrides)) {
    if (!(base_p >= 0.0)) throw Error("cost probability must be non-negative");
    costs_.resize(g.node_count());
    for (NodeId v = 0; v < g.node_count(); ++v) {
      const auto it = overrides_.find(v);
      if (it != overrides_.end() && !(it->second >= 0.0)) throw Error("cost override must be non-negative");
      const double p = it == overrides_.end() ? base_p_ : it->second;
      costs_[v] = static_cast<double>(g.out_degree(v)) * p + 1.0;
    }
    for (const auto& [v, p] : overrides_) {
      if (v >= g.node_count()) throw Error("cost override for unknown node " + std::to_string(v));
    }
  }

  /// Overrides a seeded random `fraction` of the nodes with probability `alt_p`.
  static CostModel with_random_overrides(const DirectedGraph& g, double base_p, double fraction, double alt_p,
                                         std::uint64_t seed) {
    if (!(fraction >= 0.0 && fraction <= 1.0)) throw Error("override fraction must lie in [0, 1]");
    std::vector<NodeId> nodes(g.node_count());
    std::iota(nodes.begin(), nodes.end(), NodeId{0});
    Rng rng(seed);
    std::shuffle(nodes.begin(), nodes.end(), rng);
    const auto count = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(nodes.size())));
    std::map<NodeId, double> overrides;
    for (std::size_t i = 0; i < count; ++i) overrides.emplace(nodes[i], alt_p);
    return CostModel(g, base_p, std::move(overrides));
  }

  double cost(NodeId v) const { return costs_[v]; }
  double base_p() const noexcept { return base_p_; }
  const std::map<NodeId, double>& overrides() const noexcept { return overrides_; }
  std::size_t size() const noexcept { return costs_.size(); }

  double total(std::span<const NodeId> nodes) const {
    double sum = 0.0;
    for (NodeId v : nodes) sum += costs_[v];
    return sum;
  }

 private:
  double base_p_ = 0.1;
  std::map<NodeId, double> overrides_;
  std::vector<double> costs_;
};

inline double node_cost(const CostModel& cm, NodeId v) { return cm.cost(v); }

inline std::size_t degree_score(const DirectedGraph& g, NodeId v) { return g.out_degree(v); }

namespace detail {

inline bool contains(std::span<const NodeId> sorted, NodeId v) {
  return std::binary_search(sorted.begin(), sorted.end(), v);
}

inline std::vector<NodeId> sorted_unique(std::span<const NodeId> nodes) {
  std::vector<NodeId> s(nodes.begin(), nodes.end());
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

}  // namespace detail

/// One-hop expected diffusion value:
/// |S| + sum over out-neighbors i of S outside S of 1 - (1-p)^tau(i),
/// where tau(i) counts edges from S into i.
inline double edv_set(const DirectedGraph& g, std::span<const NodeId> seeds, double p) {
  const auto s = detail::sorted_unique(seeds);
  std::map<NodeId, int> tau;
  for (NodeId v : s) {
    for (NodeId i : g.out_neighbors(v)) {
      if (!detail::contains(s, i)) ++tau[i];
    }
  }
  double value = static_cast<double>(s.size());
  for (const auto& [i, t] : tau) value += 1.0 - std::pow(1.0 - p, t);
  return value;
}

/// One-hop spread of a single node: 1 + outdeg(v) * p.
inline double sigma1_node(const DirectedGraph& g, NodeId v, double p) {
  return 1.0 + static_cast<double>(g.out_degree(v)) * p;
}

/// Two-hop spread of a single node:
///   1 + sum_{j in out(v)} (1 + outdeg(j) p) p  -  p^3 * #{edges u->k with u,k in out(v)}.
inline double sigma2_node(const DirectedGraph& g, NodeId v, double p) {
  const auto out = g.out_neighbors(v);
  double value = 1.0;
  for (NodeId j : out) value += sigma1_node(g, j, p) * p;
  std::size_t inner_edges = 0;
  for (NodeId u : out) {
    for (NodeId k : g.out_neighbors(u)) {
      if (detail::contains(out, k)) ++inner_edges;
    }
  }
  return value - static_cast<double>(inner_edges) * p * p * p;
}

/// Two-hop spread of a seed set:
///   sum_{v in S} sigma2(v)
///   - sum_{v in S} sum_{l in out(v) cap S} p (sigma1(l) - p(l,v))
///   - sum_{s in S} sum_{l in out(s) cap S} sum_{d in out(l) cap S, d != s} p^2
/// with p(l,v) = p when l->v is an edge and 0 otherwise.
///
/// Sigma2Evaluator caches the per-node terms; it is immutable after
/// construction and safe to share between threads.
class Sigma2Evaluator {
 public:
  Sigma2Evaluator(const DirectedGraph& g, double p) : g_(&g), p_(p), node_value_(g.node_count()) {
    for (NodeId v = 0; v < g.node_count(); ++v) node_value_[v] = sigma2_node(g, v, p);
  }

  double node(NodeId v) const { return node_value_[v]; }
  double p() const noexcept { return p_; }
  const DirectedGraph& graph() const noexcept { return *g_; }

  /// `sorted_seeds` must be sorted ascending without duplicates.
  double evaluate_sorted(std::span<const NodeId> sorted_seeds) const {
    const auto& g = *g_;
    double total = 0.0;
    double overlap = 0.0;
    std::size_t two_hop_pairs = 0;
    for (NodeId v : sorted_seeds) {
      total += node_value_[v];
      for (NodeId l : g.out_neighbors(v)) {
        if (!detail::contains(sorted_seeds, l)) continue;
        const double back = g.has_edge(l, v) ? p_ : 0.0;
        overlap += p_ * (sigma1_node(g, l, p_) - back);
        for (NodeId d : g.out_neighbors(l)) {
          if (d != v && detail::contains(sorted_seeds, d)) ++two_hop_pairs;
        }
      }
    }
    return total - overlap - static_cast<double>(two_hop_pairs) * p_ * p_;
  }

  double operator()(std::span<const NodeId> seeds) const {
    if (std::is_sorted(seeds.begin(), seeds.end()) &&
        std::adjacent_find(seeds.begin(), seeds.end()) == seeds.end()) {
      return evaluate_sorted(seeds);
    }
    return evaluate_sorted(detail::sorted_unique(seeds));
  }

 private:
  const DirectedGraph* g_;
  double p_;
  std::vector<double> node_value_;
};

inline double sigma2_set(const DirectedGraph& g, std::span<const NodeId> seeds, double p) {
  return Sigma2Evaluator(g, p)(seeds);
}

/// Cost-effective two-hop value: sigma2(v) / c(v).
inline double cedv_node(const DirectedGraph& g, const CostModel& cm, NodeId v, double p) {
  return sigma2_node(g, v, p) / cm.cost(v);
}

// ---------------------------------------------------------------------------
// Set objectives used inside the solvers.

using SetObjective = std::function<double(std::span<const NodeId>)>;

enum class ObjectiveKind { Sigma2, Edv };

inline SetObjective make_objective(const DirectedGraph& g, double p, ObjectiveKind kind) {
  if (kind == ObjectiveKind::Edv) {
    return [&g, p](std::span<const NodeId> s) { return edv_set(g, s, p); };
  }
  auto eval = std::make_shared<const Sigma2Evaluator>(g, p);
  return [eval](std::span<const NodeId> s) { return (*eval)(s); };
}

}  // namespace bim

#endif  // BIM_INDICATORS_HPP
