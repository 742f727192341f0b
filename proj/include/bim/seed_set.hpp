#ifndef BIM_SEED_SET_HPP
#define BIM_SEED_SET_HPP

#include <algorithm>
#include <span>
#include <vector>

#include "bim/indicators.hpp"

namespace bim {

/// Sorted, duplicate-free node set with its total activation cost.
class SeedSet {
 public:
  SeedSet() = default;

  SeedSet(std::span<const NodeId> nodes, const CostModel& cm) : nodes_(detail::sorted_unique(nodes)) {
    total_cost_ = cm.total(nodes_);
  }

  std::span<const NodeId> nodes() const noexcept { return nodes_; }
  std::size_t size() const noexcept { return nodes_.size(); }
  bool empty() const noexcept { return nodes_.empty(); }
  double total_cost() const noexcept { return total_cost_; }

  bool contains(NodeId v) const { return std::binary_search(nodes_.begin(), nodes_.end(), v); }

  /// Returns false if v was already present.
  bool insert(NodeId v, const CostModel& cm) {
    const auto it = std::lower_bound(nodes_.begin(), nodes_.end(), v);
    if (it != nodes_.end() && *it == v) return false;
    nodes_.insert(it, v);
    total_cost_ += cm.cost(v);
    return true;
  }

  bool erase(NodeId v, const CostModel& cm) {
    const auto it = std::lower_bound(nodes_.begin(), nodes_.end(), v);
    if (it == nodes_.end() || *it != v) return false;
    nodes_.erase(it);
    // Recomputed rather than subtracted so repeated swaps do not drift.
    total_cost_ = cm.total(nodes_);
    return true;
  }

  bool fits(double budget) const noexcept { return total_cost_ <= budget; }

  friend bool operator==(const SeedSet& a, const SeedSet& b) { return a.nodes_ == b.nodes_; }

 private:
  std::vector<NodeId> nodes_;
  double total_cost_ = 0.0;
};

}  // namespace bim

#endif  // BIM_SEED_SET_HPP
