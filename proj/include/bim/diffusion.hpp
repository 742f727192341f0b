#ifndef BIM_DIFFUSION_HPP
#define BIM_DIFFUSION_HPP

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <thread>
#include <vector>

#include "bim/graph.hpp"
#include "bim/random.hpp"

namespace bim {

struct ICParams {
  double p = 0.1;
  std::size_t max_steps = std::numeric_limits<std::size_t>::max();

  void validate() const {
    // p = 0 is admitted as a degenerate "seeds only" cascade.
    if (!(p >= 0.0 && p <= 1.0)) throw Error("edge probability must lie in [0, 1]");
  }
};

struct SpreadEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t replications = 0;

  friend bool operator==(const SpreadEstimate&, const SpreadEstimate&) = default;
};

namespace detail {

inline void check_seeds(const DirectedGraph& g, std::span<const NodeId> seeds) {
  for (NodeId s : seeds) {
    if (s >= g.node_count()) throw Error("seed " + std::to_string(s) + " is not a node of the graph");
  }
}

// Reusable cascade state; `stamp` marks nodes active in the current run so
// the buffer never needs clearing between replications.
class Cascade {
 public:
  explicit Cascade(std::size_t n) : active_(n, 0) {}

  std::size_t run(const DirectedGraph& g, std::span<const NodeId> seeds, const ICParams& params, Rng& rng) {
    if (++stamp_ == 0) {
      std::fill(active_.begin(), active_.end(), 0);
      stamp_ = 1;
    }
    frontier_.clear();
    for (NodeId s : seeds) {
      if (active_[s] != stamp_) {
        active_[s] = stamp_;
        frontier_.push_back(s);
      }
    }
    std::size_t activated = frontier_.size();
    std::sort(frontier_.begin(), frontier_.end());
    for (std::size_t step = 0; step < params.max_steps && !frontier_.empty(); ++step) {
      next_.clear();
      // Frontier ascending, neighbors ascending: attempts happen in node-id order.
      for (NodeId u : frontier_) {
        for (NodeId v : g.out_neighbors(u)) {
          if (active_[v] == stamp_) continue;
          if (uniform01(rng) < params.p) {
            active_[v] = stamp_;
            next_.push_back(v);
          }
        }
      }
      activated += next_.size();
      std::sort(next_.begin(), next_.end());
      frontier_.swap(next_);
    }
    return activated;
  }

 private:
  std::vector<std::uint32_t> active_;
  std::uint32_t stamp_ = 0;
  std::vector<NodeId> frontier_;
  std::vector<NodeId> next_;
};

}  // namespace detail

/// One Independent Cascade run; returns the number of active nodes at the end
/// (seeds included).
inline std::size_t simulate_ic_once(const DirectedGraph& g, std::span<const NodeId> seeds, const ICParams& params,
                                    std::uint64_t rng_seed) {
  params.validate();
  detail::check_seeds(g, seeds);
  Rng rng(rng_seed);
  detail::Cascade cascade(g.node_count());
  return cascade.run(g, seeds, params, rng);
}

/// Monte-Carlo spread estimate. Replication r runs on the stream
/// derive_seed(rng_seed, r), so the result does not depend on `workers`.
inline SpreadEstimate estimate_spread(const DirectedGraph& g, std::span<const NodeId> seeds, const ICParams& params,
                                      std::size_t replications, std::uint64_t rng_seed, unsigned workers = 1) {
  params.validate();
  detail::check_seeds(g, seeds);
  if (replications == 0) throw Error("replications must be at least 1");

  std::vector<std::size_t> counts(replications);
  auto run_range = [&](std::size_t begin, std::size_t end) {
    detail::Cascade cascade(g.node_count());
    for (std::size_t r = begin; r < end; ++r) {
      Rng rng(derive_seed(rng_seed, r));
      counts[r] = cascade.run(g, seeds, params, rng);
    }
  };

  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(replications)));
  if (workers == 1) {
    run_range(0, replications);
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (replications + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      const std::size_t begin = w * chunk;
      const std::size_t end = std::min(replications, begin + chunk);
      if (begin < end) pool.emplace_back(run_range, begin, end);
    }
  }

  // Fixed summation order keeps the aggregate bit-identical across worker counts.
  double sum = 0.0;
  for (auto c : counts) sum += static_cast<double>(c);
  const double mean = sum / static_cast<double>(replications);
  double sq = 0.0;
  for (auto c : counts) {
    const double d = static_cast<double>(c) - mean;
    sq += d * d;
  }
  SpreadEstimate est;
  est.mean = mean;
  est.replications = replications;
  est.std_error =
      replications > 1 ? std::sqrt(sq / static_cast<double>(replications - 1) / static_cast<double>(replications))
                       : 0.0;
  return est;
}

inline constexpr std::size_t kExactSpreadMaxEdges = 22;

/// Exact expected spread by enumerating live-edge subgraphs: each edge is kept
/// independently with probability p and the spread is the expected size of the
/// set reachable from the seeds. Only edges whose source is reachable from the
/// seeds matter, so the enumeration runs over those; the graph as a whole must
/// have at most kExactSpreadMaxEdges edges.
inline double exact_spread(const DirectedGraph& g, std::span<const NodeId> seeds, const ICParams& params) {
  params.validate();
  detail::check_seeds(g, seeds);
  if (g.edge_count() > kExactSpreadMaxEdges) {
    throw Error("exact_spread supports at most " + std::to_string(kExactSpreadMaxEdges) + " edges, graph has " +
                std::to_string(g.edge_count()));
  }
  if (params.max_steps != std::numeric_limits<std::size_t>::max()) {
    throw Error("exact_spread does not support a step limit");
  }

  // Nodes reachable from the seeds in the full graph, with local indices.
  std::vector<int> local(g.node_count(), -1);
  std::vector<NodeId> reach;
  for (NodeId s : seeds) {
    if (local[s] < 0) {
      local[s] = static_cast<int>(reach.size());
      reach.push_back(s);
    }
  }
  const std::size_t seed_count = reach.size();
  for (std::size_t i = 0; i < reach.size(); ++i) {
    for (NodeId v : g.out_neighbors(reach[i])) {
      if (local[v] < 0) {
        local[v] = static_cast<int>(reach.size());
        reach.push_back(v);
      }
    }
  }
  if (reach.size() > 64) throw Error("exact_spread: reachable set too large");

  // Candidate live edges in local indices; edges into seeds cannot change
  // the reached set and are left out of the enumeration.
  std::vector<std::pair<int, int>> live;
  for (NodeId u : reach) {
    for (NodeId v : g.out_neighbors(u)) {
      if (static_cast<std::size_t>(local[v]) >= seed_count) live.emplace_back(local[u], local[v]);
    }
  }
  const std::size_t m = live.size();
  std::uint64_t seed_mask = 0;
  for (std::size_t i = 0; i < seed_count; ++i) seed_mask |= std::uint64_t{1} << i;

  const double p = params.p;
  double expected = 0.0;
  for (std::uint64_t subset = 0; subset < (std::uint64_t{1} << m); ++subset) {
    const int alive = std::popcount(subset);
    const double prob = std::pow(p, alive) * std::pow(1.0 - p, static_cast<int>(m) - alive);
    if (prob == 0.0) continue;
    std::uint64_t reached = seed_mask;
    for (bool grew = true; grew;) {
      grew = false;
      for (std::size_t e = 0; e < m; ++e) {
        if (!((subset >> e) & 1U)) continue;
        const auto [a, b] = live[e];
        if (((reached >> a) & 1U) && !((reached >> b) & 1U)) {
          reached |= std::uint64_t{1} << b;
          grew = true;
        }
      }
    }
    expected += prob * static_cast<double>(std::popcount(reached));
  }
  return expected;
}

}  // namespace bim

#endif  // BIM_DIFFUSION_HPP
