#ifndef BIM_GRAPH_HPP
#define BIM_GRAPH_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bim/random.hpp"

namespace bim {

using NodeId = std::uint32_t;
using Edge = std::pair<NodeId, NodeId>;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Immutable directed graph in compressed adjacency form. Self-loops are
/// dropped and parallel edges collapsed at construction; both neighbor lists
/// are sorted ascending.
class DirectedGraph {
 public:
  DirectedGraph() = default;

  DirectedGraph(std::size_t node_count, std::vector<Edge> edges) : node_count_(node_count) {
    for (const auto& [u, v] : edges) {
      if (u >= node_count || v >= node_count) {
        throw Error("edge (" + std::to_string(u) + "," + std::to_string(v) +
                    ") references a node outside [0, " + std::to_string(node_count) + ")");
      }
    }
    std::erase_if(edges, [](const Edge& e) { return e.first == e.second; });
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    edges_ = std::move(edges);

    out_offsets_.assign(node_count_ + 1, 0);
    in_offsets_.assign(node_count_ + 1, 0);
    for (const auto& [u, v] : edges_) {
      ++out_offsets_[u + 1];
      ++in_offsets_[v + 1];
    }
    std::partial_sum(out_offsets_.begin(), out_offsets_.end(), out_offsets_.begin());
    std::partial_sum(in_offsets_.begin(), in_offsets_.end(), in_offsets_.begin());

    out_targets_.resize(edges_.size());
    in_sources_.resize(edges_.size());
    std::vector<std::size_t> in_fill(in_offsets_.begin(), in_offsets_.end() - 1);
    // edges_ is sorted by (source, target), so both lists come out ascending.
    for (std::size_t i = 0; i < edges_.size(); ++i) {
      const auto [u, v] = edges_[i];
      out_targets_[i] = v;
      in_sources_[in_fill[v]++] = u;
    }
  }

  std::size_t node_count() const noexcept { return node_count_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  bool empty() const noexcept { return node_count_ == 0; }

  std::span<const Edge> edges() const noexcept { return edges_; }

  std::span<const NodeId> out_neighbors(NodeId v) const noexcept {
    return {out_targets_.data() + out_offsets_[v], out_targets_.data() + out_offsets_[v + 1]};
  }
  std::span<const NodeId> in_neighbors(NodeId v) const noexcept {
    return {in_sources_.data() + in_offsets_[v], in_sources_.data() + in_offsets_[v + 1]};
  }

  std::size_t out_degree(NodeId v) const noexcept { return out_offsets_[v + 1] - out_offsets_[v]; }
  std::size_t in_degree(NodeId v) const noexcept { return in_offsets_[v + 1] - in_offsets_[v]; }

  bool has_edge(NodeId u, NodeId v) const noexcept {
    const auto out = out_neighbors(u);
    return std::binary_search(out.begin(), out.end(), v);
  }

  std::size_t max_out_degree() const noexcept {
    std::size_t best = 0;
    for (NodeId v = 0; v < node_count_; ++v) best = std::max(best, out_degree(v));
    return best;
  }

  double average_degree() const noexcept {
    return node_count_ == 0 ? 0.0 : static_cast<double>(edges_.size()) / static_cast<double>(node_count_);
  }

  friend bool operator==(const DirectedGraph& a, const DirectedGraph& b) {
    return a.node_count_ == b.node_count_ && a.edges_ == b.edges_;
  }

 private:
  std::size_t node_count_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::size_t> out_offsets_{0};
  std::vector<std::size_t> in_offsets_{0};
  std::vector<NodeId> out_targets_;
  std::vector<NodeId> in_sources_;
};

// ---------------------------------------------------------------------------
// Edge-list ingestion

struct EdgeListOptions {
  bool symmetrize = false;
  int index_base = 0;
};

namespace detail {

// "# nodes: N" is written by write_edge_list so isolated nodes survive a
// round trip; when present, ids are used as-is instead of being compacted.
inline std::optional<std::size_t> node_count_directive(const std::string& line) {
  std::istringstream in(line.substr(1));
  std::string key;
  std::size_t n = 0;
  if (in >> key && key == "nodes:" && in >> n) return n;
  return std::nullopt;
}

}  // namespace detail

inline DirectedGraph parse_edge_list(std::istream& in, const EdgeListOptions& options = {}) {
  std::vector<std::pair<std::int64_t, std::int64_t>> raw;
  std::optional<std::size_t> declared_nodes;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    if (line[first] == '#' || line[first] == '%') {
      if (line[first] == '#' && !declared_nodes) declared_nodes = detail::node_count_directive(line.substr(first));
      continue;
    }
    std::istringstream fields(line);
    std::int64_t u = 0;
    std::int64_t v = 0;
    if (!(fields >> u >> v)) throw ParseError(line_no, "expected \"u v\" or \"u v w\", got \"" + line + "\"");
    // Optional weight column; ignored.
    std::string extra;
    if (fields >> extra) {
      try {
        std::size_t used = 0;
        (void)std::stod(extra, &used);
        if (used != extra.size()) throw std::invalid_argument(extra);
      } catch (const std::exception&) {
        throw ParseError(line_no, "malformed weight in \"" + line + "\"");
      }
      if (fields >> extra) throw ParseError(line_no, "too many fields in \"" + line + "\"");
    }
    u -= options.index_base;
    v -= options.index_base;
    if (u < 0 || v < 0) throw ParseError(line_no, "node id below index base " + std::to_string(options.index_base));
    raw.emplace_back(u, v);
  }

  std::size_t node_count = 0;
  std::vector<Edge> edges;
  edges.reserve(raw.size() * (options.symmetrize ? 2 : 1));
  auto push = [&](NodeId a, NodeId b) {
    edges.emplace_back(a, b);
    if (options.symmetrize) edges.emplace_back(b, a);
  };

  if (declared_nodes) {
    node_count = *declared_nodes;
    for (const auto& [u, v] : raw) {
      if (static_cast<std::size_t>(std::max(u, v)) >= node_count) {
        throw Error("edge (" + std::to_string(u) + "," + std::to_string(v) + ") exceeds declared node count " +
                    std::to_string(node_count));
      }
      push(static_cast<NodeId>(u), static_cast<NodeId>(v));
    }
  } else {
    std::vector<std::int64_t> ids;
    ids.reserve(raw.size() * 2);
    for (const auto& [u, v] : raw) {
      ids.push_back(u);
      ids.push_back(v);
    }
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    if (ids.size() > std::numeric_limits<NodeId>::max()) throw Error("too many nodes");
    auto dense = [&](std::int64_t id) {
      return static_cast<NodeId>(std::lower_bound(ids.begin(), ids.end(), id) - ids.begin());
    };
    node_count = ids.size();
    for (const auto& [u, v] : raw) push(dense(u), dense(v));
  }

  if (node_count == 0) throw Error("edge list contains no nodes");
  return DirectedGraph(node_count, std::move(edges));
}

inline DirectedGraph load_edge_list(const std::string& path, const EdgeListOptions& options = {}) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open edge list '" + path + "'");
  return parse_edge_list(in, options);
}

inline void write_edge_list(std::ostream& out, const DirectedGraph& g) {
  out << "# nodes: " << g.node_count() << "\n";
  for (const auto& [u, v] : g.edges()) out << u << ' ' << v << '\n';
}

inline void save_edge_list(const std::string& path, const DirectedGraph& g) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write edge list '" + path + "'");
  write_edge_list(out, g);
}

// ---------------------------------------------------------------------------
// Top/bottom out-degree partition

namespace detail {

// ceil(fraction * count), tolerant of representation error in the product
// (0.2 * 1135 must give 227, not 228).
inline std::size_t ceil_fraction(double fraction, std::size_t count) {
  const double raw = std::round(fraction * static_cast<double>(count) * 1e9) / 1e9;
  return std::min(count, static_cast<std::size_t>(std::ceil(raw)));
}

}  // namespace detail

struct DegreePartition {
  std::vector<NodeId> top;     // out-degree desc, id asc
  std::vector<NodeId> bottom;  // out-degree desc, id asc
  std::vector<bool> in_top;    // indexed by node

  bool is_top(NodeId v) const { return in_top[v]; }
};

/// Nodes ordered by (out-degree desc, id asc).
inline std::vector<NodeId> nodes_by_out_degree(const DirectedGraph& g) {
  std::vector<NodeId> order(g.node_count());
  std::iota(order.begin(), order.end(), NodeId{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](NodeId a, NodeId b) { return g.out_degree(a) > g.out_degree(b); });
  return order;
}

inline DegreePartition partition_by_outdegree(const DirectedGraph& g, double top_fraction = 0.2) {
  if (!(top_fraction > 0.0 && top_fraction < 1.0)) throw Error("top_fraction must lie in (0, 1)");
  const auto order = nodes_by_out_degree(g);
  const auto top_size = detail::ceil_fraction(top_fraction, order.size());
  DegreePartition part;
  part.top.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(top_size));
  part.bottom.assign(order.begin() + static_cast<std::ptrdiff_t>(top_size), order.end());
  part.in_top.assign(g.node_count(), false);
  for (NodeId v : part.top) part.in_top[v] = true;
  return part;
}

// ---------------------------------------------------------------------------
// Synthetic power-law graphs

struct PowerLawSpec {
  std::size_t nodes = 2000;
  double avg_degree = 5.0;
  std::size_t max_degree = 50;
  double exponent = 2.0;
  std::uint64_t seed = 1;
};

namespace detail {

// Weights (k + shift)^-exponent over k in [0, max_degree]; the shift is
// chosen by bisection so that the mean equals avg_degree.
inline std::vector<double> powerlaw_weights(std::size_t max_degree, double exponent, double shift) {
  std::vector<double> w(max_degree + 1);
  for (std::size_t k = 0; k <= max_degree; ++k) w[k] = std::pow(static_cast<double>(k) + shift, -exponent);
  return w;
}

inline double weights_mean(const std::vector<double>& w) {
  double num = 0.0;
  double den = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k) {
    num += static_cast<double>(k) * w[k];
    den += w[k];
  }
  return num / den;
}

inline std::vector<std::size_t> draw_degrees(Rng& rng, std::size_t n, const std::vector<double>& weights) {
  std::discrete_distribution<std::size_t> dist(weights.begin(), weights.end());
  std::vector<std::size_t> deg(n);
  for (auto& d : deg) d = dist(rng);
  return deg;
}

}  // namespace detail

/// Directed configuration-model graph whose in- and out-degree sequences follow
/// a truncated power law with the requested mean. Stubs that would form a
/// self-loop or duplicate edge are redrawn; deterministic for a given seed.
inline DirectedGraph generate_powerlaw_graph(const PowerLawSpec& spec) {
  const std::size_t n = spec.nodes;
  if (n < 10) throw Error("power-law generator needs at least 10 nodes");
  if (!(spec.avg_degree > 1.0 && spec.avg_degree < static_cast<double>(spec.max_degree) &&
        spec.max_degree < n)) {
    throw Error("power-law generator needs 1 < avg_degree < max_degree < nodes");
  }
  if (!(spec.exponent > 0.0)) throw Error("power-law exponent must be positive");

  // mean is increasing in shift: -> 0 as shift -> 0+, -> max/2 as shift -> inf.
  if (spec.avg_degree >= static_cast<double>(spec.max_degree) / 2.0) {
    throw Error("average degree too close to maximum degree for a power-law sequence");
  }
  double lo = 1e-9;
  double hi = 1.0;
  while (detail::weights_mean(detail::powerlaw_weights(spec.max_degree, spec.exponent, hi)) < spec.avg_degree) {
    hi *= 2.0;
    if (hi > 1e12) throw Error("cannot fit power-law degree distribution");
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (detail::weights_mean(detail::powerlaw_weights(spec.max_degree, spec.exponent, mid)) < spec.avg_degree) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const auto weights = detail::powerlaw_weights(spec.max_degree, spec.exponent, 0.5 * (lo + hi));

  Rng rng(derive_seed(spec.seed, 0x9e47));
  auto out_deg = detail::draw_degrees(rng, n, weights);
  auto in_deg = detail::draw_degrees(rng, n, weights);

  // Balance stub totals by nudging random in-degrees within [0, max_degree].
  auto total = [](const std::vector<std::size_t>& d) { return std::accumulate(d.begin(), d.end(), std::size_t{0}); };
  const std::size_t out_total = total(out_deg);
  std::size_t in_total = total(in_deg);
  for (std::size_t guard = 0; in_total != out_total; ++guard) {
    if (guard > 100 * n * spec.max_degree) throw Error("cannot balance power-law degree sequences");
    const auto v = uniform_index(rng, n);
    if (in_total < out_total && in_deg[v] < spec.max_degree) {
      ++in_deg[v];
      ++in_total;
    } else if (in_total > out_total && in_deg[v] > 0) {
      --in_deg[v];
      --in_total;
    }
  }

  // High out-degree nodes are wired first while many distinct targets remain.
  // A stub that cannot be placed is dropped; too many drops force a restart.
  std::vector<NodeId> order(n);
  std::iota(order.begin(), order.end(), NodeId{0});
  std::stable_sort(order.begin(), order.end(), [&](NodeId a, NodeId b) { return out_deg[a] > out_deg[b]; });
  const std::size_t max_dropped = out_total / 100;
  constexpr int kRestarts = 20;
  constexpr int kRedraws = 200;
  for (int attempt = 0; attempt < kRestarts; ++attempt) {
    std::vector<NodeId> in_stubs;
    in_stubs.reserve(in_total);
    for (NodeId v = 0; v < n; ++v) in_stubs.insert(in_stubs.end(), in_deg[v], v);

    std::vector<std::vector<NodeId>> targets(n);
    std::size_t dropped = 0;
    for (NodeId u : order) {
      for (std::size_t s = 0; s < out_deg[u] && !in_stubs.empty(); ++s) {
        bool placed = false;
        for (int r = 0; r < kRedraws; ++r) {
          const auto pick = uniform_index(rng, in_stubs.size());
          const NodeId v = in_stubs[pick];
          if (v == u || std::find(targets[u].begin(), targets[u].end(), v) != targets[u].end()) continue;
          targets[u].push_back(v);
          in_stubs[pick] = in_stubs.back();
          in_stubs.pop_back();
          placed = true;
          break;
        }
        if (!placed) ++dropped;
      }
      if (dropped > max_dropped) break;
    }
    if (dropped > max_dropped) continue;

    std::vector<Edge> edges;
    edges.reserve(out_total);
    for (NodeId u = 0; u < n; ++u) {
      for (NodeId v : targets[u]) edges.emplace_back(u, v);
    }
    return DirectedGraph(n, std::move(edges));
  }
  throw Error("could not wire power-law degree sequence without self-loops or duplicate edges");
}

}  // namespace bim

#endif  // BIM_GRAPH_HPP
