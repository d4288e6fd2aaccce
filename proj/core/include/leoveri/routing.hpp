#pragma once

#include <limits>
#include <span>
#include <vector>

#include "leoveri/topology.hpp"

namespace leoveri {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Ordered node sequence; list order is the precedence relation between nodes.
struct Path {
  std::vector<NodeId> nodes;
  double total_delay = 0.0;

  bool empty() const { return nodes.empty(); }
  std::size_t hops() const { return nodes.empty() ? 0 : nodes.size() - 1; }
  NodeId front() const { return nodes.front(); }
  NodeId back() const { return nodes.back(); }
  friend bool operator==(const Path&, const Path&) = default;
};

// Single- or multi-source Dijkstra result. Among equal-delay predecessors the
// lowest node id wins, so trees are reproducible.
class ShortestPathTree {
 public:
  ShortestPathTree() = default;
  ShortestPathTree(std::vector<double> dist, std::vector<NodeId> pred)
      : dist_(std::move(dist)), pred_(std::move(pred)) {}

  double distance(NodeId v) const { return dist_[static_cast<std::size_t>(v)]; }
  bool reachable(NodeId v) const { return dist_[static_cast<std::size_t>(v)] < kInfinity; }
  NodeId predecessor(NodeId v) const { return pred_[static_cast<std::size_t>(v)]; }
  std::span<const double> distances() const { return dist_; }

  // Path from the (nearest) source to v. Throws Error(Unreachable).
  Path path_to(NodeId v) const;

 private:
  std::vector<double> dist_;
  std::vector<NodeId> pred_;
};

ShortestPathTree dijkstra(const Graph& g, NodeId source);
ShortestPathTree dijkstra(const Graph& g, std::span<const NodeId> sources);

// Throws Error(Unreachable).
Path shortest_path(const Graph& g, NodeId a, NodeId b);
inline Path shortest_path(const Snapshot& s, NodeId a, NodeId b) { return shortest_path(s.graph(), a, b); }

// Every node v with dist(a,v) + dist(v,b) <= dist(a,b) * (1 + rel_tol),
// sorted ascending. Throws Error(Unreachable).
inline constexpr double kDefaultEqualCostTolerance = 1e-9;
std::vector<NodeId> equal_cost_node_set(const Graph& g, NodeId a, NodeId b,
                                        double rel_tol = kDefaultEqualCostTolerance);
// Same, reusing sweeps that the caller already holds.
std::vector<NodeId> equal_cost_node_set(const ShortestPathTree& from_a, const ShortestPathTree& from_b,
                                        NodeId b, double rel_tol = kDefaultEqualCostTolerance);

// Sum of link delays along consecutive nodes; Error(Unreachable) on a missing link.
double path_delay(const Graph& g, std::span<const NodeId> nodes);

// Unweighted BFS hop counts from a source set, optionally restricted to
// satellite nodes [0, node_limit). Unreached nodes get -1.
std::vector<int> hop_distances(const Graph& g, std::span<const NodeId> sources, int node_limit = -1);

}  // namespace leoveri
