#include "leoveri/routing.hpp"

#include <algorithm>
#include <deque>
#include <queue>
#include <string>

#include "leoveri/error.hpp"

namespace leoveri {

Path ShortestPathTree::path_to(NodeId v) const {
  if (!reachable(v)) throw Error(ErrorCode::Unreachable, "node " + std::to_string(v) + " is unreachable");
  Path p;
  p.total_delay = distance(v);
  for (NodeId cur = v; cur != -1; cur = predecessor(cur)) p.nodes.push_back(cur);
  std::reverse(p.nodes.begin(), p.nodes.end());
  return p;
}

ShortestPathTree dijkstra(const Graph& g, std::span<const NodeId> sources) {
  const auto n = static_cast<std::size_t>(g.node_count());
  std::vector<double> dist(n, kInfinity);
  std::vector<NodeId> pred(n, -1);
  std::vector<char> done(n, 0);

  using Item = std::pair<double, NodeId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  for (NodeId s : sources) {
    dist[static_cast<std::size_t>(s)] = 0.0;
    queue.emplace(0.0, s);
  }
  while (!queue.empty()) {
    const auto [d, u] = queue.top();
    queue.pop();
    const auto ui = static_cast<std::size_t>(u);
    if (done[ui]) continue;
    done[ui] = 1;
    for (const Edge& e : g.neighbors(u)) {
      const auto vi = static_cast<std::size_t>(e.to);
      const double nd = d + e.delay_s;
      if (nd < dist[vi]) {
        dist[vi] = nd;
        pred[vi] = u;
        queue.emplace(nd, e.to);
      } else if (nd == dist[vi] && e.delay_s > 0.0 && pred[vi] != -1 && u < pred[vi]) {
        // Positive edge keeps the predecessor chain strictly decreasing.
        pred[vi] = u;
      }
    }
  }
  return ShortestPathTree(std::move(dist), std::move(pred));
}

ShortestPathTree dijkstra(const Graph& g, NodeId source) {
  const NodeId s[] = {source};
  return dijkstra(g, s);
}

Path shortest_path(const Graph& g, NodeId a, NodeId b) { return dijkstra(g, a).path_to(b); }

std::vector<NodeId> equal_cost_node_set(const ShortestPathTree& from_a, const ShortestPathTree& from_b,
                                        NodeId b, double rel_tol) {
  if (!from_a.reachable(b)) throw Error(ErrorCode::Unreachable, "endpoints are disconnected");
  const double bound = from_a.distance(b) * (1.0 + rel_tol);
  std::vector<NodeId> out;
  const auto da = from_a.distances();
  const auto db = from_b.distances();
  for (std::size_t v = 0; v < da.size(); ++v)
    if (da[v] + db[v] <= bound) out.push_back(static_cast<NodeId>(v));
  return out;
}

std::vector<NodeId> equal_cost_node_set(const Graph& g, NodeId a, NodeId b, double rel_tol) {
  return equal_cost_node_set(dijkstra(g, a), dijkstra(g, b), b, rel_tol);
}

double path_delay(const Graph& g, std::span<const NodeId> nodes) {
  double total = 0.0;
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    const auto d = g.link_delay(nodes[i - 1], nodes[i]);
    if (!d)
      throw Error(ErrorCode::Unreachable,
                  "no link " + std::to_string(nodes[i - 1]) + " -> " + std::to_string(nodes[i]));
    total += *d;
  }
  return total;
}

std::vector<int> hop_distances(const Graph& g, std::span<const NodeId> sources, int node_limit) {
  const int limit = node_limit < 0 ? g.node_count() : node_limit;
  std::vector<int> hops(static_cast<std::size_t>(g.node_count()), -1);
  std::deque<NodeId> frontier;
  for (NodeId s : sources) {
    if (hops[static_cast<std::size_t>(s)] == 0) continue;
    hops[static_cast<std::size_t>(s)] = 0;
    frontier.push_back(s);
  }
  while (!frontier.empty()) {
    const NodeId u = frontier.front();
    frontier.pop_front();
    for (const Edge& e : g.neighbors(u)) {
      if (e.to >= limit) continue;
      auto& h = hops[static_cast<std::size_t>(e.to)];
      if (h != -1) continue;
      h = hops[static_cast<std::size_t>(u)] + 1;
      frontier.push_back(e.to);
    }
  }
  return hops;
}

}  // namespace leoveri
