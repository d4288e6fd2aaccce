#pragma once

// Brute-force reference implementations used by the unit and acceptance
// tests. Nothing here calls into the routing or planning code.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <queue>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "leoveri/geo.hpp"
#include "leoveri/topology.hpp"

namespace oracle {

using leoveri::GridShape;
using leoveri::NodeId;
using leoveri::SatCoord;

inline constexpr long kNoPath = std::numeric_limits<long>::max();

// Small undirected graph with integer weights, so ties are exact.
struct IntGraph {
  int n = 0;
  std::vector<std::vector<std::pair<int, long>>> adj;

  explicit IntGraph(int nodes = 0) : n(nodes), adj(static_cast<std::size_t>(nodes)) {}

  void add(int a, int b, long w) {
    adj[a].push_back({b, w});
    adj[b].push_back({a, w});
  }
  std::optional<long> weight(int a, int b) const {
    for (auto [v, w] : adj[a])
      if (v == b) return w;
    return std::nullopt;
  }
  leoveri::Graph to_graph(double unit = 1.0) const {
    leoveri::Graph g(n);
    for (int a = 0; a < n; ++a)
      for (auto [b, w] : adj[a])
        if (a < b) g.add_link(a, b, static_cast<double>(w) * unit);
    return g;
  }
};

inline IntGraph random_graph(std::mt19937_64& rng, int n, double p, long wmax) {
  IntGraph g(n);
  std::bernoulli_distribution edge(p);
  std::uniform_int_distribution<long> weight(1, wmax);
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if (edge(rng)) g.add(a, b, weight(rng));
  return g;
}

// Every simple path from `src`, depth first. For each end node: the cheapest
// cost and the union of nodes over all cheapest paths.
struct PathEnumeration {
  std::vector<long> cost;
  std::vector<std::set<int>> on_best;
};

inline PathEnumeration enumerate_simple_paths(const IntGraph& g, int src) {
  PathEnumeration out;
  out.cost.assign(static_cast<std::size_t>(g.n), kNoPath);
  out.on_best.assign(static_cast<std::size_t>(g.n), {});
  std::vector<int> stack{src};
  std::vector<char> used(static_cast<std::size_t>(g.n), 0);
  used[src] = 1;
  std::function<void(int, long)> walk = [&](int v, long c) {
    if (c < out.cost[v]) {
      out.cost[v] = c;
      out.on_best[v] = std::set<int>(stack.begin(), stack.end());
    } else if (c == out.cost[v]) {
      out.on_best[v].insert(stack.begin(), stack.end());
    }
    for (auto [u, w] : g.adj[v]) {
      if (used[u]) continue;
      used[u] = 1;
      stack.push_back(u);
      walk(u, c + w);
      stack.pop_back();
      used[u] = 0;
    }
  };
  walk(src, 0);
  return out;
}

// Path obtained by walking back through the lowest-id predecessor that sits
// on a cheapest route. `cost` holds cheapest costs from the source.
inline std::vector<int> lowest_id_path(const IntGraph& g, const std::vector<long>& cost, int target) {
  if (cost[target] == kNoPath) return {};
  std::vector<int> rev{target};
  int v = target;
  while (cost[v] != 0) {
    int pred = -1;
    for (auto [u, w] : g.adj[v])
      if (cost[u] != kNoPath && cost[u] + w == cost[v] && (pred < 0 || u < pred)) pred = u;
    v = pred;
    rev.push_back(v);
  }
  std::reverse(rev.begin(), rev.end());
  return rev;
}

// Plain O(V^2) Dijkstra over integer weights.
inline std::vector<long> int_distances(const IntGraph& g, const std::vector<int>& sources) {
  std::vector<long> dist(static_cast<std::size_t>(g.n), kNoPath);
  std::vector<char> done(static_cast<std::size_t>(g.n), 0);
  for (int s : sources) dist[s] = 0;
  for (int round = 0; round < g.n; ++round) {
    int v = -1;
    for (int i = 0; i < g.n; ++i)
      if (!done[i] && dist[i] != kNoPath && (v < 0 || dist[i] < dist[v])) v = i;
    if (v < 0) break;
    done[v] = 1;
    for (auto [u, w] : g.adj[v]) dist[u] = std::min(dist[u], dist[v] + w);
  }
  return dist;
}

// Unweighted hop counts, -1 when unreached.
inline std::vector<int> bfs_hops(const IntGraph& g, const std::vector<int>& sources) {
  std::vector<int> hops(static_cast<std::size_t>(g.n), -1);
  std::queue<int> q;
  for (int s : sources) {
    hops[s] = 0;
    q.push(s);
  }
  while (!q.empty()) {
    const int v = q.front();
    q.pop();
    for (auto [u, w] : g.adj[v])
      if (hops[u] < 0) {
        hops[u] = hops[v] + 1;
        q.push(u);
      }
  }
  return hops;
}

// P x H torus with +Grid links. Weight callback gets the two endpoints.
inline IntGraph torus(int planes, int per_plane, const std::function<long(SatCoord, SatCoord)>& weight) {
  const GridShape grid{planes, per_plane};
  IntGraph g(grid.size());
  for (int p = 0; p < planes; ++p)
    for (int n = 0; n < per_plane; ++n) {
      const SatCoord a{p, n}, up{p, (n + 1) % per_plane}, right{(p + 1) % planes, n};
      g.add(grid.node_of(a), grid.node_of(up), weight(a, up));
      g.add(grid.node_of(a), grid.node_of(right), weight(a, right));
    }
  return g;
}

// Snapshot with only satellites, all north-bound, no ground entities.
inline leoveri::Snapshot toy_snapshot(const IntGraph& g, GridShape grid, double unit = 1.0) {
  std::vector<leoveri::SatState> sats;
  for (int v = 0; v < grid.size(); ++v) {
    leoveri::SatState s;
    s.coord = grid.coord_of(v);
    s.direction = leoveri::Direction::NEBound;
    sats.push_back(s);
  }
  return leoveri::Snapshot::from_parts(grid, 0.0, std::move(sats), {}, {}, g.to_graph(unit));
}

// Independent validity check of sat_s -> relays -> sat_d on an integer graph.
// Returns the total cost, or nullopt when any rule is broken.
struct ToyScene {
  const IntGraph* g = nullptr;
  GridShape grid;
  std::vector<int> risk;  // node ids
  int theta = 1;
  int sigma = 2;
};

inline std::optional<long> plan_cost(const ToyScene& sc, SatCoord s, SatCoord d, const std::vector<SatCoord>& relays) {
  const auto& g = *sc.g;
  if (static_cast<int>(relays.size()) > sc.sigma) return std::nullopt;
  auto risky = [&](int v) { return std::find(sc.risk.begin(), sc.risk.end(), v) != sc.risk.end(); };
  std::vector<int> way{sc.grid.node_of(s)};
  for (auto r : relays) {
    const int v = sc.grid.node_of(r);
    if (r == s || r == d || risky(v) || std::find(way.begin(), way.end(), v) != way.end()) return std::nullopt;
    way.push_back(v);
  }
  way.push_back(sc.grid.node_of(d));
  const auto hops = bfs_hops(g, sc.risk);
  std::set<int> seen;
  long total = 0;
  for (std::size_t i = 0; i + 1 < way.size(); ++i) {
    const auto from_a = int_distances(g, {way[i]});
    const auto from_b = int_distances(g, {way[i + 1]});
    const long best = from_a[way[i + 1]];
    if (best == kNoPath) return std::nullopt;
    const auto seg = lowest_id_path(g, from_a, way[i + 1]);
    for (std::size_t k = (i == 0 ? 0 : 1); k < seg.size(); ++k) {
      const int v = seg[k];
      if (!seen.insert(v).second) return std::nullopt;
      if (!sc.risk.empty() && hops[v] >= 0 && hops[v] < sc.theta) return std::nullopt;
    }
    for (int v = 0; v < g.n; ++v)
      if (risky(v) && from_a[v] != kNoPath && from_b[v] != kNoPath && from_a[v] + from_b[v] == best)
        return std::nullopt;
    total += best;
  }
  return total;
}

// Cheapest valid plan with relays drawn from the grid points
// {s.p, d.p, p_l, p_r} x {s.n, d.n, n_b, n_u} (at most 16 cells), trying every
// ordered choice of up to sigma of them.
inline std::optional<long> best_corner_plan(const ToyScene& sc, SatCoord s, SatCoord d, const std::vector<int>& border_planes,
                                            const std::vector<int>& border_indices) {
  std::set<int> ps{s.p, d.p}, ns{s.n, d.n};
  ps.insert(border_planes.begin(), border_planes.end());
  ns.insert(border_indices.begin(), border_indices.end());
  std::vector<SatCoord> points;
  for (int p : ps)
    for (int n : ns) points.push_back({p, n});
  std::optional<long> best;
  auto consider = [&](const std::vector<SatCoord>& relays) {
    if (auto c = plan_cost(sc, s, d, relays); c && (!best || *c < *best)) best = c;
  };
  consider({});
  if (sc.sigma >= 1)
    for (auto a : points) consider({a});
  if (sc.sigma >= 2)
    for (auto a : points)
      for (auto b : points)
        if (a != b) consider({a, b});
  return best;
}

// Spherical point-in-polygon by winding angle: the signed angles subtended at
// the point by each edge sum to +-2 pi inside and 0 outside.
inline bool winding_contains(const std::vector<leoveri::LatLon>& poly, leoveri::LatLon q) {
  using leoveri::Vec3;
  const Vec3 up = leoveri::to_cartesian(q, 1.0);
  auto tangent = [&](leoveri::LatLon v) {
    const Vec3 w = leoveri::to_cartesian(v, 1.0);
    return w - w.dot(up) * up;
  };
  // The tangent projection cannot tell q from its antipode; only the side of
  // the sphere the polygon sits on counts.
  Vec3 centroid{0.0, 0.0, 0.0};
  for (const auto& v : poly) centroid = centroid + leoveri::to_cartesian(v, 1.0);
  if (centroid.dot(up) <= 0.0) return false;
  double sum = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Vec3 a = tangent(poly[i]);
    const Vec3 b = tangent(poly[(i + 1) % poly.size()]);
    sum += std::atan2(a.cross(b).dot(up), a.dot(b));
  }
  return std::abs(sum) > std::numbers::pi;
}

// Light-time along the chord between two points at radius r separated by
// central angle `angle_rad`.
inline double chord_delay_s(double radius_km, double angle_rad) {
  return 2.0 * radius_km * std::sin(angle_rad / 2.0) / leoveri::kLightSpeedKmPerS;
}

// Double-weighted Dijkstra with a binary heap, for checks on real snapshots.
inline std::vector<double> real_distances(const leoveri::Graph& g, NodeId src) {
  std::vector<double> dist(static_cast<std::size_t>(g.node_count()), std::numeric_limits<double>::infinity());
  using Item = std::pair<double, NodeId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  dist[src] = 0.0;
  heap.push({0.0, src});
  while (!heap.empty()) {
    const auto [d, v] = heap.top();
    heap.pop();
    if (d > dist[v]) continue;
    for (const auto& e : g.neighbors(v))
      if (d + e.delay_s < dist[e.to]) {
        dist[e.to] = d + e.delay_s;
        heap.push({dist[e.to], e.to});
      }
  }
  return dist;
}

// Satellite-only hop counts from a node set.
inline std::vector<int> real_hops(const leoveri::Graph& g, const std::vector<NodeId>& sources, int node_limit) {
  std::vector<int> hops(static_cast<std::size_t>(g.node_count()), -1);
  std::queue<NodeId> q;
  for (NodeId s : sources) {
    hops[s] = 0;
    q.push(s);
  }
  while (!q.empty()) {
    const NodeId v = q.front();
    q.pop();
    for (const auto& e : g.neighbors(v))
      if (e.to < node_limit && hops[e.to] < 0) {
        hops[e.to] = hops[v] + 1;
        q.push(e.to);
      }
  }
  return hops;
}

}  // namespace oracle
