#include "leoveri/drsa.hpp"

#include <algorithm>
#include <set>

#include "leoveri/error.hpp"

namespace leoveri {

namespace {

IndexInterval shorter_arc(int from, int to, int ring) {
  const int forward = ((to - from) % ring + ring) % ring;
  if (forward <= ring - forward) return {from, forward + 1, ring};
  return {to, ring - forward + 1, ring};
}

bool intervals_meet(const IndexInterval& a, const IndexInterval& b) {
  for (int i = 0; i < a.length; ++i)
    if (b.contains((a.start + i) % a.ring)) return true;
  return false;
}

int axis_gap(const IndexInterval& iv, int x) {
  if (iv.contains(x)) return 0;
  const int below = ((iv.start - x) % iv.ring + iv.ring) % iv.ring;
  const int above = ((x - iv.last()) % iv.ring + iv.ring) % iv.ring;
  return std::min(below, above);
}

// Grid-hop distance from a cell to the nearest low-risk frame.
int hops_to_nlrp(SatCoord c, const Nlrp& nlrp) {
  int best = -1;
  for (const auto& f : nlrp.frames()) {
    const int d = axis_gap(f.planes, c.p) + axis_gap(f.indices, c.n);
    if (best < 0 || d < best) best = d;
  }
  return best;
}

bool avoids_interior(const std::vector<SatCoord>& cells, const Nlrp& nlrp) {
  return std::none_of(cells.begin(), cells.end(), [&](SatCoord c) { return nlrp.interior(c); });
}

using Candidate = std::vector<SatCoord>;

Candidate corner_candidate(const Frame& f, SatCoord corner) {
  if (corner == f.s || corner == f.d) return {};
  return {corner};
}

std::optional<RelayPlan> best_of(const PlanningContext& ctx, const Frame& f, const std::vector<Candidate>& cands) {
  std::optional<RelayPlan> best;
  for (const auto& c : cands) {
    auto plan = evaluate_relays(ctx, f.s, f.d, c);
    if (plan && (!best || plan->path.total_delay < best->path.total_delay)) best = std::move(plan);
  }
  return best;
}

std::vector<Candidate> border_pairs(const Frame& f, const Nlrp& nlrp) {
  std::vector<Candidate> out;
  for (const auto& fr : nlrp.frames()) {
    for (int n : {fr.n_b(), fr.n_u()}) out.push_back({{f.s.p, n}, {f.d.p, n}});
    for (int p : {fr.p_l(), fr.p_r()}) out.push_back({{p, f.s.n}, {p, f.d.n}});
  }
  return out;
}

// Relays drawn from the corners of Frame u NLRP: every combination of the
// endpoint and border planes with the endpoint and border indices.
std::vector<Candidate> enlarged_corner_plans(const Frame& f, const Nlrp& nlrp, int sigma) {
  std::vector<int> ps{f.s.p, f.d.p}, ns{f.s.n, f.d.n};
  for (const auto& fr : nlrp.frames()) {
    ps.insert(ps.end(), {fr.p_l(), fr.p_r()});
    ns.insert(ns.end(), {fr.n_b(), fr.n_u()});
  }
  std::sort(ps.begin(), ps.end());
  ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
  std::sort(ns.begin(), ns.end());
  ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
  std::vector<SatCoord> points;
  for (int p : ps)
    for (int n : ns) points.push_back({p, n});

  std::vector<Candidate> out{{}};
  if (sigma >= 1)
    for (auto a : points) out.push_back({a});
  if (sigma >= 2)
    for (auto a : points)
      for (auto b : points)
        if (a != b) out.push_back({a, b});
  return out;
}

}  // namespace

Frame make_frame(const GridShape& grid, SatCoord s, SatCoord d) {
  return {s, d, shorter_arc(s.p, d.p, grid.planes), shorter_arc(s.n, d.n, grid.per_plane)};
}

const char* to_string(OverlapClass c) {
  switch (c) {
    case OverlapClass::Disjoint: return "disjoint";
    case OverlapClass::SemiOverlap: return "semi";
    case OverlapClass::FullOverlap: return "full";
    case OverlapClass::Invalid: return "invalid";
  }
  return "?";
}

std::vector<SatCoord> corridor_cells(const Frame& f, SatCoord corner) {
  std::vector<SatCoord> cells;
  const bool plane_first = corner.n == f.s.n && corner.p != f.s.p;
  auto walk_indices = [&](int p) {
    for (int i = 0; i < f.indices.length; ++i) cells.push_back({p, (f.indices.start + i) % f.indices.ring});
  };
  auto walk_planes = [&](int n) {
    for (int i = 0; i < f.planes.length; ++i) cells.push_back({(f.planes.start + i) % f.planes.ring, n});
  };
  if (plane_first) {
    walk_planes(f.s.n);
    walk_indices(f.d.p);
  } else {
    walk_indices(f.s.p);
    walk_planes(f.d.n);
  }
  std::sort(cells.begin(), cells.end());
  cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
  return cells;
}

OverlapClass classify_overlap(const Frame& frame, const Nlrp& nlrp, const RiskSet& risk) {
  if (risk.contains(frame.s) || risk.contains(frame.d) || nlrp.interior(frame.s) || nlrp.interior(frame.d))
    return OverlapClass::Invalid;
  const auto frames = nlrp.frames();
  const bool touches = std::any_of(frames.begin(), frames.end(), [&](const NlrpFrame& fr) {
    return intervals_meet(frame.planes, fr.planes) && intervals_meet(frame.indices, fr.indices);
  });
  if (!touches) return OverlapClass::Disjoint;
  for (SatCoord corner : {SatCoord{frame.s.p, frame.d.n}, SatCoord{frame.d.p, frame.s.n}})
    if (avoids_interior(corridor_cells(frame, corner), nlrp)) return OverlapClass::SemiOverlap;
  return OverlapClass::FullOverlap;
}

PlanningContext::PlanningContext(const Snapshot& snapshot, RiskSet risk, Nlrp nlrp, PlanningOptions options)
    : snapshot_(&snapshot), risk_(std::move(risk)), nlrp_(std::move(nlrp)), options_(options) {
  if (options_.sigma < 0 || options_.sigma > 2) throw Error(ErrorCode::InvalidConfig, "sigma must be 0, 1 or 2");
  if (options_.theta < 0) throw Error(ErrorCode::InvalidConfig, "theta must be non-negative");
  const auto& g = snapshot.graph();
  risk_nodes_ = risk_.nodes(snapshot.grid());
  risky_.assign(static_cast<std::size_t>(g.node_count()), 0);
  for (NodeId v : risk_nodes_) risky_[static_cast<std::size_t>(v)] = 1;
  if (!risk_nodes_.empty()) {
    risk_hops_ = hop_distances(g, risk_nodes_, snapshot.grid().size());
    risk_tree_ = dijkstra(g, risk_nodes_);
  }
}

bool PlanningContext::is_risky(NodeId v) const { return risky_[static_cast<std::size_t>(v)] != 0; }

double PlanningContext::risk_delay(NodeId v) const {
  return risk_tree_ ? risk_tree_->distance(v) : kInfinity;
}

const ShortestPathTree& PlanningContext::tree(NodeId source) const {
  auto it = trees_.find(source);
  if (it == trees_.end()) it = trees_.emplace(source, dijkstra(snapshot_->graph(), source)).first;
  return it->second;
}

double detour_threshold(const Graph& g, std::span<const NodeId> segment_nodes, std::span<const NodeId> risk_nodes) {
  if (segment_nodes.empty()) throw Error(ErrorCode::InvalidConfig, "segment has no nodes");
  if (risk_nodes.empty()) return kInfinity;
  for (NodeId v : segment_nodes)
    if (std::find(risk_nodes.begin(), risk_nodes.end(), v) != risk_nodes.end())
      throw Error(ErrorCode::ZeroThreshold, "segment node " + std::to_string(v) + " is a risk satellite");
  const auto tree = dijkstra(g, risk_nodes);
  double best = kInfinity;
  for (NodeId v : segment_nodes) best = std::min(best, tree.distance(v));
  return 2.0 * best;
}

double detour_threshold(const PlanningContext& ctx, std::span<const NodeId> segment_nodes) {
  if (segment_nodes.empty()) throw Error(ErrorCode::InvalidConfig, "segment has no nodes");
  double best = kInfinity;
  for (NodeId v : segment_nodes) {
    if (ctx.is_risky(v))
      throw Error(ErrorCode::ZeroThreshold, "segment node " + std::to_string(v) + " is a risk satellite");
    best = std::min(best, ctx.risk_delay(v));
  }
  return 2.0 * best;
}

std::optional<RelayPlan> evaluate_relays(const PlanningContext& ctx, SatCoord sat_s, SatCoord sat_d,
                                         const std::vector<SatCoord>& relays) {
  const auto& grid = ctx.snapshot().grid();
  const auto& opts = ctx.options();
  if (static_cast<int>(relays.size()) > opts.sigma) return std::nullopt;
  for (std::size_t i = 0; i < relays.size(); ++i) {
    const auto r = relays[i];
    if (!grid.contains(r) || r == sat_s || r == sat_d || ctx.risk().contains(r)) return std::nullopt;
    for (std::size_t j = 0; j < i; ++j)
      if (relays[j] == r) return std::nullopt;
  }

  std::vector<NodeId> waypoints{grid.node_of(sat_s)};
  for (auto r : relays) waypoints.push_back(grid.node_of(r));
  waypoints.push_back(grid.node_of(sat_d));

  RelayPlan plan;
  plan.t = ctx.snapshot().time();
  plan.grid = grid;
  plan.sat_s = sat_s;
  plan.sat_d = sat_d;
  plan.relays = relays;
  std::set<NodeId> seen;
  for (std::size_t i = 0; i + 1 < waypoints.size(); ++i) {
    const NodeId a = waypoints[i], b = waypoints[i + 1];
    const auto& from_a = ctx.tree(a);
    if (!from_a.reachable(b)) return std::nullopt;
    Path seg = from_a.path_to(b);
    for (std::size_t k = 0; k < seg.nodes.size(); ++k) {
      const NodeId v = seg.nodes[k];
      // Segment joints appear once in the concatenation.
      if (i > 0 && k == 0) continue;
      if (!seen.insert(v).second) return std::nullopt;
      if (!ctx.risk_nodes().empty()) {
        const int h = ctx.risk_hops(v);
        if (h >= 0 && h < opts.theta) return std::nullopt;
      }
      plan.path.nodes.push_back(v);
    }
    if (!ctx.risk_nodes().empty()) {
      const auto ecs = equal_cost_node_set(from_a, ctx.tree(b), b, opts.rel_tol);
      if (std::any_of(ecs.begin(), ecs.end(), [&](NodeId v) { return ctx.is_risky(v); })) return std::nullopt;
    }
    plan.path.total_delay += seg.total_delay;
    plan.thresholds.push_back(detour_threshold(ctx, seg.nodes));
    plan.segments.push_back(std::move(seg));
  }
  return plan;
}

std::vector<std::string> check_constraints(const PlanningContext& ctx, const RelayPlan& plan, double rel_tol) {
  std::vector<std::string> issues;
  const auto& grid = ctx.snapshot().grid();
  const auto& g = ctx.snapshot().graph();
  const auto& nodes = plan.path.nodes;

  if (static_cast<int>(plan.relays.size()) > ctx.options().sigma) issues.push_back("relay count exceeds sigma");
  if (plan.segments.size() != plan.relays.size() + 1) issues.push_back("segment count mismatch");
  if (plan.thresholds.size() != plan.segments.size()) issues.push_back("threshold count mismatch");
  if (nodes.empty() || nodes.front() != grid.node_of(plan.sat_s) || nodes.back() != grid.node_of(plan.sat_d))
    issues.push_back("path endpoints differ from the access satellites");

  // Order: relays appear along the path in plan order.
  std::size_t cursor = 0;
  for (auto r : plan.relays) {
    if (ctx.risk().contains(r)) issues.push_back("relay is a risk satellite");
    const auto it = std::find(nodes.begin() + static_cast<std::ptrdiff_t>(cursor), nodes.end(), grid.node_of(r));
    if (it == nodes.end()) {
      issues.push_back("relay out of order or missing from path");
      break;
    }
    cursor = static_cast<std::size_t>(it - nodes.begin()) + 1;
  }

  std::set<NodeId> seen;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!seen.insert(nodes[i]).second) issues.push_back("node repeats on path");
    if (i > 0 && !g.link_delay(nodes[i - 1], nodes[i])) issues.push_back("consecutive nodes not linked");
    if (ctx.is_risky(nodes[i])) issues.push_back("path crosses a risk satellite");
    const int h = ctx.risk_hops(nodes[i]);
    if (!ctx.risk_nodes().empty() && h >= 0 && h < ctx.options().theta) issues.push_back("theta margin violated");
  }

  for (const auto& seg : plan.segments) {
    if (seg.nodes.empty()) continue;
    const NodeId a = seg.nodes.front(), b = seg.nodes.back();
    const auto ecs = equal_cost_node_set(ctx.tree(a), ctx.tree(b), b, rel_tol);
    if (std::any_of(ecs.begin(), ecs.end(), [&](NodeId v) { return ctx.is_risky(v); }))
      issues.push_back("equal-cost set meets the risk set");
  }
  return issues;
}

RelayPlan select_relays(const PlanningContext& ctx, SatCoord sat_s, SatCoord sat_d) {
  const Frame f = make_frame(ctx.snapshot().grid(), sat_s, sat_d);
  const auto& nlrp = ctx.nlrp();
  const auto cls = classify_overlap(f, nlrp, ctx.risk());
  if (cls == OverlapClass::Invalid)
    throw Error(ErrorCode::PlanInfeasible, "an access satellite sits inside the low-risk frame");

  std::optional<RelayPlan> plan;
  if (ctx.risk().empty()) {
    plan = evaluate_relays(ctx, sat_s, sat_d, {});
  } else {
    const SatCoord c1{f.s.p, f.d.n}, c2{f.d.p, f.s.n};
    switch (cls) {
      case OverlapClass::Disjoint: {
        if (f.degenerate()) {
          plan = evaluate_relays(ctx, sat_s, sat_d, {});
          break;
        }
        const bool second_farther = hops_to_nlrp(c2, nlrp) > hops_to_nlrp(c1, nlrp);
        for (auto c : second_farther ? std::vector{c2, c1} : std::vector{c1, c2}) {
          plan = evaluate_relays(ctx, sat_s, sat_d, corner_candidate(f, c));
          if (plan) break;
        }
        break;
      }
      case OverlapClass::SemiOverlap: {
        std::vector<Candidate> cands;
        for (auto c : {c1, c2})
          if (avoids_interior(corridor_cells(f, c), nlrp)) cands.push_back(corner_candidate(f, c));
        plan = best_of(ctx, f, cands);
        break;
      }
      case OverlapClass::FullOverlap:
        plan = best_of(ctx, f, border_pairs(f, nlrp));
        break;
      case OverlapClass::Invalid:
        break;
    }
    if (!plan) plan = best_of(ctx, f, enlarged_corner_plans(f, nlrp, ctx.options().sigma));
  }
  if (!plan) throw Error(ErrorCode::PlanInfeasible, "no corner plan satisfies the constraints");
  plan->overlap = cls;
  return std::move(*plan);
}

int mirror_index(int n, int per_plane) { return (per_plane - n) % per_plane; }

AlignedScene transform_opposite_direction(const SatState& s, const SatState& d, const Nlrp& nlrp, int per_plane) {
  AlignedScene out;
  out.reference = s.direction;
  out.s = s.coord;
  out.d = d.coord;
  const Direction other = s.direction == Direction::NEBound ? Direction::SEBound : Direction::NEBound;
  out.reference_frame = nlrp.of(s.direction);
  if (d.direction == s.direction) {
    out.mirrored_frame = nlrp.of(other);
    return out;
  }
  out.d.n = mirror_index(d.coord.n, per_plane);
  if (const auto& f = nlrp.of(other)) {
    NlrpFrame m = *f;
    m.indices.start = mirror_index(f->indices.last(), per_plane);
    out.mirrored_frame = m;
  }
  return out;
}

}  // namespace leoveri
