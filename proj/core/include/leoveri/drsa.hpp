#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "leoveri/riskmap.hpp"
#include "leoveri/routing.hpp"

namespace leoveri {

// Logical rectangle spanned by sat_s and sat_d, taking the shorter arc on
// each ring (ties go forward from sat_s).
struct Frame {
  SatCoord s;
  SatCoord d;
  IndexInterval planes;
  IndexInterval indices;

  bool degenerate() const { return s.p == d.p || s.n == d.n; }
  bool contains(SatCoord c) const { return planes.contains(c.p) && indices.contains(c.n); }
};

Frame make_frame(const GridShape& grid, SatCoord s, SatCoord d);

enum class OverlapClass { Disjoint, SemiOverlap, FullOverlap, Invalid };

const char* to_string(OverlapClass c);

// Cells visited by the L-shaped corridor s -> corner -> d along the frame arcs.
std::vector<SatCoord> corridor_cells(const Frame& frame, SatCoord corner);

OverlapClass classify_overlap(const Frame& frame, const Nlrp& nlrp, const RiskSet& risk = {});

struct PlanningOptions {
  int theta = 1;
  int sigma = 2;
  double rel_tol = kDefaultEqualCostTolerance;
};

// Per-slot state shared by every pair planned on one snapshot: risk members,
// hop distances from the risk set, the risk-rooted delay tree, and a cache of
// single-source trees.
class PlanningContext {
 public:
  PlanningContext(const Snapshot& snapshot, RiskSet risk, Nlrp nlrp, PlanningOptions options);

  const Snapshot& snapshot() const { return *snapshot_; }
  const RiskSet& risk() const { return risk_; }
  const Nlrp& nlrp() const { return nlrp_; }
  const PlanningOptions& options() const { return options_; }
  const std::vector<NodeId>& risk_nodes() const { return risk_nodes_; }
  bool is_risky(NodeId v) const;

  // Hop count from the nearest risk satellite; -1 when unreachable or no risk.
  int risk_hops(NodeId v) const { return risk_hops_.empty() ? -1 : risk_hops_[static_cast<std::size_t>(v)]; }
  // Shortest delay to the nearest risk satellite; +inf without risk.
  double risk_delay(NodeId v) const;
  // Multi-source tree rooted at the risk set; null without risk.
  const ShortestPathTree* risk_tree() const { return risk_tree_ ? &*risk_tree_ : nullptr; }

  const ShortestPathTree& tree(NodeId source) const;

 private:
  const Snapshot* snapshot_;
  RiskSet risk_;
  Nlrp nlrp_;
  PlanningOptions options_;
  std::vector<NodeId> risk_nodes_;
  std::vector<char> risky_;
  std::vector<int> risk_hops_;
  std::optional<ShortestPathTree> risk_tree_;
  mutable std::map<NodeId, ShortestPathTree> trees_;
};

struct RelayPlan {
  double t = 0.0;
  GridShape grid;
  std::string src;
  std::string dst;
  SatCoord sat_s;
  SatCoord sat_d;
  OverlapClass overlap = OverlapClass::Disjoint;
  std::vector<SatCoord> relays;
  std::vector<double> thresholds;  // one per segment, seconds; +inf without risk
  std::vector<Path> segments;      // sat_s -> r1 -> ... -> sat_d
  Path path;                       // concatenation of the segments

  std::size_t segment_count() const { return segments.size(); }
};

// Twice the shortest delay from any segment node to any risk node.
// Returns +inf for an empty risk list. Throws Error(ZeroThreshold) if a
// segment node is itself risky.
double detour_threshold(const Graph& g, std::span<const NodeId> segment_nodes, std::span<const NodeId> risk_nodes);
double detour_threshold(const PlanningContext& ctx, std::span<const NodeId> segment_nodes);

// Builds and checks the plan sat_s -> relays -> sat_d. Returns nullopt when
// any constraint fails.
std::optional<RelayPlan> evaluate_relays(const PlanningContext& ctx, SatCoord sat_s, SatCoord sat_d,
                                         const std::vector<SatCoord>& relays);

// Human-readable list of violated constraints; empty means the plan is valid.
std::vector<std::string> check_constraints(const PlanningContext& ctx, const RelayPlan& plan, double rel_tol);

// Throws Error(PlanInfeasible).
RelayPlan select_relays(const PlanningContext& ctx, SatCoord sat_s, SatCoord sat_d);

// Reflects the endpoint and low-risk frame of the other direction into the
// reference direction's lattice by mirroring the in-orbit index.
struct AlignedScene {
  Direction reference = Direction::NEBound;
  SatCoord s;
  SatCoord d;
  std::optional<NlrpFrame> reference_frame;
  std::optional<NlrpFrame> mirrored_frame;
};

int mirror_index(int n, int per_plane);
AlignedScene transform_opposite_direction(const SatState& s, const SatState& d, const Nlrp& nlrp, int per_plane);

}  // namespace leoveri
