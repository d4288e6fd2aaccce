#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "leoveri/geo.hpp"
#include "leoveri/topology.hpp"

namespace leoveri {

// Geographic polygon with great-circle edges.
class RiskArea {
 public:
  RiskArea(std::string name, std::vector<LatLon> polygon);

  const std::string& name() const { return name_; }
  const std::vector<LatLon>& polygon() const { return polygon_; }

  // Spherical point-in-polygon. Points on the far side of the globe from the
  // polygon are always outside.
  bool contains(LatLon p) const;

  static RiskArea egypt();
  static RiskArea north_korea();
  // "egypt" / "north_korea"; Error(InvalidConfig) otherwise.
  static RiskArea preset(std::string_view name);

  // First non-comment line is the name, then one `lat,lon` row per vertex.
  static RiskArea parse(std::string_view text);
  static RiskArea load(const std::filesystem::path& path);

 private:
  std::string name_;
  std::vector<LatLon> polygon_;
  Vec3 center_;
  Vec3 e1_;
  Vec3 e2_;
  std::vector<std::pair<double, double>> projected_;
};

struct RiskSet {
  double t = 0.0;
  std::vector<SatCoord> ne;  // sorted
  std::vector<SatCoord> se;  // sorted

  bool empty() const { return ne.empty() && se.empty(); }
  std::size_t size() const { return ne.size() + se.size(); }
  bool contains(SatCoord c) const;
  const std::vector<SatCoord>& of(Direction d) const { return d == Direction::NEBound ? ne : se; }
  // Node ids of every member, ascending.
  std::vector<NodeId> nodes(const GridShape& grid) const;

  bool same_members(const RiskSet& o) const { return ne == o.ne && se == o.se; }
};

// Members are satellites whose subpoint lies inside the area, split by direction.
RiskSet risk_satellites(std::span<const SatState> states, const RiskArea& area, double t);
RiskSet risk_satellites(const Snapshot& snapshot, const RiskArea& area);

// Contiguous run of `length` indices on a ring of size `ring`, starting at
// `start` and wrapping.
struct IndexInterval {
  int start = 0;
  int length = 1;
  int ring = 1;

  int first() const { return start; }
  int last() const { return (start + length - 1) % ring; }
  int offset(int x) const { return ((x - start) % ring + ring) % ring; }
  bool contains(int x) const { return offset(x) < length; }
  bool interior(int x) const {
    const int o = offset(x);
    return o > 0 && o < length - 1;
  }
  friend bool operator==(const IndexInterval&, const IndexInterval&) = default;
};

// Shortest wrapped interval covering all `indices` (non-empty). Among equal
// lengths the lowest start wins.
IndexInterval minimal_cover(std::vector<int> indices, int ring);

// One direction's four low-risk planes. Plane borders are p_l/p_r, index
// borders n_b/n_u; the interior is everything strictly between them.
struct NlrpFrame {
  IndexInterval planes;
  IndexInterval indices;

  int p_l() const { return planes.first(); }
  int p_r() const { return planes.last(); }
  int n_b() const { return indices.first(); }
  int n_u() const { return indices.last(); }

  bool contains(SatCoord c) const { return planes.contains(c.p) && indices.contains(c.n); }
  bool interior(SatCoord c) const { return planes.interior(c.p) && indices.interior(c.n); }
  friend bool operator==(const NlrpFrame&, const NlrpFrame&) = default;
};

struct Nlrp {
  int theta = 0;
  std::optional<NlrpFrame> ne;
  std::optional<NlrpFrame> se;

  const std::optional<NlrpFrame>& of(Direction d) const { return d == Direction::NEBound ? ne : se; }
  std::vector<NlrpFrame> frames() const;
  bool interior(SatCoord c) const;
  bool contains(SatCoord c) const;
  friend bool operator==(const Nlrp&, const Nlrp&) = default;
};

// Throws Error(RiskTooLarge) when a widened interval would wrap the whole ring.
Nlrp compute_nlrp(const GridShape& grid, const RiskSet& risk, int theta);
inline Nlrp compute_nlrp(const Snapshot& snapshot, const RiskSet& risk, int theta) {
  return compute_nlrp(snapshot.grid(), risk, theta);
}

}  // namespace leoveri
