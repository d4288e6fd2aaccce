#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "leoveri/constellation.hpp"
#include "leoveri/geo.hpp"

namespace leoveri {

using NodeId = std::int32_t;

struct Edge {
  NodeId to = 0;
  double delay_s = 0.0;
};

struct Link {
  NodeId a = 0;
  NodeId b = 0;
  double delay_s = 0.0;
};

// Undirected weighted graph; adjacency lists are kept sorted by neighbor id.
class Graph {
 public:
  Graph() = default;
  explicit Graph(int node_count) : adjacency_(static_cast<std::size_t>(node_count)) {}

  int node_count() const { return static_cast<int>(adjacency_.size()); }
  void add_link(NodeId a, NodeId b, double delay_s);
  std::span<const Edge> neighbors(NodeId v) const { return adjacency_[static_cast<std::size_t>(v)]; }
  std::optional<double> link_delay(NodeId a, NodeId b) const;
  std::size_t link_count() const;

 private:
  std::vector<std::vector<Edge>> adjacency_;
};

enum class GroundRole { Terminal, Station };

struct GroundEntity {
  std::string id;
  LatLon location;
  GroundRole role = GroundRole::Terminal;
};

// Logical grid dimensions; node id of (p, n) is p * per_plane + n.
struct GridShape {
  int planes = 0;
  int per_plane = 0;

  int size() const { return planes * per_plane; }
  NodeId node_of(SatCoord c) const { return c.p * per_plane + c.n; }
  SatCoord coord_of(NodeId v) const { return {v / per_plane, v % per_plane}; }
  bool contains(SatCoord c) const { return c.p >= 0 && c.p < planes && c.n >= 0 && c.n < per_plane; }
};

struct TopologyOptions {
  double min_elevation_deg = 25.0;
  // Keep the plane P-1 <-> plane 0 ISLs.
  bool keep_seam = true;
};

// Straight-line distance over the speed of light.
double link_delay(Vec3 a, Vec3 b);

// +Grid: (p, n) links to (p, n +- 1 mod H) and (p +- 1 mod P, n).
std::vector<Link> build_grid_isls(std::span<const SatState> states, GridShape grid, bool keep_seam = true);

// Nearest satellite whose elevation clears the mask; ties go to the lower (p, n).
// Throws Error(NoVisibleSatellite).
SatCoord access_satellite(std::span<const SatState> states, LatLon location, double min_elevation_deg);

struct GroundAttachment {
  std::vector<std::optional<SatCoord>> access;  // parallel to the ground list
  std::vector<double> gsl_delay_s;               // 0 where access is missing
  std::size_t coverage_gaps = 0;
};

GroundAttachment attach_ground(std::span<const SatState> states, std::span<const GroundEntity> ground,
                               double min_elevation_deg);

// Immutable network graph for one time slot. Satellites occupy node ids
// [0, P*H); ground entity i is node P*H + i.
class Snapshot {
 public:
  static Snapshot build(const Shell& shell, double t, std::vector<GroundEntity> ground,
                        const TopologyOptions& options = {});

  // Assembles a snapshot from explicit parts (synthetic scenes, tests).
  static Snapshot from_parts(GridShape grid, double t, std::vector<SatState> sats,
                             std::vector<GroundEntity> ground, std::vector<std::optional<SatCoord>> access,
                             Graph graph);

  double time() const { return t_; }
  const GridShape& grid() const { return grid_; }
  const Graph& graph() const { return graph_; }
  std::span<const SatState> satellites() const { return sats_; }
  std::span<const GroundEntity> ground() const { return ground_; }

  const SatState& sat(SatCoord c) const { return sats_[static_cast<std::size_t>(grid_.node_of(c))]; }
  NodeId sat_node(SatCoord c) const { return grid_.node_of(c); }
  bool is_satellite(NodeId v) const { return v >= 0 && v < grid_.size(); }
  SatCoord coord_of(NodeId v) const { return grid_.coord_of(v); }

  NodeId ground_node(std::size_t ground_index) const {
    return static_cast<NodeId>(grid_.size() + static_cast<int>(ground_index));
  }
  std::optional<std::size_t> ground_index(std::string_view id) const;
  std::optional<SatCoord> access(std::size_t ground_index) const { return access_[ground_index]; }

  std::size_t coverage_gaps() const { return coverage_gaps_; }

 private:
  double t_ = 0.0;
  GridShape grid_;
  std::vector<SatState> sats_;
  std::vector<GroundEntity> ground_;
  std::vector<std::optional<SatCoord>> access_;
  Graph graph_;
  std::size_t coverage_gaps_ = 0;
};

// CSV ingestion. Ground rows are `id,lat,lon,role` (role: terminal|station);
// pair rows are `src_id,dst_id`. A leading header row and '#' comments are skipped.
std::vector<GroundEntity> load_ground_csv(const std::filesystem::path& path);
std::vector<GroundEntity> parse_ground_csv(std::string_view text);
std::vector<std::pair<std::string, std::string>> load_pairs_csv(const std::filesystem::path& path);
std::vector<std::pair<std::string, std::string>> parse_pairs_csv(std::string_view text);

}  // namespace leoveri
