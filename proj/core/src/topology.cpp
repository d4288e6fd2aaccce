#include "leoveri/topology.hpp"

#include <algorithm>
#include <set>

#include "leoveri/error.hpp"
#include "text_util.hpp"

namespace leoveri {

void Graph::add_link(NodeId a, NodeId b, double delay_s) {
  auto insert = [](std::vector<Edge>& list, NodeId to, double d) {
    auto it = std::lower_bound(list.begin(), list.end(), to,
                               [](const Edge& e, NodeId id) { return e.to < id; });
    list.insert(it, Edge{to, d});
  };
  insert(adjacency_[static_cast<std::size_t>(a)], b, delay_s);
  insert(adjacency_[static_cast<std::size_t>(b)], a, delay_s);
}

std::optional<double> Graph::link_delay(NodeId a, NodeId b) const {
  const auto list = neighbors(a);
  auto it = std::lower_bound(list.begin(), list.end(), b,
                             [](const Edge& e, NodeId id) { return e.to < id; });
  if (it == list.end() || it->to != b) return std::nullopt;
  return it->delay_s;
}

std::size_t Graph::link_count() const {
  std::size_t twice = 0;
  for (const auto& list : adjacency_) twice += list.size();
  return twice / 2;
}

double link_delay(Vec3 a, Vec3 b) { return distance(a, b) / kLightSpeedKmPerS; }

std::vector<Link> build_grid_isls(std::span<const SatState> states, GridShape grid, bool keep_seam) {
  std::set<std::pair<NodeId, NodeId>> seen;
  std::vector<Link> links;
  links.reserve(states.size() * 2);
  auto add = [&](SatCoord a, SatCoord b) {
    NodeId u = grid.node_of(a), v = grid.node_of(b);
    if (u == v) return;
    if (u > v) std::swap(u, v);
    if (!seen.emplace(u, v).second) return;
    links.push_back({u, v, link_delay(states[static_cast<std::size_t>(u)].position,
                                      states[static_cast<std::size_t>(v)].position)});
  };
  for (int p = 0; p < grid.planes; ++p) {
    for (int n = 0; n < grid.per_plane; ++n) {
      add({p, n}, {p, (n + 1) % grid.per_plane});
      const bool seam = p + 1 == grid.planes;
      if (!seam || keep_seam) add({p, n}, {(p + 1) % grid.planes, n});
    }
  }
  return links;
}

namespace {

std::optional<std::size_t> nearest_visible(std::span<const SatState> states, LatLon location,
                                           double min_elevation_deg) {
  const Vec3 ground = to_cartesian(location);
  std::optional<std::size_t> best;
  double best_range = 0.0;
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (elevation_deg(ground, states[i].position) < min_elevation_deg) continue;
    const double range = distance(ground, states[i].position);
    if (!best || range < best_range || (range == best_range && states[i].coord < states[*best].coord)) {
      best = i;
      best_range = range;
    }
  }
  return best;
}

}  // namespace

SatCoord access_satellite(std::span<const SatState> states, LatLon location, double min_elevation_deg) {
  const auto best = nearest_visible(states, location, min_elevation_deg);
  if (!best)
    throw Error(ErrorCode::NoVisibleSatellite,
                "no satellite above " + std::to_string(min_elevation_deg) + " deg elevation");
  return states[*best].coord;
}

GroundAttachment attach_ground(std::span<const SatState> states, std::span<const GroundEntity> ground,
                               double min_elevation_deg) {
  if (ground.empty()) throw Error(ErrorCode::InvalidConfig, "ground list is empty");
  GroundAttachment out;
  out.access.resize(ground.size());
  out.gsl_delay_s.assign(ground.size(), 0.0);
  for (std::size_t i = 0; i < ground.size(); ++i) {
    const auto best = nearest_visible(states, ground[i].location, min_elevation_deg);
    if (!best) {
      ++out.coverage_gaps;
      continue;
    }
    out.access[i] = states[*best].coord;
    out.gsl_delay_s[i] = link_delay(to_cartesian(ground[i].location), states[*best].position);
  }
  return out;
}

Snapshot Snapshot::build(const Shell& shell, double t, std::vector<GroundEntity> ground,
                         const TopologyOptions& options) {
  const GridShape grid{shell.planes(), shell.sats_per_plane()};
  auto sats = shell.propagate(t);
  Graph graph(grid.size() + static_cast<int>(ground.size()));
  for (const auto& l : build_grid_isls(sats, grid, options.keep_seam)) graph.add_link(l.a, l.b, l.delay_s);

  std::vector<std::optional<SatCoord>> access(ground.size());
  std::size_t gaps = 0;
  if (!ground.empty()) {
    auto attached = attach_ground(sats, ground, options.min_elevation_deg);
    for (std::size_t i = 0; i < ground.size(); ++i) {
      if (!attached.access[i]) continue;
      graph.add_link(grid.size() + static_cast<int>(i), grid.node_of(*attached.access[i]),
                     attached.gsl_delay_s[i]);
    }
    access = std::move(attached.access);
    gaps = attached.coverage_gaps;
  }

  Snapshot s = from_parts(grid, t, std::move(sats), std::move(ground), std::move(access), std::move(graph));
  s.coverage_gaps_ = gaps;
  return s;
}

Snapshot Snapshot::from_parts(GridShape grid, double t, std::vector<SatState> sats,
                              std::vector<GroundEntity> ground, std::vector<std::optional<SatCoord>> access,
                              Graph graph) {
  if (static_cast<int>(sats.size()) != grid.size())
    throw Error(ErrorCode::InvalidConfig, "satellite list does not match grid shape");
  if (access.size() != ground.size()) throw Error(ErrorCode::InvalidConfig, "access map size mismatch");
  if (graph.node_count() != grid.size() + static_cast<int>(ground.size()))
    throw Error(ErrorCode::InvalidConfig, "graph node count mismatch");
  Snapshot s;
  s.t_ = t;
  s.grid_ = grid;
  s.sats_ = std::move(sats);
  s.ground_ = std::move(ground);
  s.access_ = std::move(access);
  s.graph_ = std::move(graph);
  s.coverage_gaps_ = static_cast<std::size_t>(std::count(s.access_.begin(), s.access_.end(), std::nullopt));
  return s;
}

std::optional<std::size_t> Snapshot::ground_index(std::string_view id) const {
  for (std::size_t i = 0; i < ground_.size(); ++i)
    if (ground_[i].id == id) return i;
  return std::nullopt;
}

namespace {

bool skip_line(std::string_view line) {
  line = detail::trim(line);
  return line.empty() || line.front() == '#';
}

}  // namespace

std::vector<GroundEntity> parse_ground_csv(std::string_view text) {
  std::vector<GroundEntity> out;
  bool first = true;
  for (auto raw : detail::lines(text)) {
    if (skip_line(raw)) continue;
    const auto cols = detail::split(detail::trim(raw), ',');
    if (first && !cols.empty() && cols[0] == "id") {
      first = false;
      continue;
    }
    first = false;
    if (cols.size() != 4)
      throw Error(ErrorCode::InvalidConfig, "ground row needs id,lat,lon,role: '" + std::string(raw) + "'");
    GroundEntity g;
    g.id = std::string(cols[0]);
    g.location.lat_deg = detail::parse_double(cols[1], "latitude");
    g.location.lon_deg = normalize_lon(detail::parse_double(cols[2], "longitude"));
    if (std::abs(g.location.lat_deg) > 90.0)
      throw Error(ErrorCode::InvalidConfig, "latitude out of range for " + g.id);
    if (cols[3] == "station") {
      g.role = GroundRole::Station;
    } else if (cols[3] == "terminal") {
      g.role = GroundRole::Terminal;
    } else {
      throw Error(ErrorCode::InvalidConfig, "unknown ground role '" + std::string(cols[3]) + "'");
    }
    out.push_back(std::move(g));
  }
  return out;
}

std::vector<GroundEntity> load_ground_csv(const std::filesystem::path& path) {
  return parse_ground_csv(detail::read_file(path));
}

std::vector<std::pair<std::string, std::string>> parse_pairs_csv(std::string_view text) {
  std::vector<std::pair<std::string, std::string>> out;
  bool first = true;
  for (auto raw : detail::lines(text)) {
    if (skip_line(raw)) continue;
    const auto cols = detail::split(detail::trim(raw), ',');
    if (first && !cols.empty() && cols[0] == "src_id") {
      first = false;
      continue;
    }
    first = false;
    if (cols.size() != 2)
      throw Error(ErrorCode::InvalidConfig, "pair row needs src_id,dst_id: '" + std::string(raw) + "'");
    out.emplace_back(std::string(cols[0]), std::string(cols[1]));
  }
  return out;
}

std::vector<std::pair<std::string, std::string>> load_pairs_csv(const std::filesystem::path& path) {
  return parse_pairs_csv(detail::read_file(path));
}

}  // namespace leoveri
