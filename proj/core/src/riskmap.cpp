#include "leoveri/riskmap.hpp"

#include <algorithm>

#include "leoveri/error.hpp"
#include "text_util.hpp"

namespace leoveri {

RiskArea::RiskArea(std::string name, std::vector<LatLon> polygon)
    : name_(std::move(name)), polygon_(std::move(polygon)) {
  if (polygon_.size() < 3) throw Error(ErrorCode::InvalidConfig, "risk polygon needs at least 3 vertices");
  Vec3 sum;
  for (const auto& v : polygon_) sum = sum + to_cartesian(v, 1.0);
  if (sum.norm() < 1e-9) throw Error(ErrorCode::InvalidConfig, "risk polygon has no interior center");
  center_ = sum.unit();
  // Gnomonic frame at the center: great-circle edges become straight lines.
  const Vec3 pole{0.0, 0.0, 1.0};
  const Vec3 ref = std::abs(center_.dot(pole)) > 0.9 ? Vec3{1.0, 0.0, 0.0} : pole;
  e1_ = ref.cross(center_).unit();
  e2_ = center_.cross(e1_);
  for (const auto& v : polygon_) {
    const Vec3 u = to_cartesian(v, 1.0);
    const double w = u.dot(center_);
    if (w <= 0.0) throw Error(ErrorCode::InvalidConfig, "risk polygon spans more than a hemisphere");
    projected_.emplace_back(u.dot(e1_) / w, u.dot(e2_) / w);
  }
}

bool RiskArea::contains(LatLon p) const {
  const Vec3 u = to_cartesian(p, 1.0);
  const double w = u.dot(center_);
  if (w <= 0.0) return false;
  const double x = u.dot(e1_) / w;
  const double y = u.dot(e2_) / w;
  bool inside = false;
  for (std::size_t i = 0, j = projected_.size() - 1; i < projected_.size(); j = i++) {
    const auto [xi, yi] = projected_[i];
    const auto [xj, yj] = projected_[j];
    if ((yi > y) != (yj > y) && x < (xj - xi) * (y - yi) / (yj - yi) + xi) inside = !inside;
  }
  return inside;
}

RiskArea RiskArea::egypt() {
  return RiskArea("egypt", {{31.6, 25.1},
                            {31.5, 29.0},
                            {31.1, 31.5},
                            {31.3, 32.3},
                            {31.3, 34.2},
                            {29.5, 34.9},
                            {27.7, 34.3},
                            {27.3, 33.8},
                            {24.0, 35.6},
                            {22.0, 36.9},
                            {22.0, 25.0}});
}

RiskArea RiskArea::north_korea() {
  return RiskArea("north_korea", {{38.0, 124.7},
                                  {39.8, 124.3},
                                  {40.9, 126.0},
                                  {41.8, 127.5},
                                  {42.0, 128.9},
                                  {42.9, 129.7},
                                  {42.3, 130.7},
                                  {40.8, 129.7},
                                  {39.4, 127.5},
                                  {38.6, 128.3},
                                  {37.9, 126.7}});
}

RiskArea RiskArea::preset(std::string_view name) {
  if (name == "egypt") return egypt();
  if (name == "north_korea") return north_korea();
  throw Error(ErrorCode::InvalidConfig, "unknown risk area preset '" + std::string(name) + "'");
}

RiskArea RiskArea::parse(std::string_view text) {
  std::optional<std::string> name;
  std::vector<LatLon> vertices;
  for (auto raw : detail::lines(text)) {
    const auto line = detail::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    if (!name) {
      name = std::string(line);
      continue;
    }
    const auto cols = detail::split(line, ',');
    if (cols.size() != 2) throw Error(ErrorCode::InvalidConfig, "vertex row needs lat,lon: '" + std::string(line) + "'");
    vertices.push_back({detail::parse_double(cols[0], "latitude"),
                        normalize_lon(detail::parse_double(cols[1], "longitude"))});
  }
  if (!name) throw Error(ErrorCode::InvalidConfig, "risk polygon file is empty");
  return RiskArea(*name, std::move(vertices));
}

RiskArea RiskArea::load(const std::filesystem::path& path) { return parse(detail::read_file(path)); }

bool RiskSet::contains(SatCoord c) const {
  return std::binary_search(ne.begin(), ne.end(), c) || std::binary_search(se.begin(), se.end(), c);
}

std::vector<NodeId> RiskSet::nodes(const GridShape& grid) const {
  std::vector<NodeId> out;
  out.reserve(size());
  for (auto c : ne) out.push_back(grid.node_of(c));
  for (auto c : se) out.push_back(grid.node_of(c));
  std::sort(out.begin(), out.end());
  return out;
}

RiskSet risk_satellites(std::span<const SatState> states, const RiskArea& area, double t) {
  RiskSet rs;
  rs.t = t;
  for (const auto& s : states) {
    if (!area.contains(s.subpoint)) continue;
    (s.direction == Direction::NEBound ? rs.ne : rs.se).push_back(s.coord);
  }
  std::sort(rs.ne.begin(), rs.ne.end());
  std::sort(rs.se.begin(), rs.se.end());
  return rs;
}

RiskSet risk_satellites(const Snapshot& snapshot, const RiskArea& area) {
  return risk_satellites(snapshot.satellites(), area, snapshot.time());
}

IndexInterval minimal_cover(std::vector<int> indices, int ring) {
  std::sort(indices.begin(), indices.end());
  indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
  const std::size_t k = indices.size();
  // Largest empty arc between consecutive occupied indices; the cover is its
  // complement.
  int best_gap = -1;
  int best_start = 0;
  for (std::size_t i = 0; i < k; ++i) {
    const int here = indices[i];
    const int next = i + 1 < k ? indices[i + 1] : indices[0] + ring;
    const int gap = next - here;
    const int start = next % ring;
    if (gap > best_gap || (gap == best_gap && start < best_start)) {
      best_gap = gap;
      best_start = start;
    }
  }
  return {best_start, ring - best_gap + 1, ring};
}

std::vector<NlrpFrame> Nlrp::frames() const {
  std::vector<NlrpFrame> out;
  if (ne) out.push_back(*ne);
  if (se) out.push_back(*se);
  return out;
}

bool Nlrp::interior(SatCoord c) const { return (ne && ne->interior(c)) || (se && se->interior(c)); }
bool Nlrp::contains(SatCoord c) const { return (ne && ne->contains(c)) || (se && se->contains(c)); }

namespace {

IndexInterval widen(IndexInterval iv, int theta, const char* axis) {
  if (iv.length + 2 * theta >= iv.ring)
    throw Error(ErrorCode::RiskTooLarge, std::string("low-risk planes wrap the whole ") + axis + " ring");
  iv.start = ((iv.start - theta) % iv.ring + iv.ring) % iv.ring;
  iv.length += 2 * theta;
  return iv;
}

std::optional<NlrpFrame> frame_for(const std::vector<SatCoord>& members, const GridShape& grid, int theta) {
  if (members.empty()) return std::nullopt;
  std::vector<int> ps, ns;
  for (auto c : members) {
    ps.push_back(c.p);
    ns.push_back(c.n);
  }
  return NlrpFrame{widen(minimal_cover(ps, grid.planes), theta, "plane"),
                   widen(minimal_cover(ns, grid.per_plane), theta, "in-orbit index")};
}

}  // namespace

Nlrp compute_nlrp(const GridShape& grid, const RiskSet& risk, int theta) {
  if (theta < 0) throw Error(ErrorCode::InvalidConfig, "theta must be non-negative");
  Nlrp out;
  out.theta = theta;
  out.ne = frame_for(risk.ne, grid, theta);
  out.se = frame_for(risk.se, grid, theta);
  return out;
}

}  // namespace leoveri
