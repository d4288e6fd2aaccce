#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "leoveri/geo.hpp"

namespace leoveri {

// One Walker-delta shell on ideal circular orbits.
struct ShellConfig {
  std::string name = "shell";
  int planes = 0;          // P
  int sats_per_plane = 0;  // H
  double inclination_deg = 0.0;
  double altitude_km = 0.0;
  // Along-track offset between adjacent planes, as a fraction of the in-orbit
  // spacing 360/H. Unset means Walker delta phasing (1/P).
  std::optional<double> phase_offset;
  double epoch_s = 0.0;
  // Rotate positions into the Earth-fixed frame so ground tracks drift.
  bool earth_rotation = true;

  double resolved_phase_offset() const { return phase_offset.value_or(1.0 / planes); }
  int size() const { return planes * sats_per_plane; }
  double orbit_radius_km() const { return kEarthRadiusKm + altitude_km; }
  double period_s() const;

  // Throws Error(InvalidConfig) when an invariant is violated.
  void validate() const;

  static ShellConfig starlink_shell1();
  static ShellConfig kuiper();
};

// Logical coordinate: orbit plane p and in-orbit index n.
struct SatCoord {
  int p = 0;
  int n = 0;
  friend auto operator<=>(const SatCoord&, const SatCoord&) = default;
};

enum class Direction { NEBound, SEBound };

const char* to_string(Direction d);

struct SatState {
  SatCoord coord;
  Vec3 position;   // Earth-fixed, km
  Vec3 inertial;   // Earth-centered inertial, km
  LatLon subpoint;
  Direction direction = Direction::NEBound;
  double arg_latitude_rad = 0.0;  // in [0, 2*pi)
};

class Shell {
 public:
  explicit Shell(ShellConfig config);

  const ShellConfig& config() const { return config_; }
  int planes() const { return config_.planes; }
  int sats_per_plane() const { return config_.sats_per_plane; }
  int size() const { return config_.size(); }

  std::size_t index_of(SatCoord c) const {
    return static_cast<std::size_t>(c.p) * config_.sats_per_plane + c.n;
  }
  SatCoord coord_of(std::size_t index) const {
    return {static_cast<int>(index / config_.sats_per_plane),
            static_cast<int>(index % config_.sats_per_plane)};
  }

  // All P*H states at time t, ordered by (p, n).
  std::vector<SatState> propagate(double t) const;
  SatState propagate_one(SatCoord c, double t) const;

  // NEBound iff latitude is increasing at t. At the apex, where the rate is
  // zero, the sign one propagation step later decides.
  Direction direction_of(SatCoord c, double t) const;

 private:
  ShellConfig config_;
};

inline constexpr double kPropagationStepS = 1.0;

// Direction stored on an already-propagated state.
inline Direction direction_of(const SatState& s) { return s.direction; }

}  // namespace leoveri
