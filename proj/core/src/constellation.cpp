#include "leoveri/constellation.hpp"

#include <cmath>
#include <numbers>

#include "leoveri/error.hpp"

namespace leoveri {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// |cos u| below this is treated as the apex of the orbit.
constexpr double kApexTolerance = 1e-12;

double wrap_two_pi(double a) {
  double r = std::fmod(a, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  return r;
}

}  // namespace

const char* to_string(Direction d) { return d == Direction::NEBound ? "NE" : "SE"; }

double ShellConfig::period_s() const {
  const double a = orbit_radius_km();
  return kTwoPi * std::sqrt(a * a * a / kEarthMuKm3PerS2);
}

void ShellConfig::validate() const {
  if (planes < 1) throw Error(ErrorCode::InvalidConfig, "shell '" + name + "' needs at least one plane");
  if (sats_per_plane < 1)
    throw Error(ErrorCode::InvalidConfig, "shell '" + name + "' needs at least one satellite per plane");
  if (!(inclination_deg > 0.0 && inclination_deg <= 180.0))
    throw Error(ErrorCode::InvalidConfig, "inclination must lie in (0, 180]");
  if (!(altitude_km > 0.0)) throw Error(ErrorCode::InvalidConfig, "altitude must be positive");
  if (phase_offset && !std::isfinite(*phase_offset))
    throw Error(ErrorCode::InvalidConfig, "phase offset must be finite");
  if (planes > 256 || sats_per_plane > 256)
    throw Error(ErrorCode::InvalidConfig, "logical coordinates must fit one byte each");
}

ShellConfig ShellConfig::starlink_shell1() {
  ShellConfig c;
  c.name = "starlink";
  c.planes = 72;
  c.sats_per_plane = 22;
  c.inclination_deg = 53.0;
  c.altitude_km = 550.0;
  return c;
}

ShellConfig ShellConfig::kuiper() {
  ShellConfig c;
  c.name = "kuiper";
  c.planes = 34;
  c.sats_per_plane = 34;
  c.inclination_deg = 51.9;
  c.altitude_km = 630.0;
  return c;
}

Shell::Shell(ShellConfig config) : config_(std::move(config)) { config_.validate(); }

SatState Shell::propagate_one(SatCoord c, double t) const {
  const double planes = config_.planes;
  const double per_plane = config_.sats_per_plane;
  const double dt = t - config_.epoch_s;
  const double mean_motion = kTwoPi / config_.period_s();

  const double raan = kTwoPi * c.p / planes;
  const double u = wrap_two_pi(kTwoPi * (c.n + c.p * config_.resolved_phase_offset()) / per_plane +
                               mean_motion * dt);
  const double inc = deg_to_rad(config_.inclination_deg);
  const double r = config_.orbit_radius_km();

  const double cu = std::cos(u), su = std::sin(u);
  const double co = std::cos(raan), so = std::sin(raan);
  const double ci = std::cos(inc), si = std::sin(inc);

  SatState s;
  s.coord = c;
  s.arg_latitude_rad = u;
  s.inertial = {r * (co * cu - so * su * ci), r * (so * cu + co * su * ci), r * su * si};

  if (config_.earth_rotation) {
    const double theta = -kEarthRotationRadPerS * dt;
    const double ct = std::cos(theta), st = std::sin(theta);
    s.position = {ct * s.inertial.x - st * s.inertial.y, st * s.inertial.x + ct * s.inertial.y,
                  s.inertial.z};
  } else {
    s.position = s.inertial;
  }
  s.subpoint = to_latlon(s.position);

  // dz/dt is proportional to cos(u) * sin(i); Earth rotation leaves z alone.
  const double rate = cu * si;
  if (std::abs(rate) > kApexTolerance) {
    s.direction = rate > 0.0 ? Direction::NEBound : Direction::SEBound;
  } else {
    s.direction = direction_of(c, t);
  }
  return s;
}

std::vector<SatState> Shell::propagate(double t) const {
  std::vector<SatState> out;
  out.reserve(static_cast<std::size_t>(size()));
  for (int p = 0; p < config_.planes; ++p)
    for (int n = 0; n < config_.sats_per_plane; ++n) out.push_back(propagate_one({p, n}, t));
  return out;
}

Direction Shell::direction_of(SatCoord c, double t) const {
  const double inc = deg_to_rad(config_.inclination_deg);
  const double mean_motion = kTwoPi / config_.period_s();
  const double u0 = kTwoPi * (c.n + c.p * config_.resolved_phase_offset()) / config_.sats_per_plane +
                    mean_motion * (t - config_.epoch_s);
  const double rate = std::cos(u0) * std::sin(inc);
  if (std::abs(rate) > kApexTolerance) return rate > 0.0 ? Direction::NEBound : Direction::SEBound;
  // Apex: compare sin(u) one step ahead. Latitude follows sin(u) * sin(i).
  const double u1 = u0 + mean_motion * kPropagationStepS;
  return std::sin(u1) > std::sin(u0) ? Direction::NEBound : Direction::SEBound;
}

}  // namespace leoveri
