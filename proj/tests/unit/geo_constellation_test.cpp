#include <doctest.h>

#include <cmath>
#include <numbers>

#include "leoveri/constellation.hpp"
#include "leoveri/error.hpp"
#include "leoveri/geo.hpp"
#include "oracles.hpp"

using namespace leoveri;

TEST_CASE("normalize_lon folds into (-180, 180]") {
  CHECK(normalize_lon(180.0) == doctest::Approx(180.0));
  CHECK(normalize_lon(-180.0) == doctest::Approx(180.0));
  CHECK(normalize_lon(190.0) == doctest::Approx(-170.0));
  CHECK(normalize_lon(-540.0) == doctest::Approx(180.0));
  CHECK(normalize_lon(725.0) == doctest::Approx(5.0));
}

TEST_CASE("cartesian round trip and central angle") {
  const LatLon p{30.05, 31.23};
  const LatLon back = to_latlon(to_cartesian(p));
  CHECK(back.lat_deg == doctest::Approx(p.lat_deg).epsilon(1e-12));
  CHECK(back.lon_deg == doctest::Approx(p.lon_deg).epsilon(1e-12));
  CHECK(central_angle({0, 0}, {0, 90}) == doctest::Approx(std::numbers::pi / 2));
  CHECK(great_circle_km({0, 0}, {90, 0}) == doctest::Approx(kEarthRadiusKm * std::numbers::pi / 2));
}

TEST_CASE("elevation of a zenith point is 90 degrees") {
  const Vec3 ground = to_cartesian({10, 20});
  const Vec3 above = to_cartesian({10, 20}, kEarthRadiusKm + 550.0);
  CHECK(elevation_deg(ground, above) == doctest::Approx(90.0));
  CHECK(elevation_deg(ground, to_cartesian({-10, -160}, kEarthRadiusKm + 550.0)) < 0.0);
}

TEST_CASE("shell sizes") {
  CHECK(Shell(ShellConfig::starlink_shell1()).propagate(0.0).size() == 1584);
  CHECK(Shell(ShellConfig::kuiper()).propagate(0.0).size() == 1156);
}

TEST_CASE("invalid shells are rejected") {
  auto c = ShellConfig::starlink_shell1();
  c.planes = 0;
  CHECK_THROWS_AS(c.validate(), Error);
  c = ShellConfig::starlink_shell1();
  c.altitude_km = -1;
  CHECK_THROWS_AS(Shell{c}, Error);
  c = ShellConfig::starlink_shell1();
  c.sats_per_plane = 300;
  CHECK_THROWS_AS(c.validate(), Error);
}

TEST_CASE("satellite (0,0) starts at the ascending node") {
  auto c = ShellConfig::starlink_shell1();
  c.phase_offset = 0.0;
  const Shell shell(c);
  const auto s = shell.propagate_one({0, 0}, 0.0);
  CHECK(s.arg_latitude_rad == doctest::Approx(0.0));
  CHECK(s.inertial.x == doctest::Approx(c.orbit_radius_km()));
  CHECK(s.inertial.y == doctest::Approx(0.0));
  CHECK(s.inertial.z == doctest::Approx(0.0));
  CHECK(s.subpoint.lat_deg == doctest::Approx(0.0));
  CHECK(s.subpoint.lon_deg == doctest::Approx(0.0));
}

TEST_CASE("direction at the nodes and at the apex") {
  auto c = ShellConfig::starlink_shell1();
  c.phase_offset = 0.0;
  const Shell shell(c);
  CHECK(shell.propagate_one({0, 0}, 0.0).direction == Direction::NEBound);
  // n = 11 of 22 sits half an orbit ahead: the descending node.
  CHECK(shell.propagate_one({0, 11}, 0.0).direction == Direction::SEBound);

  // Quarter period: (0,0) is at the northern apex. Compare latitudes one step apart.
  const double t = c.period_s() / 4.0;
  const auto now = shell.propagate_one({0, 0}, t);
  const auto next = shell.propagate_one({0, 0}, t + kPropagationStepS);
  const auto expected = next.subpoint.lat_deg > now.subpoint.lat_deg ? Direction::NEBound : Direction::SEBound;
  CHECK(shell.direction_of({0, 0}, t) == expected);
  CHECK(now.direction == expected);
}

TEST_CASE("directions match the latitude trend across the shell") {
  const Shell shell(ShellConfig::kuiper());
  const auto a = shell.propagate(100.0);
  const auto b = shell.propagate(100.5);
  int checked = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double dl = b[i].inertial.z - a[i].inertial.z;
    if (std::abs(dl) < 1e-3) continue;
    CHECK(a[i].direction == (dl > 0 ? Direction::NEBound : Direction::SEBound));
    ++checked;
  }
  CHECK(checked > 1000);
}

TEST_CASE("intra-plane neighbours are one chord apart") {
  const auto c = ShellConfig::starlink_shell1();
  const auto states = Shell(c).propagate(0.0);
  const double expected = oracle::chord_delay_s(c.orbit_radius_km(), 2 * std::numbers::pi / 22);
  CHECK(expected == doctest::Approx(6.57e-3).epsilon(1e-3));
  const double d = distance(states[0].position, states[1].position) / kLightSpeedKmPerS;
  CHECK(d == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("propagation is periodic without earth rotation") {
  auto c = ShellConfig::kuiper();
  c.earth_rotation = false;
  const Shell shell(c);
  const auto a = shell.propagate_one({5, 7}, 10.0);
  const auto b = shell.propagate_one({5, 7}, 10.0 + c.period_s());
  CHECK(distance(a.position, b.position) < 1e-6);
}
