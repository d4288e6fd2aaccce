#pragma once

#include <cmath>
#include <numbers>

namespace leoveri {

inline constexpr double kEarthRadiusKm = 6371.0;
inline constexpr double kLightSpeedKmPerS = 299792.458;
inline constexpr double kEarthMuKm3PerS2 = 398600.4418;
inline constexpr double kEarthRotationRadPerS = 7.2921159e-5;

constexpr double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }
constexpr double rad_to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend constexpr Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend constexpr Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend constexpr Vec3 operator*(double s, Vec3 a) { return {s * a.x, s * a.y, s * a.z}; }
  friend constexpr bool operator==(Vec3, Vec3) = default;

  constexpr double dot(Vec3 o) const { return x * o.x + y * o.y + z * o.z; }
  constexpr Vec3 cross(Vec3 o) const {
    return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
  }
  double norm() const { return std::sqrt(dot(*this)); }
  Vec3 unit() const { return (1.0 / norm()) * *this; }
};

inline double distance(Vec3 a, Vec3 b) { return (a - b).norm(); }

struct LatLon {
  double lat_deg = 0.0;
  double lon_deg = 0.0;
  friend bool operator==(LatLon, LatLon) = default;
};

// Maps any longitude into (-180, 180].
double normalize_lon(double lon_deg);

// Earth-fixed Cartesian position of a point at the given radius.
Vec3 to_cartesian(LatLon p, double radius_km = kEarthRadiusKm);
LatLon to_latlon(Vec3 v);

// Central angle between two surface points, radians.
double central_angle(LatLon a, LatLon b);
double great_circle_km(LatLon a, LatLon b);

// Elevation of `target` above the local horizon at ground point `observer`, degrees.
double elevation_deg(Vec3 observer, Vec3 target);

}  // namespace leoveri
