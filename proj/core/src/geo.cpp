#include "leoveri/geo.hpp"

#include <algorithm>

#include "leoveri/error.hpp"

namespace leoveri {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::NoVisibleSatellite: return "NoVisibleSatellite";
    case ErrorCode::Unreachable: return "Unreachable";
    case ErrorCode::RiskTooLarge: return "RiskTooLarge";
    case ErrorCode::PlanInfeasible: return "PlanInfeasible";
    case ErrorCode::ZeroThreshold: return "ZeroThreshold";
    case ErrorCode::PlanExpired: return "PlanExpired";
    case ErrorCode::InfeasibleAttack: return "InfeasibleAttack";
    case ErrorCode::NoRelayFound: return "NoRelayFound";
    case ErrorCode::Decode: return "Decode";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

double normalize_lon(double lon_deg) {
  double l = std::fmod(lon_deg, 360.0);
  if (l <= -180.0) l += 360.0;
  if (l > 180.0) l -= 360.0;
  return l;
}

Vec3 to_cartesian(LatLon p, double radius_km) {
  const double lat = deg_to_rad(p.lat_deg);
  const double lon = deg_to_rad(p.lon_deg);
  return {radius_km * std::cos(lat) * std::cos(lon),
          radius_km * std::cos(lat) * std::sin(lon),
          radius_km * std::sin(lat)};
}

LatLon to_latlon(Vec3 v) {
  const double r = v.norm();
  const double lat = std::asin(std::clamp(v.z / r, -1.0, 1.0));
  const double lon = std::atan2(v.y, v.x);
  return {rad_to_deg(lat), normalize_lon(rad_to_deg(lon))};
}

double central_angle(LatLon a, LatLon b) {
  // Vincenty form: well conditioned for both tiny and antipodal separations.
  const Vec3 u = to_cartesian(a, 1.0);
  const Vec3 v = to_cartesian(b, 1.0);
  return std::atan2(u.cross(v).norm(), u.dot(v));
}

double great_circle_km(LatLon a, LatLon b) { return kEarthRadiusKm * central_angle(a, b); }

double elevation_deg(Vec3 observer, Vec3 target) {
  const Vec3 up = observer.unit();
  const Vec3 los = target - observer;
  const double range = los.norm();
  if (range == 0.0) return 90.0;
  return rad_to_deg(std::asin(std::clamp(up.dot(los) / range, -1.0, 1.0)));
}

}  // namespace leoveri
