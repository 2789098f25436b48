#include "cre/geo.hpp"

#include <cmath>
#include <stdexcept>

namespace cre {

namespace {
constexpr double kDegToRad = 3.14159265358979323846 / 180.0;
}

bool is_valid(const GeoCoord& c) {
  return std::abs(c.lat_deg) <= 90.0 && std::abs(c.lon_deg) <= 180.0;
}

double haversine_km(const GeoCoord& a, const GeoCoord& b) {
  const double phi1 = a.lat_deg * kDegToRad;
  const double phi2 = b.lat_deg * kDegToRad;
  const double dphi = (b.lat_deg - a.lat_deg) * kDegToRad;
  const double dlam = (b.lon_deg - a.lon_deg) * kDegToRad;
  const double s1 = std::sin(dphi / 2.0);
  const double s2 = std::sin(dlam / 2.0);
  const double h = s1 * s1 + std::cos(phi1) * std::cos(phi2) * s2 * s2;
  return 2.0 * kEarthRadiusKm * std::asin(std::sqrt(std::min(1.0, h)));
}

double los_delay_s(const GeoCoord& a, const GeoCoord& b, double v_prop_mps) {
  if (!is_valid(a) || !is_valid(b)) {
    throw std::invalid_argument("los_delay_s: coordinate out of range");
  }
  if (v_prop_mps <= 0.0) {
    throw std::invalid_argument("los_delay_s: propagation speed must be positive");
  }
  return haversine_km(a, b) * 1000.0 / v_prop_mps;
}

}  // namespace cre
