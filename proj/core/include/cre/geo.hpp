#pragma once

namespace cre {

// Geographic coordinate in decimal degrees.
struct GeoCoord {
  double lat_deg = 0.0;
  double lon_deg = 0.0;
};

inline constexpr double kEarthRadiusKm = 6371.0;

// Propagation speed of light in fiber, m/s.
inline constexpr double kDefaultPropSpeedMps = 2.0e8;

bool is_valid(const GeoCoord& c);

// Great-circle distance between two coordinates.
double haversine_km(const GeoCoord& a, const GeoCoord& b);

// Line-of-sight propagation delay in seconds at speed v_prop_mps.
double los_delay_s(const GeoCoord& a, const GeoCoord& b,
                   double v_prop_mps = kDefaultPropSpeedMps);

}  // namespace cre
