#pragma once

// Pass geometry of a satellite in a polar orbit over two ground stations on
// the equator. The satellite enters the shared visibility window at t = 0
// (zenith angle = max_zenith_rad) and is overhead of the midpoint at t = t0.

#include "satrep/errors.hpp"
#include "satrep/numeric.hpp"

#include <cmath>
#include <numbers>

namespace satrep {

inline constexpr double kEarthRadius = 6.378e6;        // m
inline constexpr double kEarthMu = 3.986004418e14;     // m^3/s^2, G*M_E

struct OrbitGeometry {
  double altitude_m = 1.5e6;
  double link_length_m = 2.5e6;  // great-circle ground-station separation L0
  double earth_radius_m = kEarthRadius;
  double earth_mu = kEarthMu;
  double max_zenith_rad = 80.0 * std::numbers::pi / 180.0;

  /// Throws DomainError unless h > 0, L0 >= 0, 0 < theta_max < pi/2.
  void validate() const;
};

struct PassTiming {
  double t0_s = 0.0;
  double flyby_s = 0.0;  // always 2 * t0_s

  static PassTiming from_half(double t0) { return {t0, 2.0 * t0}; }
  bool visible() const { return t0_s > 0.0; }
};

double angular_speed(const OrbitGeometry& geom);

/// Closed-form time from entering the window to the overhead point. Returns
/// 0 when L0 is beyond the visibility limit.
double half_flyby_time(const OrbitGeometry& geom);

inline PassTiming pass_timing(const OrbitGeometry& geom) {
  return PassTiming::from_half(half_flyby_time(geom));
}

/// Distance from the satellite at d(0) = d(T_FB) = the theta_max distance.
double edge_distance(const OrbitGeometry& geom);

/// Satellite-to-station distance at time t in [0, T_FB].
template <typename T>
T slant_distance(const OrbitGeometry& geom, const PassTiming& timing, const T& t) {
  using std::cos;
  using std::sqrt;
  const double slack = 1e-9 * std::max(timing.flyby_s, 1.0);
  if (numeric::any_less(t, -slack) || numeric::any_greater(t, timing.flyby_s + slack)) {
    throw DomainError("slant_distance: time outside the flyby window [0, T_FB]");
  }
  const double re = geom.earth_radius_m;
  const double rs = re + geom.altitude_m;
  const double omega = angular_speed(geom);
  const double half_angle = geom.link_length_m / (2.0 * re);
  const double a = re * re + rs * rs;
  const double b = 2.0 * re * rs * cos(half_angle);
  return T(sqrt(a - b * cos(omega * (timing.t0_s - t))));
}

/// Zenith angle seen from a ground station at slant distance d. Only the
/// branch 0 <= theta < pi/2 is accepted.
template <typename T>
T zenith_angle(const OrbitGeometry& geom, const T& d) {
  using std::acos;
  const double h = geom.altitude_m;
  const double re = geom.earth_radius_m;
  T cos_theta = h / d - (d * d - h * h) / (2.0 * re * d);
  if (numeric::any_greater(cos_theta, 1.0 + 1e-12) || numeric::any_less(cos_theta, -1.0)) {
    throw DomainError("zenith_angle: cosine outside [-1, 1], non-physical geometry");
  }
  if (numeric::min_value(cos_theta) <= 0.0) {
    throw DomainError("zenith_angle: satellite at or below the horizon (theta >= pi/2)");
  }
  return T(acos(numeric::clamp(cos_theta, -1.0, 1.0)));
}

}  // namespace satrep
