#include "satrep/orbit.hpp"

#include <stdexcept>

namespace satrep {

void OrbitGeometry::validate() const {
  if (!(altitude_m > 0.0)) throw DomainError("orbit: altitude must be positive");
  if (!(link_length_m >= 0.0)) throw DomainError("orbit: link length must be non-negative");
  if (!(earth_radius_m > 0.0) || !(earth_mu > 0.0)) {
    throw DomainError("orbit: Earth radius and gravitational parameter must be positive");
  }
  if (!(max_zenith_rad > 0.0) || !(max_zenith_rad < std::numbers::pi / 2.0)) {
    throw DomainError("orbit: max zenith angle must lie in (0, pi/2)");
  }
}

double angular_speed(const OrbitGeometry& geom) {
  const double r = geom.altitude_m + geom.earth_radius_m;
  return std::sqrt(geom.earth_mu / (r * r * r));
}

double edge_distance(const OrbitGeometry& geom) {
  const double h = geom.altitude_m;
  const double re = geom.earth_radius_m;
  const double c = std::cos(geom.max_zenith_rad);
  return std::sqrt(h * h + 2.0 * h * re + re * re * c * c) - re * c;
}

double half_flyby_time(const OrbitGeometry& geom) {
  geom.validate();
  const double h = geom.altitude_m;
  const double re = geom.earth_radius_m;
  const double c = std::cos(geom.max_zenith_rad);
  const double num = re * (1.0 - c * c) + c * std::sqrt(h * h + 2.0 * h * re + re * re * c * c);
  const double den = (h + re) * std::cos(geom.link_length_m / (2.0 * re));
  if (den <= 0.0) return 0.0;  // stations a quarter of the globe apart or more
  const double arg = num / den;
  if (arg >= 1.0) return 0.0;
  if (arg < -1.0) throw std::logic_error("half_flyby_time: arccos argument below -1");
  return std::acos(arg) / angular_speed(geom);
}

}  // namespace satrep
