#pragma once

// Downlink efficiency and sky-noise model. Every function is a pure map and
// accepts either a double or an Eigen array for the time-varying arguments.

#include "satrep/errors.hpp"
#include "satrep/numeric.hpp"

#include <cmath>
#include <numbers>

namespace satrep {

inline constexpr double kPlanck = 6.62607015e-34;     // J s
inline constexpr double kSpeedOfLight = 299792458.0;  // m/s

/// How the receiver size enters the background photon count. The diffraction
/// loss always treats receiver_radius_m as a radius; the noise formula as
/// printed squares half of it, as if it were a diameter.
enum class ApertureInterpretation { Literal, Radius };

struct ChannelParams {
  double wavelength_m = 780e-9;
  double beam_waist_m = 0.025;
  double beam_quality = 1.0;  // M^2
  double receiver_radius_m = 1.0;
  double pointing_sigma_rad = 0.5e-6;
  double zenith_transmittance = 0.79;
  double coupling_efficiency = 0.25;
  double sky_irradiance = 1.5e-5;  // W m^-2 um^-1 sr^-1
  double field_of_view_sr = 7.853981632338238e-9;  // cone of 100 urad full angle
  double filter_bandwidth_m = 1e-9;
  double coincidence_window_s = 1e-9;
  ApertureInterpretation aperture = ApertureInterpretation::Literal;

  void validate() const;
};

/// Solid angle of a circular field of view with the given full apex angle.
inline double cone_solid_angle(double full_angle_rad) {
  const double s = std::sin(0.25 * full_angle_rad);
  return 4.0 * std::numbers::pi * s * s;
}

template <typename T>
T beam_waist(const ChannelParams& p, const T& d) {
  using std::sqrt;
  const double w0 = p.beam_waist_m;
  const double z = p.wavelength_m / (std::numbers::pi * w0 * w0);
  return T(sqrt(w0 * w0 * (1.0 + (z * d) * (z * d))));
}

template <typename T>
T diffraction_eff(const ChannelParams& p, const T& d) {
  using std::exp;
  if (numeric::any_less(d, 0.0)) throw DomainError("diffraction_eff: negative distance");
  const T w = beam_waist(p, d);
  const double r = p.receiver_radius_m;
  return T(numeric::clamp_unit(T(1.0 - exp(-(r * r) / (2.0 * w * w)))));
}

template <typename T>
T atmospheric_eff(const ChannelParams& p, const T& theta) {
  using std::cos;
  using std::exp;
  if (numeric::any_less(theta, 0.0) || numeric::max_value(theta) >= std::numbers::pi / 2.0) {
    throw DomainError("atmospheric_eff: zenith angle must lie in [0, pi/2)");
  }
  const double log_zenith = std::log(p.zenith_transmittance);
  return T(numeric::clamp_unit(T(exp(log_zenith / cos(theta)))));
}

/// Time-independent pointing efficiency for a Gaussian-distributed jitter.
double pointing_eff(const ChannelParams& p);

template <typename T>
T single_photon_transmission(const ChannelParams& p, const T& d, const T& theta) {
  return T(diffraction_eff(p, d) * atmospheric_eff(p, theta) * (pointing_eff(p) * p.coupling_efficiency));
}

template <typename T>
T two_photon_transmission(const ChannelParams& p, const T& d1, const T& theta1, const T& d2,
                          const T& theta2) {
  return T(single_photon_transmission(p, d1, theta1) * single_photon_transmission(p, d2, theta2));
}

/// Mean number of sky photons per coincidence window. Constant over a flyby.
double mean_background_photons(const ChannelParams& p);

/// Pair fidelity at the ground after background noise. eta must be positive.
template <typename T>
T pair_fidelity(double source_fidelity, double n_bar, const T& eta) {
  if (!(source_fidelity >= 0.25 && source_fidelity <= 1.0)) {
    throw DomainError("pair_fidelity: source fidelity outside [1/4, 1]");
  }
  if (n_bar < 0.0) throw DomainError("pair_fidelity: negative background photon number");
  if (!numeric::any_greater(numeric::min_value(eta), 0.0)) {
    throw DomainError("pair_fidelity: zero transmission, fidelity undefined");
  }
  const T noise = 1.0 + n_bar / eta;
  return T(0.25 * (1.0 + (4.0 * source_fidelity - 1.0) / (noise * noise)));
}

}  // namespace satrep
