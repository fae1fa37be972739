#include "satrep/channel.hpp"

namespace satrep {

void ChannelParams::validate() const {
  const auto positive = [](double v, const char* what) {
    if (!(v > 0.0)) throw DomainError(std::string("channel: ") + what + " must be positive");
  };
  positive(wavelength_m, "wavelength");
  positive(beam_waist_m, "beam waist");
  positive(receiver_radius_m, "receiver radius");
  positive(filter_bandwidth_m, "filter bandwidth");
  positive(coincidence_window_s, "coincidence window");
  if (!(beam_quality >= 1.0)) throw DomainError("channel: beam quality factor must be >= 1");
  if (!(pointing_sigma_rad >= 0.0)) throw DomainError("channel: pointing sigma must be >= 0");
  if (!(sky_irradiance >= 0.0)) throw DomainError("channel: sky irradiance must be >= 0");
  if (!(field_of_view_sr >= 0.0)) throw DomainError("channel: field of view must be >= 0");
  if (!(zenith_transmittance > 0.0 && zenith_transmittance <= 1.0)) {
    throw DomainError("channel: zenith transmittance must lie in (0, 1]");
  }
  if (!(coupling_efficiency > 0.0 && coupling_efficiency <= 1.0)) {
    throw DomainError("channel: coupling efficiency must lie in (0, 1]");
  }
}

double pointing_eff(const ChannelParams& p) {
  const double divergence = 4.0 * p.beam_quality * p.wavelength_m / (std::numbers::pi * p.beam_waist_m);
  const double d2 = divergence * divergence;
  return numeric::clamp_unit(d2 / (d2 + 4.0 * p.pointing_sigma_rad * p.pointing_sigma_rad));
}

double mean_background_photons(const ChannelParams& p) {
  const double radius = p.aperture == ApertureInterpretation::Literal ? 0.5 * p.receiver_radius_m
                                                                       : p.receiver_radius_m;
  const double area = std::numbers::pi * radius * radius;
  const double bandwidth_um = p.filter_bandwidth_m * 1e6;  // irradiance is per micrometre
  const double photon_energy = kPlanck * kSpeedOfLight / p.wavelength_m;
  return p.sky_irradiance * p.field_of_view_sr * area * bandwidth_um * p.coincidence_window_s /
         photon_energy;
}

}  // namespace satrep
