#include "satrep/flyby.hpp"

#include "satrep/quadrature.hpp"

#include <cmath>
#include <sstream>

namespace satrep {
namespace {

std::span<const double> view(const Eigen::ArrayXd& a) {
  return {a.data(), static_cast<std::size_t>(a.size())};
}

void check_profile(const FlybyProfile& p) {
  if (p.size() < 3 || p.size() % 2 == 0 || !(p.flyby_s > 0.0)) {
    throw QuadratureError("flyby profile needs an odd sample count >= 3 and positive duration");
  }
}

double checked_integral(const Eigen::ArrayXd& y, double step, double rel_tol, const char* what) {
  const double fine = simpson(view(y), step);
  double coarse = 0.0;
  if (simpson_half_grid(view(y), step, coarse)) {
    const double change = relative_change(coarse, fine);
    if (change > rel_tol) {
      std::ostringstream msg;
      msg << what << ": Simpson estimate not converged on " << y.size()
          << " samples (relative change " << change << " vs tolerance " << rel_tol << ")";
      throw QuadratureError(msg.str());
    }
  }
  return fine;
}

}  // namespace

FlybyProfile build_profile(const OrbitGeometry& geom, const ChannelParams& channel,
                           double source_fidelity, int n_samples) {
  if (n_samples < 3 || n_samples % 2 == 0) {
    throw QuadratureError("build_profile: sample count must be odd and >= 3");
  }
  channel.validate();
  const PassTiming timing = pass_timing(geom);
  if (!timing.visible()) {
    std::ostringstream msg;
    msg << "no visibility window: h = " << geom.altitude_m << " m, L0 = " << geom.link_length_m
        << " m exceeds the shared field of regard";
    throw VisibilityError(msg.str());
  }

  FlybyProfile p;
  p.flyby_s = timing.flyby_s;
  p.times = Eigen::ArrayXd::LinSpaced(n_samples, 0.0, timing.flyby_s);
  p.distance = slant_distance(geom, timing, p.times);
  p.zenith = zenith_angle(geom, p.distance);
  p.eta_tr = single_photon_transmission(channel, p.distance, p.zenith);
  p.eta2_tr = p.eta_tr * p.eta_tr;
  p.f_pair = pair_fidelity(source_fidelity, mean_background_photons(channel), p.eta_tr);
  return p;
}

double average_two_photon(const FlybyProfile& profile, double rel_tol) {
  check_profile(profile);
  return checked_integral(profile.eta2_tr, profile.step(), rel_tol, "average_two_photon") /
         profile.flyby_s;
}

double average_pair_fidelity(const FlybyProfile& profile, double rel_tol) {
  check_profile(profile);
  const double weight = checked_integral(profile.eta2_tr, profile.step(), rel_tol, "average_pair_fidelity");
  if (!(weight > 0.0)) {
    throw DomainError("average_pair_fidelity: zero average transmission");
  }
  const Eigen::ArrayXd weighted = profile.f_pair * profile.eta2_tr;
  return checked_integral(weighted, profile.step(), rel_tol, "average_pair_fidelity") / weight;
}

FlybyAggregates flyby_aggregates(const OrbitGeometry& geom, const ChannelParams& channel,
                                 double source_fidelity, const QuadratureOptions& opts) {
  int n = opts.samples;
  if (n % 2 == 0) ++n;
  // Convergence is judged across doublings here, not within one grid.
  constexpr double kNoInnerCheck = 1e300;
  FlybyProfile prof = build_profile(geom, channel, source_fidelity, n);
  double p0 = average_two_photon(prof, kNoInnerCheck);
  double fp = average_pair_fidelity(prof, kNoInnerCheck);
  for (int k = 0; k < opts.max_doublings; ++k) {
    n = 2 * n - 1;
    prof = build_profile(geom, channel, source_fidelity, n);
    const double p0_fine = average_two_photon(prof, kNoInnerCheck);
    const double fp_fine = average_pair_fidelity(prof, kNoInnerCheck);
    const double dp = relative_change(p0, p0_fine);
    const double df = relative_change(fp, fp_fine);
    p0 = p0_fine;
    fp = fp_fine;
    if (dp < opts.rel_tol && df < opts.rel_tol) {
      return {p0, fp, prof.flyby_s};
    }
  }
  std::ostringstream msg;
  msg << "flyby_aggregates: no convergence to " << opts.rel_tol << " after " << opts.max_doublings
      << " doublings (last grid " << n << " samples, P0 = " << p0 << ", F_pair = " << fp << ")";
  throw QuadratureError(msg.str());
}

}  // namespace satrep
