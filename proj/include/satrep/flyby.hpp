#pragma once

#include "satrep/channel.hpp"
#include "satrep/orbit.hpp"

#include <Eigen/Core>

namespace satrep {

/// Time-resolved downlink over one flyby, sampled on a uniform grid [0, T_FB].
struct FlybyProfile {
  Eigen::ArrayXd times;
  Eigen::ArrayXd distance;
  Eigen::ArrayXd zenith;
  Eigen::ArrayXd eta_tr;
  Eigen::ArrayXd eta2_tr;
  Eigen::ArrayXd f_pair;
  double flyby_s = 0.0;

  Eigen::Index size() const { return times.size(); }
  double step() const { return flyby_s / static_cast<double>(times.size() - 1); }
};

struct FlybyAggregates {
  double p0 = 0.0;          // time-averaged two-photon transmission
  double f_pair_avg = 0.0;  // transmission-weighted pair fidelity
  double flyby_s = 0.0;
};

struct QuadratureOptions {
  int samples = 2001;
  double rel_tol = 1e-6;
  int max_doublings = 8;
};

FlybyProfile build_profile(const OrbitGeometry& geom, const ChannelParams& channel,
                           double source_fidelity, int n_samples);

/// P0 over the profile grid. Checks the estimate against the half-resolution
/// grid and throws QuadratureError if they disagree by more than rel_tol.
double average_two_photon(const FlybyProfile& profile, double rel_tol = 1e-6);

double average_pair_fidelity(const FlybyProfile& profile, double rel_tol = 1e-6);

/// Builds profiles with successive grid doublings until P0 and the average
/// pair fidelity both settle to opts.rel_tol.
FlybyAggregates flyby_aggregates(const OrbitGeometry& geom, const ChannelParams& channel,
                                 double source_fidelity, const QuadratureOptions& opts = {});

}  // namespace satrep
