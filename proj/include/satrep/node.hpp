#pragma once

// Ground-station device models: the satellite pair source, CAPS-gate memory
// loading, and Werner-state bookkeeping for stored atom-atom pairs.
// Polarization convention: H -> |0>, V -> |1>.

#include <Eigen/Core>

#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace satrep {

struct SourceParams {
  double pair_fidelity = 0.998;
  double repetition_rate_hz = 10e6;
  double emission_efficiency = 0.9;
  int mux_channels = 100;
  double demux_efficiency = 0.73;
  double direct_repetition_rate_hz = 1e9;

  void validate() const;
};

struct CavityParams {
  double g = 0.0;         // atom-cavity coupling, rad/s
  double kappa_in = 0.0;  // internal loss, rad/s
  double kappa_ex = 0.0;  // external coupling, rad/s
  double gamma = 0.0;     // atomic decay, rad/s

  double internal_cooperativity() const { return g * g / (2.0 * kappa_in * gamma); }
  double kappa() const { return kappa_in + kappa_ex; }
};

struct NodeParams {
  std::optional<double> internal_cooperativity;
  std::optional<double> caps_efficiency = 0.75;
  double caps_fidelity = 0.99;
  double rydberg_fidelity = 0.995;
  double readout_fidelity = 0.999;
  double detection_efficiency = 0.9;
  double spin_decoherence_rate_hz = 0.05;

  void validate() const;
};

/// Memory loading efficiency to use. An explicit caps_efficiency wins over
/// the cooperativity; when both are set and disagree a note is appended to
/// `warnings`.
double resolved_caps_efficiency(const NodeParams& node, std::vector<std::string>* warnings = nullptr);

template <typename Scalar>
using DensityMatrix4 = Eigen::Matrix<std::complex<Scalar>, 4, 4>;

/// Two-qubit density matrix in the basis {|00>, |01>, |10>, |11>}.
struct TwoQubitState {
  DensityMatrix4<double> rho = DensityMatrix4<double>::Zero();

  double trace() const { return rho.trace().real(); }
  bool is_hermitian(double tol = 1e-12) const;
  double min_eigenvalue() const;
  /// <v|rho|v> for a normalized state vector.
  double overlap(const Eigen::Vector4cd& v) const;
};

namespace bell {
Eigen::Vector4cd phi_plus();
Eigen::Vector4cd phi_minus();
Eigen::Vector4cd psi_plus();
Eigen::Vector4cd psi_minus();
}  // namespace bell

TwoQubitState source_state(double source_fidelity);

double optimal_external_coupling(const CavityParams& cavity);

struct Reflectivities {
  double uncoupled;  // r0
  double coupled;    // r1
};
Reflectivities reflectivities(const CavityParams& cavity);

/// Heralded CAPS success probability at the optimal external coupling.
double caps_success(double internal_cooperativity);

double elementary_link_fidelity(double f_pair_avg, double caps_fidelity);

TwoQubitState werner_matrix(double werner);

/// Element-wise decay/dephasing map for a Werner-form state. gamma is the
/// spin decay rate and gamma_star the pure dephasing rate; the coherences
/// decay at gamma + 2 gamma_star. The map is not trace preserving for
/// gamma > 0.
TwoQubitState decohere_matrix(const TwoQubitState& state, double gamma, double gamma_star, double t);

/// Werner parameter after waiting time t at decoherence rate gamma_s.
inline double werner_fidelity_decay(double werner, double gamma_s, double t) {
  return 0.25 + (werner - 0.25) * std::exp(-gamma_s * t);
}

/// Row of the matrix-map vs phenomenological-decay comparison.
struct DecoherenceComparison {
  double t;
  double trace;
  double singlet_overlap_matrix;  // <psi-|rho(t)|psi-> from the element-wise map
  double werner_decay;            // 1/4 + (F - 1/4) e^{-gamma_s t}
};
std::vector<DecoherenceComparison> compare_decoherence_models(double werner, double gamma, double gamma_star,
                                                              const std::vector<double>& times);

}  // namespace satrep
