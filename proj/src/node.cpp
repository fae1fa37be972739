#include "satrep/node.hpp"

#include "satrep/errors.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <sstream>

namespace satrep {

void SourceParams::validate() const {
  if (!(pair_fidelity >= 0.25 && pair_fidelity <= 1.0)) {
    throw DomainError("source: pair fidelity must lie in [1/4, 1]");
  }
  if (!(emission_efficiency > 0.0 && emission_efficiency <= 1.0)) {
    throw DomainError("source: emission efficiency must lie in (0, 1]");
  }
  if (!(demux_efficiency > 0.0 && demux_efficiency <= 1.0)) {
    throw DomainError("source: demultiplexing efficiency must lie in (0, 1]");
  }
  if (mux_channels < 1) throw DomainError("source: need at least one multiplexing channel");
  if (!(repetition_rate_hz > 0.0) || !(direct_repetition_rate_hz > 0.0)) {
    throw DomainError("source: repetition rates must be positive");
  }
}

void NodeParams::validate() const {
  const auto unit = [](double v, const char* what) {
    if (!(v >= 0.0 && v <= 1.0)) throw DomainError(std::string("node: ") + what + " must lie in [0, 1]");
  };
  unit(caps_fidelity, "CAPS fidelity");
  unit(rydberg_fidelity, "Rydberg gate fidelity");
  unit(readout_fidelity, "readout fidelity");
  unit(detection_efficiency, "detection efficiency");
  if (caps_efficiency) unit(*caps_efficiency, "CAPS efficiency");
  if (internal_cooperativity && !(*internal_cooperativity >= 0.0)) {
    throw DomainError("node: internal cooperativity must be >= 0");
  }
  if (!caps_efficiency && !internal_cooperativity) {
    throw DomainError("node: set either the CAPS efficiency or the internal cooperativity");
  }
  if (!(spin_decoherence_rate_hz >= 0.0)) throw DomainError("node: spin decoherence rate must be >= 0");
}

double resolved_caps_efficiency(const NodeParams& node, std::vector<std::string>* warnings) {
  if (node.caps_efficiency) {
    if (node.internal_cooperativity && warnings) {
      const double implied = caps_success(*node.internal_cooperativity);
      if (std::abs(implied - *node.caps_efficiency) > 1e-9) {
        std::ostringstream msg;
        msg << "explicit CAPS efficiency " << *node.caps_efficiency << " overrides the value "
            << implied << " implied by C_in = " << *node.internal_cooperativity;
        warnings->push_back(msg.str());
      }
    }
    return *node.caps_efficiency;
  }
  if (node.internal_cooperativity) return caps_success(*node.internal_cooperativity);
  throw DomainError("node: neither CAPS efficiency nor internal cooperativity is set");
}

bool TwoQubitState::is_hermitian(double tol) const {
  return (rho - rho.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

double TwoQubitState::min_eigenvalue() const {
  const DensityMatrix4<double> h = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<DensityMatrix4<double>> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

double TwoQubitState::overlap(const Eigen::Vector4cd& v) const {
  return (v.adjoint() * rho * v)(0, 0).real();
}

namespace bell {
namespace {
Eigen::Vector4cd make(double a00, double a01, double a10, double a11) {
  Eigen::Vector4cd v;
  v << a00, a01, a10, a11;
  return v / std::sqrt(2.0);
}
}  // namespace
Eigen::Vector4cd phi_plus() { return make(1, 0, 0, 1); }
Eigen::Vector4cd phi_minus() { return make(1, 0, 0, -1); }
Eigen::Vector4cd psi_plus() { return make(0, 1, 1, 0); }
Eigen::Vector4cd psi_minus() { return make(0, 1, -1, 0); }
}  // namespace bell

TwoQubitState source_state(double f) {
  if (!(f >= 0.25 && f <= 1.0)) throw DomainError("source_state: fidelity outside [1/4, 1]");
  const auto proj = [](const Eigen::Vector4cd& v) -> DensityMatrix4<double> { return v * v.adjoint(); };
  TwoQubitState s;
  s.rho = f * proj(bell::psi_plus()) +
          (1.0 - f) / 3.0 * (proj(bell::phi_minus()) + proj(bell::phi_plus()) + proj(bell::psi_minus()));
  return s;
}

double optimal_external_coupling(const CavityParams& cavity) {
  return cavity.kappa_in * std::sqrt(1.0 + 2.0 * cavity.internal_cooperativity());
}

Reflectivities reflectivities(const CavityParams& c) {
  const double kappa = c.kappa();
  const double g2 = c.g * c.g;
  return {1.0 - 2.0 * c.kappa_ex / kappa, 1.0 - 2.0 * c.kappa_ex * c.gamma / (g2 + kappa * c.gamma)};
}

double caps_success(double c_in) {
  if (!(c_in >= 0.0)) throw DomainError("caps_success: cooperativity must be >= 0");
  if (std::isinf(c_in)) return 1.0;
  const double s = std::sqrt(1.0 + 2.0 * c_in);
  return 1.0 - 2.0 * s / (1.0 + c_in + s);
}

double elementary_link_fidelity(double f_pair_avg, double caps_fidelity) {
  if (!(f_pair_avg >= 0.0 && f_pair_avg <= 1.0) || !(caps_fidelity >= 0.0 && caps_fidelity <= 1.0)) {
    throw DomainError("elementary_link_fidelity: inputs must lie in [0, 1]");
  }
  const double f0 = (4.0 * f_pair_avg * caps_fidelity - 1.0) / 3.0;
  if (f0 < -1.0 / 3.0) throw UnphysicalStateError("elementary_link_fidelity: Werner parameter below -1/3");
  return f0;
}

TwoQubitState werner_matrix(double f) {
  if (!(f >= -1.0 / 3.0 - 1e-15 && f <= 1.0)) throw DomainError("werner_matrix: parameter outside [-1/3, 1]");
  TwoQubitState s;
  s.rho(0, 0) = (1.0 - f) / 4.0;
  s.rho(1, 1) = (1.0 + f) / 4.0;
  s.rho(2, 2) = (1.0 + f) / 4.0;
  s.rho(3, 3) = (1.0 - f) / 4.0;
  s.rho(1, 2) = -f / 2.0;
  s.rho(2, 1) = -f / 2.0;
  return s;
}

namespace {

// Recovers F from a matrix of exactly the werner_matrix() form.
double werner_parameter_of(const TwoQubitState& s) {
  constexpr double tol = 1e-12;
  const double f = -2.0 * s.rho(1, 2).real();
  const TwoQubitState expected = werner_matrix(f);
  if ((s.rho - expected.rho).cwiseAbs().maxCoeff() > tol) {
    throw DomainError("decohere_matrix: input is not of Werner form");
  }
  return f;
}

}  // namespace

TwoQubitState decohere_matrix(const TwoQubitState& state, double gamma, double gamma_star, double t) {
  if (!(t >= 0.0)) throw DomainError("decohere_matrix: negative time");
  if (!(gamma >= 0.0) || !(gamma_star >= 0.0)) throw DomainError("decohere_matrix: negative rate");
  const double f = werner_parameter_of(state);
  const double decay = std::exp(-gamma * t);
  const double coherence = std::exp(-(gamma + 2.0 * gamma_star) * t);
  TwoQubitState out;
  out.rho(0, 0) = (1.0 - f) / 4.0 + (1.0 - decay) * (1.0 + f) / 4.0;
  out.rho(1, 1) = decay * (1.0 + f) / 4.0;
  out.rho(2, 2) = decay * (1.0 + f) / 4.0;
  out.rho(1, 2) = -f / 2.0 * coherence;
  out.rho(2, 1) = -f / 2.0 * coherence;
  out.rho(3, 3) = (1.0 - f) / 4.0 * decay * decay;
  return out;
}

std::vector<DecoherenceComparison> compare_decoherence_models(double werner, double gamma, double gamma_star,
                                                              const std::vector<double>& times) {
  const TwoQubitState initial = werner_matrix(werner);
  const Eigen::Vector4cd singlet = bell::psi_minus();
  std::vector<DecoherenceComparison> rows;
  rows.reserve(times.size());
  for (double t : times) {
    const TwoQubitState s = decohere_matrix(initial, gamma, gamma_star, t);
    rows.push_back({t, s.trace(), s.overlap(singlet),
                    werner_fidelity_decay(werner, gamma + 2.0 * gamma_star, t)});
  }
  return rows;
}

}  // namespace satrep
