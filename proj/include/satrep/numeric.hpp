#pragma once

// Small helpers that let the model equations accept either a scalar or an
// Eigen array without branching at the call site.

#include <Eigen/Core>

#include <algorithm>
#include <cassert>
#include <cmath>

namespace satrep::numeric {

inline bool any_less(double x, double bound) { return x < bound; }
template <typename Derived>
bool any_less(const Eigen::ArrayBase<Derived>& x, double bound) {
  return (x < bound).any();
}

inline bool any_greater(double x, double bound) { return x > bound; }
template <typename Derived>
bool any_greater(const Eigen::ArrayBase<Derived>& x, double bound) {
  return (x > bound).any();
}

inline double min_value(double x) { return x; }
template <typename Derived>
double min_value(const Eigen::ArrayBase<Derived>& x) {
  return x.minCoeff();
}

inline double max_value(double x) { return x; }
template <typename Derived>
double max_value(const Eigen::ArrayBase<Derived>& x) {
  return x.maxCoeff();
}

inline double clamp(double x, double lo, double hi) { return std::clamp(x, lo, hi); }
template <typename Derived>
Eigen::ArrayXd clamp(const Eigen::ArrayBase<Derived>& x, double lo, double hi) {
  return x.max(lo).min(hi);
}

/// Clamp an efficiency into [0, 1]. Rounding may push it out by a few ulps;
/// anything larger is a model bug and trips the assertion in debug builds.
template <typename T>
auto clamp_unit(const T& x) {
  assert(!any_greater(x, 1.0 + 1e-12) && !any_less(x, -1e-12));
  return clamp(x, 0.0, 1.0);
}

}  // namespace satrep::numeric
