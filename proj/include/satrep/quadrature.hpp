#pragma once

#include <span>

namespace satrep {

/// Composite Simpson rule on uniformly spaced samples. Requires an odd
/// number of samples, at least three.
double simpson(std::span<const double> samples, double step);

/// Simpson estimate using every other sample of the same grid. Returns false
/// when the coarse grid does not have an even number of intervals.
bool simpson_half_grid(std::span<const double> samples, double step, double& out);

inline double relative_change(double coarse, double fine) {
  const double scale = fine != 0.0 ? (fine < 0.0 ? -fine : fine) : 1.0;
  const double diff = fine - coarse;
  return (diff < 0.0 ? -diff : diff) / scale;
}

}  // namespace satrep
