#include "satrep/quadrature.hpp"

#include "satrep/errors.hpp"

namespace satrep {

double simpson(std::span<const double> y, double step) {
  const std::size_t n = y.size();
  if (n < 3 || n % 2 == 0) {
    throw QuadratureError("simpson: need an odd number of samples >= 3, got " + std::to_string(n));
  }
  double odd = 0.0;
  double even = 0.0;
  for (std::size_t i = 1; i + 1 < n; i += 2) odd += y[i];
  for (std::size_t i = 2; i + 1 < n; i += 2) even += y[i];
  return step / 3.0 * (y.front() + y.back() + 4.0 * odd + 2.0 * even);
}

bool simpson_half_grid(std::span<const double> y, double step, double& out) {
  const std::size_t n = y.size();
  if (n < 5 || n % 4 != 1) return false;
  const std::size_t m = (n - 1) / 2;  // number of coarse intervals, even
  double odd = 0.0;
  double even = 0.0;
  for (std::size_t j = 1; j < m; j += 2) odd += y[2 * j];
  for (std::size_t j = 2; j < m; j += 2) even += y[2 * j];
  out = 2.0 * step / 3.0 * (y.front() + y.back() + 4.0 * odd + 2.0 * even);
  return true;
}

}  // namespace satrep
