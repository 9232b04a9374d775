#include "polylim/cubic.hpp"

#include <cmath>

namespace polylim {

std::complex<double> eval_psi(const CubicDifferential& cd,
                              std::complex<double> z) {
  if (cd.zero_mode) return {0.0, 0.0};
  std::complex<double> zn{1.0, 0.0};
  for (int k = 0; k < cd.n; ++k) zn *= z;
  return cd.scale * zn;
}

double flat_metric_density(const CubicDifferential& cd,
                           std::complex<double> z) {
  if (cd.zero_mode)
    throw std::domain_error("flat_metric_density: undefined for psi == 0");
  return std::pow(std::abs(eval_psi(cd, z)), 2.0 / 3.0);
}

double flat_radius(int n, double t) {
  if (n < 0) throw std::invalid_argument("flat_radius: n must be >= 0");
  if (t < 0.0) throw std::domain_error("flat_radius: t must be >= 0");
  const double e = n / 3.0 + 1.0;
  return std::pow(t, e) / e;
}

double cone_angle(int n) {
  if (n < 0) throw std::invalid_argument("cone_angle: n must be >= 0");
  const double pi = 3.14159265358979323846;
  return 2.0 * pi + 2.0 * pi * n / 3.0;
}

}  // namespace polylim
