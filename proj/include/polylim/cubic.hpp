#pragma once

#include <complex>
#include <stdexcept>

namespace polylim {

// Model cubic differential scale * z^n dz^3 on a disk. |scale| is restricted
// to 1: a rescaling w = lambda*z absorbs any modulus since the differential
// has weight n+3 under z -> lambda*z, so only the phase of scale matters.
// zero_mode (psi == 0) exists to exercise the solver against the exact
// hyperbolic metric and is rejected by the polygon-limit pipeline.
struct CubicDifferential {
  int n = 0;
  std::complex<double> scale{1.0, 0.0};
  bool zero_mode = false;

  CubicDifferential() = default;
  CubicDifferential(int n_, std::complex<double> scale_ = {1.0, 0.0},
                    bool zero_mode_ = false)
      : n(n_), scale(scale_), zero_mode(zero_mode_) {
    if (n < 0) throw std::invalid_argument("CubicDifferential: n must be >= 0");
    if (!zero_mode && std::abs(std::abs(scale) - 1.0) > 1e-12)
      throw std::invalid_argument("CubicDifferential: |scale| must be 1");
  }

  CubicDifferential conjugated() const {
    return CubicDifferential(n, std::conj(scale), zero_mode);
  }
};

std::complex<double> eval_psi(const CubicDifferential& cd,
                              std::complex<double> z);

// Density of the flat metric h = |psi|^{2/3}.
double flat_metric_density(const CubicDifferential& cd,
                           std::complex<double> z);

// h-distance from z to 0 as a function of t = |z|:
// R(t) = (n/3+1)^{-1} t^{n/3+1}.
double flat_radius(int n, double t);

// Cone angle at a zero of multiplicity n: 2*pi + 2*pi*n/3.
double cone_angle(int n);

}  // namespace polylim
