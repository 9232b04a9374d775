#include <doctest.h>

#include <cmath>
#include <vector>

#include "polylim/wang.hpp"

using namespace polylim;

namespace {

const double kLn2Third = std::log(2.0) / 3.0;

// Independent shooting oracle for the radial problem: integrate the IVP
// u'' + u'/rho = 2(e^u - 2 rho^{2n} e^{-2u}), u(0) = u0, u'(0) = 0 with RK4
// and bisect on u0 until u(r) hits the flat boundary value. Near rho = 0 the
// regular solution has u''(0) = e^{u0} - 2 [n=0] e^{-2u0} (half the limit of
// the right side, by symmetry of the Laplacian), which seeds the first step.
// The IVP is violently unstable (off solutions blow up to +-infinity well
// before rho = r), so divergence is detected and labeled by its sign; the
// bisection threshold between the two divergence labels pins u(0).
double shoot_once(int n, double u0, double r, int steps) {
  const auto f = [n](double rho, double u, double v) {
    const double rhs =
        2.0 * (std::exp(u) - 2.0 * std::pow(rho, 2 * n) * std::exp(-2.0 * u));
    return rhs - v / rho;
  };
  const double h = r / steps;
  const double a0 = std::exp(u0) - (n == 0 ? 2.0 * std::exp(-2.0 * u0) : 0.0);
  double rho = h;
  double u = u0 + 0.5 * a0 * h * h;
  double v = a0 * h;
  for (int k = 1; k < steps; ++k) {
    const double k1u = v, k1v = f(rho, u, v);
    const double k2u = v + 0.5 * h * k1v,
                 k2v = f(rho + 0.5 * h, u + 0.5 * h * k1u, v + 0.5 * h * k1v);
    const double k3u = v + 0.5 * h * k2v,
                 k3v = f(rho + 0.5 * h, u + 0.5 * h * k2u, v + 0.5 * h * k2v);
    const double k4u = v + h * k3v,
                 k4v = f(rho + h, u + h * k3u, v + h * k3v);
    const double un = u + h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
    const double vn = v + h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    if (!std::isfinite(un) || !std::isfinite(vn) || std::abs(un) > 30.0) {
      if (std::isfinite(un) && std::abs(un) > 30.0)
        return un > 0.0 ? 1e9 : -1e9;
      return (u > 0.0 || v > 0.0) ? 1e9 : -1e9;  // sign of the last finite state
    }
    u = un;
    v = vn;
    rho += h;
  }
  return u;
}

double shooting_center_value(int n, double r, int steps) {
  const double target = boundary_condition(CubicDifferential(n), r);
  double lo = -6.0, hi = 2.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (shoot_once(n, mid, r, steps) < target)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("boundary_condition values") {
  CHECK(boundary_condition(CubicDifferential(0), 3.7) ==
        doctest::Approx(kLn2Third).epsilon(1e-14));
  CHECK(boundary_condition(CubicDifferential(1), 1.0) ==
        doctest::Approx(kLn2Third).epsilon(1e-14));
  CHECK(boundary_condition(CubicDifferential(1), std::exp(1.0)) ==
        doctest::Approx(kLn2Third + 2.0 / 3.0).epsilon(1e-13));
  // zero mode: Poincare value at the center of a radius-2 disk.
  const CubicDifferential zm(0, {1, 0}, true);
  CHECK(boundary_condition(zm, 0.0, 2.0) ==
        doctest::Approx(std::log(4.0 * 4.0 / 16.0)).epsilon(1e-13));
}

TEST_CASE("n=0 exact constant solution") {
  const ConformalFactor cf =
      solve(CubicDifferential(0), RadialGrid(6.0, 512));
  CHECK(cf.accepted);
  double worst = 0.0;
  for (double ui : cf.u) worst = std::max(worst, std::abs(ui - kLn2Third));
  CHECK(worst <= 1e-8);
  const auto pw = pointwise_wang(cf, 2.3);
  CHECK(pw.kappa == doctest::Approx(0.0).epsilon(1e-6));
  CHECK(std::abs(pw.kappa) < 1e-6);
  CHECK(pw.psi_norm_sq == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(center_estimate(cf) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("zero mode matches Poincare with O(h^2) refinement") {
  const CubicDifferential zm(0, {1, 0}, true);
  const double r = 0.9, R = 1.0;
  SolverConfig cfg;
  cfg.init = NewtonInit::Hyperbolic;
  cfg.poincare_radius = R;
  const auto exact = [&](double rho) {
    return std::log(4.0 * R * R / ((R * R - rho * rho) * (R * R - rho * rho)));
  };
  double errs[2];
  const int ms[2] = {128, 256};
  for (int pass = 0; pass < 2; ++pass) {
    const ConformalFactor cf = solve(zm, RadialGrid(r, ms[pass]), cfg);
    CHECK(cf.accepted);
    double worst = 0.0;
    for (int k = 0; k <= ms[pass]; ++k)
      worst = std::max(worst, std::abs(cf.u[k] - exact(cf.grid.rho(k))));
    errs[pass] = worst;
  }
  CHECK(errs[0] < 5e-4);
  const double ratio = errs[0] / errs[1];
  CHECK(ratio > 3.5);
  CHECK(ratio < 4.5);
  const auto cf = solve(zm, RadialGrid(r, 256), cfg);
  const auto pw = pointwise_wang(cf, 0.45);
  CHECK(pw.kappa == doctest::Approx(-1.0).epsilon(1e-3));
  CHECK(pw.psi_norm_sq == 0.0);
}

TEST_CASE("n=1 center value against shooting oracle") {
  const double r = 8.0;
  const ConformalFactor c1 = solve(CubicDifferential(1), RadialGrid(r, 1024));
  const ConformalFactor c2 = solve(CubicDifferential(1), RadialGrid(r, 2048));
  CHECK(c1.accepted);
  // Second-order solver, so Richardson-extrapolate the center value.
  const double solver = c2.u[0] + (c2.u[0] - c1.u[0]) / 3.0;
  const double a = shooting_center_value(1, r, 4000);
  const double b = shooting_center_value(1, r, 8000);
  const double oracle = b + (b - a) / 15.0;
  CHECK(std::abs(b - a) < 1e-8);
  CHECK(std::abs(solver - oracle) < 1e-6);
}

TEST_CASE("n=1 pointwise Wang at the zero") {
  const ConformalFactor cf = solve(CubicDifferential(1), RadialGrid(4.0, 512));
  const auto pw = pointwise_wang(cf, 0.0);
  CHECK(pw.psi_norm_sq == 0.0);
  CHECK(pw.kappa == doctest::Approx(-1.0).epsilon(1e-3));
}

TEST_CASE("comparison principle and flat barrier") {
  const ConformalFactor cf = solve(CubicDifferential(1), RadialGrid(4.0, 256));
  CHECK(comparison_check(cf, cf));
  // Scaling an exact solution up gives a supersolution.
  ConformalFactor scaled = cf;
  for (double& ui : scaled.u) ui += std::log(1.5);
  CHECK(comparison_check(cf, scaled));
  CHECK_FALSE(comparison_check(scaled, cf));
  // Flat barrier at two resolutions: the Blaschke metric dominates the flat
  // metric, u >= u_flat away from the center (equality on the boundary).
  for (int m : {256, 512}) {
    const ConformalFactor c = solve(CubicDifferential(1), RadialGrid(4.0, m));
    double worst = 0.0;
    for (int k = 1; k <= m; ++k)
      worst = std::min(
          worst,
          c.u[k] - boundary_condition(CubicDifferential(1), c.grid.rho(k)));
    CHECK(worst >= -1e-9);
  }
}

TEST_CASE("center_estimate monotone in r") {
  const double c4 =
      center_estimate(solve(CubicDifferential(1), RadialGrid(4.0, 256)));
  const double c8 =
      center_estimate(solve(CubicDifferential(1), RadialGrid(8.0, 512)));
  CHECK(c8 > c4);
  CHECK(c4 <= 1.0 + 1e-9);
  CHECK(c8 <= 1.0 + 1e-9);
}

TEST_CASE("nonpositive curvature across n and r") {
  for (int n : {1, 2, 3})
    for (double r : {4.0, 8.0}) {
      const ConformalFactor cf =
          solve(CubicDifferential(n), RadialGrid(r, 256));
      CHECK(cf.accepted);
      for (int k = 0; k <= 256; ++k) {
        const auto pw = pointwise_wang(cf, cf.grid.rho(k));
        CHECK(2.0 * pw.psi_norm_sq <= 1.0 + 1e-6);
      }
    }
}

TEST_CASE("2d verification of radial symmetry") {
  const ConformalFactor cf = solve(CubicDifferential(1), RadialGrid(4.0, 256));
  const double dev = radial_symmetry_deviation_2d(CubicDifferential(1), 4.0,
                                                  48, cf, 1e-10, 40000);
  CHECK(dev < 2e-2);
}

TEST_CASE("solver rejects bad input") {
  CHECK_THROWS_AS(RadialGrid(-1.0, 128), std::invalid_argument);
  CHECK_THROWS_AS(RadialGrid(1.0, 16), std::invalid_argument);
}
