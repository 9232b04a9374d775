#pragma once

#include <string>
#include <vector>

#include "polylim/cubic.hpp"

namespace polylim {

struct RadialGrid {
  double r = 1.0;  // disk radius in the z-chart
  int m = 64;      // radial sample count, nodes rho_k = k*r/m

  RadialGrid() = default;
  RadialGrid(double r_, int m_) : r(r_), m(m_) {
    if (r <= 0.0) throw std::invalid_argument("RadialGrid: r must be > 0");
    if (m < 64) throw std::invalid_argument("RadialGrid: m must be >= 64");
  }
  double h() const { return r / m; }
  double rho(int k) const { return k * r / m; }
};

enum class NewtonInit { Flat, Hyperbolic };

struct SolverConfig {
  double tol = 1e-10;   // Newton residual sup-norm
  int max_iter = 50;
  double damping = 1.0;
  NewtonInit init = NewtonInit::Flat;
  // zero_mode only: radius of the Poincare disk supplying boundary data.
  // The grid radius must stay strictly below it. 0 means grid.r / 0.9.
  double poincare_radius = 0.0;
};

struct SolveError : std::runtime_error {
  double last_residual;
  SolveError(const std::string& what, double res)
      : std::runtime_error(what), last_residual(res) {}
};

// Discretized log conformal factor, g = e^u |dz|^2.
struct ConformalFactor {
  RadialGrid grid;
  std::vector<double> u;  // one value per node, size m+1
  CubicDifferential cd;
  double residual_norm = 0.0;
  bool accepted = false;
  double poincare_radius = 0.0;  // zero_mode bookkeeping

  // Local cubic (4-point Lagrange) interpolation of u and u'.
  double u_at(double rho) const;
  double du_at(double rho) const;
};

// Log-density of the exact flat solution (2|psi|^2)^{1/3} |dz|^2:
// u_flat(rho) = (1/3) ln 2 + (2n/3) ln rho. In zero_mode returns the
// Poincare value ln(4R^2/(R^2-rho^2)^2) for disk radius R = poincare_radius.
double boundary_condition(const CubicDifferential& cd, double rho,
                          double poincare_radius = 0.0);

// Radial Newton BVP for u'' + u'/rho = 2(e^u - 2 rho^{2n} e^{-2u}) with
// u'(0) = 0 and Dirichlet data boundary_condition(cd, r) at rho = r.
ConformalFactor solve(const CubicDifferential& cd, const RadialGrid& grid,
                      const SolverConfig& config = {});

struct WangPointwise {
  double kappa;        // -(1/2) e^{-u} (discrete Laplacian of u)
  double psi_norm_sq;  // |psi|^2 e^{-3u}
};
WangPointwise pointwise_wang(const ConformalFactor& cf, double rho);

// u_super >= u_sub - eps at every node.
bool comparison_check(const ConformalFactor& cf_sub,
                      const ConformalFactor& cf_super, double eps = 1e-9);

// 2*|psi|^2 e^{-3u} at the node farthest (in h-distance) from 0 and dB.
double center_estimate(const ConformalFactor& cf);

// Coarse 2D five-point-Laplacian solve on an (2N+1)^2 lattice over the disk,
// Dirichlet u_flat outside. Returns the sup deviation from the radial
// solution rad on the interior nodes.
double radial_symmetry_deviation_2d(const CubicDifferential& cd, double r,
                                    int N, const ConformalFactor& rad,
                                    double tol = 1e-9, int max_sweeps = 20000);

// CSV table (rho,u) and JSON metadata record (n, r, m, tol, residual_norm).
void write_csv(const ConformalFactor& cf, const std::string& path);
std::string metadata_json(const ConformalFactor& cf, double tol);

}  // namespace polylim
