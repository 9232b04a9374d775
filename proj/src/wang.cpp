#include "polylim/wang.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <json.hpp>

namespace polylim {

namespace {

double pow2n(double rho, int n) {
  if (n == 0) return 1.0;
  double p = 1.0;
  for (int k = 0; k < 2 * n; ++k) p *= rho;
  return p;
}

// RHS of the radial equation at a node.
double rhs(const CubicDifferential& cd, double rho, double u) {
  if (cd.zero_mode) return 2.0 * std::exp(u);
  return 2.0 * (std::exp(u) - 2.0 * pow2n(rho, cd.n) * std::exp(-2.0 * u));
}

double drhs_du(const CubicDifferential& cd, double rho, double u) {
  if (cd.zero_mode) return 2.0 * std::exp(u);
  return 2.0 * (std::exp(u) + 4.0 * pow2n(rho, cd.n) * std::exp(-2.0 * u));
}

// Thomas algorithm, in-place on copies.
std::vector<double> solve_tridiag(std::vector<double> lo, std::vector<double> di,
                                  std::vector<double> up, std::vector<double> b) {
  const int n = static_cast<int>(di.size());
  for (int i = 1; i < n; ++i) {
    const double w = lo[i] / di[i - 1];
    di[i] -= w * up[i - 1];
    b[i] -= w * b[i - 1];
  }
  std::vector<double> x(n);
  x[n - 1] = b[n - 1] / di[n - 1];
  for (int i = n - 2; i >= 0; --i) x[i] = (b[i] - up[i] * x[i + 1]) / di[i];
  return x;
}

}  // namespace

double boundary_condition(const CubicDifferential& cd, double rho,
                          double poincare_radius) {
  if (cd.zero_mode) {
    const double R = poincare_radius;
    if (R <= 0.0)
      throw std::domain_error("boundary_condition: zero_mode needs a Poincare radius");
    if (rho >= R)
      throw std::domain_error("boundary_condition: Poincare value undefined at rho >= R");
    const double d = R * R - rho * rho;
    return std::log(4.0 * R * R / (d * d));
  }
  if (cd.n >= 1 && rho <= 0.0)
    throw std::domain_error("boundary_condition: log singularity at rho = 0");
  return std::log(2.0) / 3.0 + (2.0 * cd.n / 3.0) * std::log(rho);
}

double ConformalFactor::u_at(double rho) const {
  const int m = grid.m;
  const double h = grid.h();
  double s = rho / h;
  int i0 = static_cast<int>(std::floor(s)) - 1;
  i0 = std::clamp(i0, 0, m - 3);
  // 4-point Lagrange on nodes i0..i0+3
  double val = 0.0;
  for (int j = 0; j < 4; ++j) {
    double lj = 1.0;
    for (int k = 0; k < 4; ++k) {
      if (k == j) continue;
      lj *= (s - (i0 + k)) / static_cast<double>(j - k);
    }
    val += lj * u[i0 + j];
  }
  return val;
}

double ConformalFactor::du_at(double rho) const {
  const int m = grid.m;
  const double h = grid.h();
  double s = rho / h;
  int i0 = static_cast<int>(std::floor(s)) - 1;
  i0 = std::clamp(i0, 0, m - 3);
  double val = 0.0;
  for (int j = 0; j < 4; ++j) {
    // derivative of the Lagrange basis at s
    double sum = 0.0;
    for (int a = 0; a < 4; ++a) {
      if (a == j) continue;
      double term = 1.0 / static_cast<double>(j - a);
      for (int k = 0; k < 4; ++k) {
        if (k == j || k == a) continue;
        term *= (s - (i0 + k)) / static_cast<double>(j - k);
      }
      sum += term;
    }
    val += sum * u[i0 + j];
  }
  return val / h;
}

ConformalFactor solve(const CubicDifferential& cd, const RadialGrid& grid,
                      const SolverConfig& config) {
  if (config.tol <= 0.0) throw std::invalid_argument("solve: tol must be > 0");
  if (config.damping <= 0.0 || config.damping > 1.0)
    throw std::invalid_argument("solve: damping must be in (0,1]");
  const int m = grid.m;
  const double h = grid.h();
  double poincare_radius = 0.0;
  if (cd.zero_mode) {
    poincare_radius =
        config.poincare_radius > 0.0 ? config.poincare_radius : grid.r / 0.9;
    if (poincare_radius <= grid.r)
      throw std::invalid_argument("solve: zero_mode needs poincare_radius > grid.r");
  }
  auto bc = [&](double rho) { return boundary_condition(cd, rho, poincare_radius); };

  std::vector<double> u(m + 1);
  if (config.init == NewtonInit::Hyperbolic) {
    // Poincare metric of the disk of radius r, clamped near the rim.
    const double R = cd.zero_mode ? poincare_radius : grid.r * 1.01;
    for (int k = 0; k <= m; ++k) {
      const double rho = std::min(grid.rho(k), 0.99 * R);
      const double d = R * R - rho * rho;
      u[k] = std::log(4.0 * R * R / (d * d));
    }
  } else {
    // Flat initializer, clamped at rho < 1 to its value at 1.
    for (int k = 0; k <= m; ++k) {
      if (cd.zero_mode) {
        u[k] = std::log(2.0) / 3.0;
      } else {
        const double rho = std::max(grid.rho(k), 1.0);
        u[k] = std::log(2.0) / 3.0 + (2.0 * cd.n / 3.0) * std::log(rho);
      }
    }
  }
  u[m] = bc(grid.r);

  // Residual F_k on unknowns k = 0..m-1 (Dirichlet at k = m).
  auto residual = [&](const std::vector<double>& v, std::vector<double>& F) {
    F[0] = 4.0 * (v[1] - v[0]) / (h * h) - rhs(cd, 0.0, v[0]);
    for (int k = 1; k < m; ++k) {
      const double rho = grid.rho(k);
      F[k] = (v[k + 1] - 2.0 * v[k] + v[k - 1]) / (h * h) +
             (v[k + 1] - v[k - 1]) / (2.0 * rho * h) - rhs(cd, rho, v[k]);
    }
  };

  std::vector<double> F(m), lo(m), di(m), up(m);
  double resnorm = 0.0;
  for (int it = 0; it <= config.max_iter; ++it) {
    residual(u, F);
    resnorm = 0.0;
    for (double f : F) resnorm = std::max(resnorm, std::abs(f));
    if (resnorm <= config.tol) {
      ConformalFactor cf;
      cf.grid = grid;
      cf.u = u;
      cf.cd = cd;
      cf.residual_norm = resnorm;
      cf.accepted = true;
      cf.poincare_radius = poincare_radius;
      return cf;
    }
    if (it == config.max_iter) break;

    lo[0] = 0.0;
    di[0] = -4.0 / (h * h) - drhs_du(cd, 0.0, u[0]);
    up[0] = 4.0 / (h * h);
    for (int k = 1; k < m; ++k) {
      const double rho = grid.rho(k);
      lo[k] = 1.0 / (h * h) - 1.0 / (2.0 * rho * h);
      di[k] = -2.0 / (h * h) - drhs_du(cd, rho, u[k]);
      up[k] = 1.0 / (h * h) + 1.0 / (2.0 * rho * h);
    }
    up[m - 1] = 0.0;  // Dirichlet neighbor folded into the RHS already (u[m] fixed)
    std::vector<double> b(m);
    for (int k = 0; k < m; ++k) b[k] = -F[k];
    std::vector<double> delta = solve_tridiag(lo, di, up, b);
    double step = 0.0, usup = 0.0;
    for (int k = 0; k < m; ++k) {
      u[k] += config.damping * delta[k];
      step = std::max(step, std::abs(delta[k]));
      usup = std::max(usup, std::abs(u[k]));
    }
    // The residual floor scales like eps/h^2; accept once the Newton step
    // stagnates at round-off even if the raw tolerance is out of reach.
    if (step <= 1e-14 * (1.0 + usup)) {
      residual(u, F);
      resnorm = 0.0;
      for (double f : F) resnorm = std::max(resnorm, std::abs(f));
      ConformalFactor cf;
      cf.grid = grid;
      cf.u = u;
      cf.cd = cd;
      cf.residual_norm = resnorm;
      cf.accepted = true;
      cf.poincare_radius = poincare_radius;
      return cf;
    }
  }
  throw SolveError("wang solve: Newton did not converge", resnorm);
}

WangPointwise pointwise_wang(const ConformalFactor& cf, double rho) {
  if (!cf.accepted) throw std::invalid_argument("pointwise_wang: cf not accepted");
  const int m = cf.grid.m;
  const double h = cf.grid.h();
  int k = static_cast<int>(std::lround(rho / h));
  k = std::clamp(k, 0, m - 1);
  double lap;
  if (k == 0) {
    lap = 4.0 * (cf.u[1] - cf.u[0]) / (h * h);
  } else {
    lap = (cf.u[k + 1] - 2.0 * cf.u[k] + cf.u[k - 1]) / (h * h) +
          (cf.u[k + 1] - cf.u[k - 1]) / (2.0 * cf.grid.rho(k) * h);
  }
  WangPointwise out;
  out.kappa = -0.5 * std::exp(-cf.u[k]) * lap;
  out.psi_norm_sq = cf.cd.zero_mode
                        ? 0.0
                        : pow2n(cf.grid.rho(k), cf.cd.n) * std::exp(-3.0 * cf.u[k]);
  return out;
}

bool comparison_check(const ConformalFactor& cf_sub,
                      const ConformalFactor& cf_super, double eps) {
  if (cf_sub.grid.m != cf_super.grid.m ||
      std::abs(cf_sub.grid.r - cf_super.grid.r) > 1e-14)
    throw std::invalid_argument("comparison_check: grid mismatch");
  for (int k = 0; k <= cf_sub.grid.m; ++k)
    if (cf_super.u[k] < cf_sub.u[k] - eps) return false;
  return true;
}

double center_estimate(const ConformalFactor& cf) {
  if (!cf.accepted) throw std::invalid_argument("center_estimate: cf not accepted");
  if (cf.cd.zero_mode)
    throw std::invalid_argument("center_estimate: undefined in zero_mode");
  const int m = cf.grid.m;
  const double Rtot = flat_radius(cf.cd.n, cf.grid.r);
  int best = 0;
  double bestval = -1.0;
  for (int k = 0; k <= m; ++k) {
    const double R = flat_radius(cf.cd.n, cf.grid.rho(k));
    const double margin = std::min(R, Rtot - R);
    if (margin > bestval) {
      bestval = margin;
      best = k;
    }
  }
  const double rho = cf.grid.rho(best);
  return 2.0 * pow2n(rho, cf.cd.n) * std::exp(-3.0 * cf.u[best]);
}

double radial_symmetry_deviation_2d(const CubicDifferential& cd, double r,
                                    int N, const ConformalFactor& rad,
                                    double tol, int max_sweeps) {
  if (cd.zero_mode)
    throw std::invalid_argument("radial_symmetry_deviation_2d: zero_mode unsupported");
  const double h = r / N;
  const int dim = 2 * N + 1;
  auto idx = [&](int i, int j) { return i * dim + j; };
  std::vector<double> u(dim * dim);
  std::vector<char> interior(dim * dim, 0);
  auto uflat = [&](double rho) {
    return std::log(2.0) / 3.0 + (2.0 * cd.n / 3.0) * std::log(std::max(rho, 1.0));
  };
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      const double x = (i - N) * h, y = (j - N) * h;
      const double rho = std::hypot(x, y);
      interior[idx(i, j)] = rho < r - 0.5 * h;
      u[idx(i, j)] = uflat(rho);
    }
  // Nonlinear Gauss-Seidel with pointwise Newton.
  const double omega = 1.8;
  double res = 0.0;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    res = 0.0;
    for (int i = 1; i < dim - 1; ++i)
      for (int j = 1; j < dim - 1; ++j) {
        if (!interior[idx(i, j)]) continue;
        const double x = (i - N) * h, y = (j - N) * h;
        const double rho = std::hypot(x, y);
        const double nb = u[idx(i - 1, j)] + u[idx(i + 1, j)] + u[idx(i, j - 1)] +
                          u[idx(i, j + 1)];
        const double uc = u[idx(i, j)];
        const double F = (nb - 4.0 * uc) / (h * h) - rhs(cd, rho, uc);
        const double dF = -4.0 / (h * h) - drhs_du(cd, rho, uc);
        u[idx(i, j)] = uc - omega * F / dF;
        res = std::max(res, std::abs(F));
      }
    if (res <= tol) break;
  }
  if (res > tol)
    throw SolveError("radial_symmetry_deviation_2d: Gauss-Seidel stalled", res);
  double dev = 0.0;
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      if (!interior[idx(i, j)]) continue;
      const double rho = std::hypot((i - N) * h, (j - N) * h);
      if (rho > rad.grid.r) continue;
      dev = std::max(dev, std::abs(u[idx(i, j)] - rad.u_at(rho)));
    }
  return dev;
}

void write_csv(const ConformalFactor& cf, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_csv: cannot open " + path);
  out.precision(17);
  out << "rho,u\n";
  for (int k = 0; k <= cf.grid.m; ++k)
    out << cf.grid.rho(k) << "," << cf.u[k] << "\n";
}

std::string metadata_json(const ConformalFactor& cf, double tol) {
  nlohmann::json j;
  j["n"] = cf.cd.n;
  j["r"] = cf.grid.r;
  j["m"] = cf.grid.m;
  j["tol"] = tol;
  j["residual_norm"] = cf.residual_norm;
  j["zero_mode"] = cf.cd.zero_mode;
  if (cf.cd.zero_mode) j["poincare_radius"] = cf.poincare_radius;
  return j.dump(2);
}

}  // namespace polylim
