// Benchmark: OpenMP kernels against their serial reference implementations.
// Reports wall time, speedup, and a cross-check that both paths agree.

#include <omp.h>

#include <cmath>
#include <cstdio>
#include <vector>

#include "polylim/cubic.hpp"
#include "polylim/developing.hpp"
#include "polylim/gh_metric.hpp"
#include "polylim/wang.hpp"

namespace {

using namespace polylim;

template <typename F>
double timed(F&& f, int reps) {
  f();  // warm-up
  const double t0 = omp_get_wtime();
  for (int i = 0; i < reps; ++i) f();
  return (omp_get_wtime() - t0) / reps;
}

}  // namespace

int main() {
  std::printf("threads: %d\n", omp_get_max_threads());

  // Boundary development: one radial ODE integration per ray.
  {
    const ConformalFactor cf = solve(CubicDifferential(1), RadialGrid(6.0, 1024));
    const ConnectionField conn = assemble_connection(cf);
    const double rho = 5.0;
    const int rays = 720, steps = 512;
    std::vector<Eigen::Vector3d> par, ser;
    const double tp = timed([&] { par = develop_boundary(conn, rho, rays, steps); }, 3);
    const double ts =
        timed([&] { ser = develop_boundary_serial(conn, rho, rays, steps); }, 3);
    double dev = 0.0;
    for (int i = 0; i < rays; ++i) dev = std::max(dev, (par[i] - ser[i]).norm());
    std::printf("develop_boundary   %4d rays x %4d steps: parallel %8.3f ms,"
                " serial %8.3f ms, speedup %.2fx, max dev %.3g\n",
                rays, steps, 1e3 * tp, 1e3 * ts, ts / tp, dev);
  }

  // Pointed geodesic distances: one Dijkstra sweep per sample point.
  {
    const ConformalFactor cf = solve(CubicDifferential(1), RadialGrid(12.0, 1024));
    ConformalDensity lam = [&](double x, double y) {
      return std::exp(0.5 * cf.u_at(std::hypot(x, y)));
    };
    const auto samples = ring_samples(4.2, 16);
    PointedSample par, ser;
    const double tp =
        timed([&] { par = geodesic_distances(lam, 6.0, 128, samples); }, 2);
    const double ts =
        timed([&] { ser = geodesic_distances_serial(lam, 6.0, 128, samples); }, 2);
    const double dev = (par.dist - ser.dist).cwiseAbs().maxCoeff();
    std::printf("geodesic_distances %4zu sources on %3d^2 grid: parallel %8.3f ms,"
                " serial %8.3f ms, speedup %.2fx, max dev %.3g\n",
                samples.size(), 2 * 128 + 1, 1e3 * tp, 1e3 * ts, ts / tp, dev);
  }
  return 0;
}
