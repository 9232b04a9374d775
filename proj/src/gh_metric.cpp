#include "polylim/gh_metric.hpp"

#include <cmath>
#include <complex>
#include <fstream>
#include <nlohmann/json.hpp>
#include <numbers>
#include <queue>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace polylim {

namespace {

struct GridGraph {
  double extent;
  int m;                       // nodes at (i, j) * h, -m..m
  double h;
  std::vector<int> id;         // (2m+1)^2 -> node index or -1
  std::vector<Eigen::Vector2d> pos;

  int raw(int i, int j) const { return (i + m) * (2 * m + 1) + (j + m); }
  int node(int i, int j) const {
    if (i < -m || i > m || j < -m || j > m) return -1;
    return id[raw(i, j)];
  }
};

GridGraph build_grid(double extent, int m) {
  if (m < 8) throw std::invalid_argument("geodesic_distances: grid_m >= 8");
  if (extent <= 0.0)
    throw std::invalid_argument("geodesic_distances: extent > 0");
  GridGraph g{extent, m, extent / m, {}, {}};
  g.id.assign((2 * m + 1) * (2 * m + 1), -1);
  for (int i = -m; i <= m; ++i)
    for (int j = -m; j <= m; ++j) {
      const Eigen::Vector2d p(i * g.h, j * g.h);
      if (p.norm() <= extent + 1e-12) {
        g.id[g.raw(i, j)] = static_cast<int>(g.pos.size());
        g.pos.push_back(p);
      }
    }
  return g;
}

constexpr int kOffsets[16][2] = {
    {1, 0},  {0, 1},  {-1, 0}, {0, -1}, {1, 1},  {1, -1}, {-1, 1}, {-1, -1},
    {2, 1},  {1, 2},  {-1, 2}, {-2, 1}, {-2, -1}, {-1, -2}, {1, -2}, {2, -1}};

std::vector<double> dijkstra(const GridGraph& g,
                             const std::vector<double>& lam, int src) {
  const int n = static_cast<int>(g.pos.size());
  std::vector<double> dist(n, std::numeric_limits<double>::infinity());
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  dist[src] = 0.0;
  heap.emplace(0.0, src);
  // Rebuild (i, j) from position for neighbor lookups.
  const auto ij = [&](int v) {
    return std::pair<int, int>(
        static_cast<int>(std::lround(g.pos[v].x() / g.h)),
        static_cast<int>(std::lround(g.pos[v].y() / g.h)));
  };
  while (!heap.empty()) {
    const auto [d, v] = heap.top();
    heap.pop();
    if (d > dist[v] + 1e-300) continue;
    const auto [i, j] = ij(v);
    for (const auto& off : kOffsets) {
      const int w = g.node(i + off[0], j + off[1]);
      if (w < 0) continue;
      const double len =
          g.h * std::sqrt(double(off[0] * off[0] + off[1] * off[1]));
      const double cand = d + 0.5 * (lam[v] + lam[w]) * len;
      if (cand < dist[w] - 1e-300) {
        dist[w] = cand;
        heap.emplace(cand, w);
      }
    }
  }
  return dist;
}

PointedSample run(const ConformalDensity& lambda, double extent, int grid_m,
                  const std::vector<Eigen::Vector2d>& samples, bool parallel) {
  if (samples.empty())
    throw std::invalid_argument("geodesic_distances: no samples");
  const GridGraph g = build_grid(extent, grid_m);
  std::vector<double> lam(g.pos.size());
  for (std::size_t v = 0; v < g.pos.size(); ++v) {
    lam[v] = lambda(g.pos[v].x(), g.pos[v].y());
    if (!(lam[v] > 0.0) || !std::isfinite(lam[v]))
      throw std::domain_error("geodesic_distances: density not positive");
  }
  const int k = static_cast<int>(samples.size());
  std::vector<int> src(k);
  PointedSample out;
  out.pts.resize(k);
  for (int a = 0; a < k; ++a) {
    if (samples[a].norm() > extent)
      throw std::invalid_argument("geodesic_distances: sample outside disk");
    const int i = static_cast<int>(std::lround(samples[a].x() / g.h));
    const int j = static_cast<int>(std::lround(samples[a].y() / g.h));
    int v = g.node(i, j);
    if (v < 0) {
      // Snapped outside the disk rim; fall back to a brute nearest node.
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t u = 0; u < g.pos.size(); ++u) {
        const double d = (g.pos[u] - samples[a]).norm();
        if (d < best) {
          best = d;
          v = static_cast<int>(u);
        }
      }
    }
    src[a] = v;
    out.pts[a] = g.pos[v];
  }
  out.dist.setZero(k, k);
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (int a = 0; a < k; ++a) {
    const auto d = dijkstra(g, lam, src[a]);
    for (int b = 0; b < k; ++b) out.dist(a, b) = d[src[b]];
  }
  return out;
}

}  // namespace

PointedSample geodesic_distances(const ConformalDensity& lambda, double extent,
                                 int grid_m,
                                 const std::vector<Eigen::Vector2d>& samples,
                                 bool parallel) {
  return run(lambda, extent, grid_m, samples, parallel);
}

PointedSample geodesic_distances_serial(
    const ConformalDensity& lambda, double extent, int grid_m,
    const std::vector<Eigen::Vector2d>& samples) {
  return run(lambda, extent, grid_m, samples, false);
}

double hyperbolic_distance(const Eigen::Vector2d& z, const Eigen::Vector2d& w,
                           double R) {
  const std::complex<double> zc(z.x(), z.y()), wc(w.x(), w.y());
  if (std::abs(zc) >= R || std::abs(wc) >= R)
    throw std::invalid_argument("hyperbolic_distance: point outside disk");
  const double t = std::abs(R * (zc - wc) / (R * R - zc * std::conj(wc)));
  return 2.0 * std::atanh(t);
}

PointedSample hyperbolic_sample(const std::vector<Eigen::Vector2d>& samples,
                                double R) {
  PointedSample s;
  s.pts = samples;
  const int k = static_cast<int>(samples.size());
  s.dist.setZero(k, k);
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b)
      s.dist(a, b) = hyperbolic_distance(samples[a], samples[b], R);
  return s;
}

double gh_discrepancy(const PointedSample& a, const PointedSample& b) {
  if (a.dist.rows() != b.dist.rows())
    throw std::invalid_argument("gh_discrepancy: sample sizes differ");
  return 0.5 * (a.dist - b.dist).cwiseAbs().maxCoeff();
}

std::vector<Eigen::Vector2d> ring_samples(double radius, int k) {
  if (k < 1) throw std::invalid_argument("ring_samples: k >= 1");
  std::vector<Eigen::Vector2d> pts{Eigen::Vector2d::Zero()};
  for (int i = 0; i < k; ++i) {
    const double th = 2.0 * std::numbers::pi * i / k;
    pts.emplace_back(radius * std::cos(th), radius * std::sin(th));
  }
  return pts;
}

double flat_metrication_error(double extent, int grid_m, int k) {
  const auto samples = ring_samples(0.8 * extent, k);
  const auto s =
      geodesic_distances([](double, double) { return 1.0; }, extent, grid_m,
                         samples, true);
  double worst = 0.0;
  const int n = static_cast<int>(samples.size());
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      if (a == b) continue;
      const double exact = (s.pts[a] - s.pts[b]).norm();
      worst = std::max(worst, std::abs(s.dist(a, b) - exact) / exact);
    }
  return worst;
}

void write_sample_csv(const PointedSample& s, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_sample_csv: cannot open " + path);
  out.precision(15);
  out << "i,x,y";
  for (int b = 0; b < s.dist.cols(); ++b) out << ",d" << b;
  out << "\n";
  for (int a = 0; a < s.dist.rows(); ++a) {
    out << a << "," << s.pts[a].x() << "," << s.pts[a].y();
    for (int b = 0; b < s.dist.cols(); ++b) out << "," << s.dist(a, b);
    out << "\n";
  }
}

std::string gh_report_json(const PointedSample& a, const PointedSample& b) {
  nlohmann::json j;
  j["samples"] = a.dist.rows();
  j["discrepancy"] = gh_discrepancy(a, b);
  j["max_distance_a"] = a.dist.maxCoeff();
  j["max_distance_b"] = b.dist.maxCoeff();
  return j.dump(2);
}

}  // namespace polylim
