#include "polylim/polygon.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "polylim/svg.hpp"

namespace polylim {

namespace {

double cross2(const Eigen::Vector2d& o, const Eigen::Vector2d& a,
              const Eigen::Vector2d& b) {
  return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
}

// Andrew monotone chain over boundary point indices; ccw order. The chain
// uses exact sign tests; a cyclic second pass then prunes vertices whose
// turn is below a relative tolerance, so sampled straight edges collapse to
// their endpoints without the chain anchoring on an ulp-perturbed extreme.
std::vector<int> convex_hull_indices(const std::vector<Eigen::Vector2d>& pts) {
  const int n = static_cast<int>(pts.size());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int i, int j) {
    if (pts[i].x() != pts[j].x()) return pts[i].x() < pts[j].x();
    return pts[i].y() < pts[j].y();
  });
  auto build = [&](auto begin, auto end) {
    std::vector<int> h;
    for (auto it = begin; it != end; ++it) {
      while (h.size() >= 2 &&
             cross2(pts[h[h.size() - 2]], pts[h.back()], pts[*it]) <= 0.0)
        h.pop_back();
      h.push_back(*it);
    }
    return h;
  };
  std::vector<int> lower = build(order.begin(), order.end());
  std::vector<int> upper = build(order.rbegin(), order.rend());
  lower.pop_back();
  upper.pop_back();
  lower.insert(lower.end(), upper.begin(), upper.end());
  bool pruned = true;
  while (pruned && lower.size() > 3) {
    pruned = false;
    std::vector<int> keep;
    keep.reserve(lower.size());
    const int h = static_cast<int>(lower.size());
    for (int i = 0; i < h; ++i) {
      const auto& prev = pts[lower[(i + h - 1) % h]];
      const auto& cur = pts[lower[i]];
      const auto& next = pts[lower[(i + 1) % h]];
      // Local tolerance: the cross product scales with the product of the
      // adjacent edge lengths, so a global coordinate bound would misjudge
      // turns when the point set spans several orders of magnitude.
      const double eps = 1e-10 * (cur - prev).norm() * (next - cur).norm();
      if (cross2(prev, cur, next) <= eps &&
          static_cast<int>(keep.size()) + (h - i) > 3) {
        pruned = true;
      } else {
        keep.push_back(lower[i]);
      }
    }
    lower.swap(keep);
  }
  return lower;
}

double point_segment_dist(const Eigen::Vector2d& p, const Eigen::Vector2d& a,
                          const Eigen::Vector2d& b) {
  const Eigen::Vector2d ab = b - a;
  const double t =
      std::clamp(ab.squaredNorm() > 0 ? (p - a).dot(ab) / ab.squaredNorm() : 0.0,
                 0.0, 1.0);
  return (p - (a + t * ab)).norm();
}

double rp2_dist(const Eigen::Vector3d& u, const Eigen::Vector3d& v) {
  const double c =
      std::min(1.0, std::abs(u.normalized().dot(v.normalized())));
  return std::acos(c);
}

}  // namespace

ProjTransform::ProjTransform(const Eigen::Matrix3d& m) {
  const double d = m.determinant();
  if (d <= 0.0)
    throw std::invalid_argument("ProjTransform: determinant must be positive");
  a = m / std::cbrt(d);
}

ConvexDomain projectivize(const std::vector<Eigen::Vector3d>& points,
                          const Eigen::Matrix3d& chart) {
  ConvexDomain d;
  d.chart = chart;
  d.boundary.reserve(points.size());
  for (const auto& w : points) {
    const Eigen::Vector3d c = chart * w;
    if (c.z() <= 0.0)
      throw std::domain_error("projectivize: point leaves the chart (t <= 0)");
    d.boundary.emplace_back(c.x() / c.z(), c.y() / c.z());
  }
  if (d.boundary.size() >= 3) d.hull = convex_hull_indices(d.boundary);
  return d;
}

double hausdorff_distance(const ConvexDomain& d1, const ConvexDomain& d2,
                          Metric mode) {
  if (d1.boundary.empty() || d2.boundary.empty())
    throw std::invalid_argument("hausdorff_distance: empty boundary");
  // Compare hull polygons: the stored point set may carry interior points
  // (e.g. every tiling vertex), which belong to the shape but not to its
  // boundary. Fall back to the raw points when no hull has been computed.
  auto outline = [](const ConvexDomain& d) {
    return d.hull.empty() ? d.boundary : d.hull_points();
  };
  const std::vector<Eigen::Vector2d> pa = outline(d1), pb = outline(d2);
  auto directed = [&](const std::vector<Eigen::Vector2d>& a,
                      const ConvexDomain& da,
                      const std::vector<Eigen::Vector2d>& b,
                      const ConvexDomain& db) {
    double worst = 0.0;
    for (const auto& p : a) {
      double best = std::numeric_limits<double>::infinity();
      if (mode == Metric::Chart) {
        const int nb = static_cast<int>(b.size());
        for (int i = 0; i < nb; ++i)
          best = std::min(best, point_segment_dist(p, b[i], b[(i + 1) % nb]));
      } else {
        const Eigen::Vector3d lp = da.lift(p);
        for (const auto& q : b)
          best = std::min(best, rp2_dist(lp, db.lift(q)));
      }
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(directed(pa, d1, pb, d2), directed(pb, d2, pa, d1));
}

ConvexDomain regular_polygon(int k, double circumradius, int samples,
                             const Eigen::Matrix3d& chart) {
  if (k < 3) throw std::invalid_argument("regular_polygon: k must be >= 3");
  const double twopi = 2.0 * 3.14159265358979323846;
  // Vertex on the positive x axis for odd k, edge midpoint there for even k.
  const double phase = (k % 2 == 0) ? twopi / (2 * k) : 0.0;
  std::vector<Eigen::Vector2d> verts(k);
  for (int j = 0; j < k; ++j)
    verts[j] = circumradius * Eigen::Vector2d(std::cos(phase + twopi * j / k),
                                              std::sin(phase + twopi * j / k));
  ConvexDomain d;
  d.chart = chart;
  const int per_edge = std::max(1, samples / k);
  for (int j = 0; j < k; ++j) {
    const Eigen::Vector2d a = verts[j], b = verts[(j + 1) % k];
    for (int s = 0; s < per_edge; ++s)
      d.boundary.push_back(a + (static_cast<double>(s) / per_edge) * (b - a));
  }
  d.hull = convex_hull_indices(d.boundary);
  return d;
}

int dominant_vertices(const ConvexDomain& d, double angle_threshold) {
  const int h = static_cast<int>(d.hull.size());
  if (h < 3) return 0;
  int count = 0;
  for (int i = 0; i < h; ++i) {
    const Eigen::Vector2d prev = d.boundary[d.hull[(i + h - 1) % h]];
    const Eigen::Vector2d cur = d.boundary[d.hull[i]];
    const Eigen::Vector2d next = d.boundary[d.hull[(i + 1) % h]];
    const Eigen::Vector2d e1 = cur - prev, e2 = next - cur;
    const double turn =
        std::atan2(e1.x() * e2.y() - e1.y() * e2.x(), e1.dot(e2));
    if (turn > angle_threshold) ++count;
  }
  return count;
}

ConvexDomain resample_boundary(const ConvexDomain& d, int k) {
  const auto hp = d.hull_points();
  const int h = static_cast<int>(hp.size());
  if (h < 3) throw std::invalid_argument("resample_boundary: degenerate hull");
  std::vector<double> cum(h + 1, 0.0);
  for (int i = 0; i < h; ++i)
    cum[i + 1] = cum[i] + (hp[(i + 1) % h] - hp[i]).norm();
  const double total = cum[h];
  ConvexDomain out;
  out.chart = d.chart;
  out.boundary.reserve(k);
  int seg = 0;
  for (int j = 0; j < k; ++j) {
    const double s = total * j / k;
    while (seg + 1 < h && cum[seg + 1] < s) ++seg;
    const double len = cum[seg + 1] - cum[seg];
    const double t = len > 0 ? (s - cum[seg]) / len : 0.0;
    out.boundary.push_back(hp[seg] + t * (hp[(seg + 1) % h] - hp[seg]));
  }
  out.hull = convex_hull_indices(out.boundary);
  return out;
}

ConvexDomain dual_domain(const ConvexDomain& d, const Eigen::Matrix3d* chart_hint) {
  const auto hp = d.hull_points();
  const int h = static_cast<int>(hp.size());
  if (h < 3) throw std::invalid_argument("dual_domain: degenerate hull");
  Eigen::Vector2d cen = chart_centroid(d);
  const Eigen::Vector3d cl = d.lift(cen);
  std::vector<Eigen::Vector3d> covecs;
  covecs.reserve(h);
  for (int i = 0; i < h; ++i) {
    const Eigen::Vector3d a = d.lift(hp[i]);
    const Eigen::Vector3d b = d.lift(hp[(i + 1) % h]);
    Eigen::Vector3d w = a.cross(b);
    if (w.dot(cl) < 0.0) w = -w;  // positive on the interior cone
    covecs.push_back(w);
  }
  Eigen::Matrix3d chart;
  if (chart_hint) {
    chart = *chart_hint;
  } else {
    // dual chart: third row along the interior lift (positive pairing).
    const Eigen::Vector3d e3 = cl.normalized();
    Eigen::Vector3d e1 = e3.unitOrthogonal();
    Eigen::Vector3d e2 = e3.cross(e1);
    chart.row(0) = e1;
    chart.row(1) = e2;
    chart.row(2) = e3;
  }
  return projectivize(covecs, chart);
}

bool contains_compact(const ConvexDomain& d,
                      const std::vector<Eigen::Vector2d>& c) {
  const auto hp = d.hull_points();
  const int h = static_cast<int>(hp.size());
  if (h < 3) return false;
  for (const auto& p : c)
    for (int i = 0; i < h; ++i)
      if (cross2(hp[i], hp[(i + 1) % h], p) <= 0.0) return false;
  return true;
}

ConvexDomain apply_transform(const ConvexDomain& d, const ProjTransform& a) {
  std::vector<Eigen::Vector3d> lifts;
  lifts.reserve(d.boundary.size());
  const Eigen::Matrix3d ci = d.chart.inverse();
  for (const auto& p : d.boundary)
    lifts.push_back(a.a * (ci * Eigen::Vector3d(p.x(), p.y(), 1.0)));
  // Try the same chart first.
  bool ok = true;
  for (const auto& w : lifts)
    if ((d.chart * w).z() <= 1e-12) {
      ok = false;
      break;
    }
  if (ok) return projectivize(lifts, d.chart);
  // Re-chart: mean direction of the image rays, then a perceptron sweep if
  // the mean is not yet a strictly positive functional.
  Eigen::Vector3d dir = Eigen::Vector3d::Zero();
  for (const auto& w : lifts) dir += w.normalized();
  if (dir.norm() < 1e-12) dir = Eigen::Vector3d(0, 0, 1);
  dir.normalize();
  for (int it = 0; it < 10000; ++it) {
    bool done = true;
    for (const auto& w : lifts) {
      const Eigen::Vector3d wn = w.normalized();
      if (dir.dot(wn) <= 1e-9) {
        dir = (dir + wn).normalized();
        done = false;
      }
    }
    if (done) break;
    if (it == 9999)
      throw std::domain_error(
          "apply_transform: image not properly convex in any tested chart");
  }
  Eigen::Matrix3d chart;
  Eigen::Vector3d e1 = dir.unitOrthogonal();
  Eigen::Vector3d e2 = dir.cross(e1);
  chart.row(0) = e1;
  chart.row(1) = e2;
  chart.row(2) = dir;
  return projectivize(lifts, chart);
}

Eigen::Vector2d chart_centroid(const ConvexDomain& d) {
  Eigen::Vector2d c = Eigen::Vector2d::Zero();
  for (const auto& p : d.boundary) c += p;
  return c / static_cast<double>(d.boundary.size());
}

double conic_fit_residual(const ConvexDomain& d) {
  const auto& hp = d.boundary;
  const int n = static_cast<int>(hp.size());
  if (n < 6) throw std::invalid_argument("conic_fit_residual: need >= 6 points");
  // Normalize to unit scale about the centroid first.
  Eigen::Vector2d cen = chart_centroid(d);
  double scale = 0.0;
  for (const auto& p : hp) scale = std::max(scale, (p - cen).norm());
  Eigen::MatrixXd M(n, 6);
  for (int i = 0; i < n; ++i) {
    const Eigen::Vector2d p = (hp[i] - cen) / scale;
    M.row(i) << p.x() * p.x(), p.x() * p.y(), p.y() * p.y(), p.x(), p.y(), 1.0;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
  return svd.singularValues()(5) / std::sqrt(static_cast<double>(n));
}

void write_domain_csv(const ConvexDomain& d, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_domain_csv: cannot open " + path);
  out.precision(17);
  out << "x,y,on_hull\n";
  std::vector<char> on(d.boundary.size(), 0);
  for (int i : d.hull) on[i] = 1;
  for (size_t i = 0; i < d.boundary.size(); ++i)
    out << d.boundary[i].x() << "," << d.boundary[i].y() << ","
        << static_cast<int>(on[i]) << "\n";
}

void write_domain_svg(const ConvexDomain& d, const std::string& path,
                      bool reproducible) {
  SvgWriter svg(path, d.boundary, reproducible);
  svg.polygon(d.boundary, "#dfe8f5", "#3b6ea5", 0.004);
  for (int i : d.hull) svg.dot(d.boundary[i], 0.008, "#a53b3b");
  svg.finish();
}

}  // namespace polylim
