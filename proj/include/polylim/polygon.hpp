#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace polylim {

// Point of the projective sphere: a ray in R^3 (or its antipodal quotient,
// mode explicit at the call sites that compare points).
struct ProjPoint {
  Eigen::Vector3d v;
  explicit ProjPoint(const Eigen::Vector3d& v_) : v(v_) {
    if (v.norm() <= 0.0) throw std::invalid_argument("ProjPoint: zero vector");
  }
};

// Properly convex domain given by ordered boundary samples in an affine
// chart. chart maps a homogeneous lift w to (X/W, Y/W) with (X,Y,W) = chart*w.
struct ConvexDomain {
  Eigen::Matrix3d chart = Eigen::Matrix3d::Identity();
  std::vector<Eigen::Vector2d> boundary;  // counterclockwise
  std::vector<int> hull;                  // indices into boundary after hull reduction

  Eigen::Vector3d lift(const Eigen::Vector2d& p) const {
    return chart.inverse() * Eigen::Vector3d(p.x(), p.y(), 1.0);
  }
  std::vector<Eigen::Vector2d> hull_points() const {
    std::vector<Eigen::Vector2d> out;
    out.reserve(hull.size());
    for (int i : hull) out.push_back(boundary[i]);
    return out;
  }
};

struct ProjTransform {
  Eigen::Matrix3d a;
  explicit ProjTransform(const Eigen::Matrix3d& m);  // normalizes det to 1
};

enum class Metric { Chart, RP2 };

// Chart point (x/t, y/t) per homogeneous input (x,y,t); hull-reduced.
// Throws if any third chart coordinate is <= 0.
ConvexDomain projectivize(const std::vector<Eigen::Vector3d>& points,
                          const Eigen::Matrix3d& chart =
                              Eigen::Matrix3d::Identity());

// Symmetric Hausdorff distance between the boundary sample sets.
double hausdorff_distance(const ConvexDomain& d1, const ConvexDomain& d2,
                          Metric mode = Metric::Chart);

// Regular k-gon, vertices at circumradius * e^{2 pi i j / k}, edges densely
// resampled (samples total boundary points).
ConvexDomain regular_polygon(int k, double circumradius, int samples = 720,
                             const Eigen::Matrix3d& chart =
                                 Eigen::Matrix3d::Identity());

// Count of hull vertices whose exterior turn angle exceeds the threshold.
int dominant_vertices(const ConvexDomain& d, double angle_threshold);

// Uniform arc-length resampling of the hull polygon; concentrates the turn
// of near-corners onto single samples so dominant_vertices sees them.
ConvexDomain resample_boundary(const ConvexDomain& d, int k);

// Polar dual: hull support lines as points of the dual chart. When
// chart_hint is given the result is expressed in that chart (pass the
// original chart to realize biduality).
ConvexDomain dual_domain(const ConvexDomain& d,
                         const Eigen::Matrix3d* chart_hint = nullptr);

// Every point of C strictly inside the hull of D.
bool contains_compact(const ConvexDomain& d,
                      const std::vector<Eigen::Vector2d>& c);

// Pointwise projective action on lifts, re-projected; re-charts
// automatically when an image point leaves the chart.
ConvexDomain apply_transform(const ConvexDomain& d, const ProjTransform& a);

// Centroid of the boundary samples (chart coordinates).
Eigen::Vector2d chart_centroid(const ConvexDomain& d);

// Least-squares conic fit residual of the hull points (normalized);
// small residual means the boundary is an ellipse.
double conic_fit_residual(const ConvexDomain& d);

void write_domain_csv(const ConvexDomain& d, const std::string& path);
void write_domain_svg(const ConvexDomain& d, const std::string& path,
                      bool reproducible = true);

}  // namespace polylim
