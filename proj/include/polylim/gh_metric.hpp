#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

namespace polylim {

// Conformal density lambda(x, y): the metric is lambda^2 (dx^2 + dy^2).
using ConformalDensity = std::function<double(double, double)>;

// Pointed metric sample: marked points with their pairwise geodesic
// distances (dist(0, j) are distances from the basepoint, pts[0]).
struct PointedSample {
  std::vector<Eigen::Vector2d> pts;
  Eigen::MatrixXd dist;
};

// Pairwise geodesic distances approximated on a 16-neighbor grid graph over
// the disk |z| <= extent, grid step extent/grid_m. Sample points snap to
// the nearest grid node. Edge weight is the endpoint average of lambda
// times the Euclidean edge length.
PointedSample geodesic_distances(const ConformalDensity& lambda, double extent,
                                 int grid_m,
                                 const std::vector<Eigen::Vector2d>& samples,
                                 bool parallel = true);

PointedSample geodesic_distances_serial(
    const ConformalDensity& lambda, double extent, int grid_m,
    const std::vector<Eigen::Vector2d>& samples);

// Curvature -1 Poincare disk of Euclidean radius R.
double hyperbolic_distance(const Eigen::Vector2d& z, const Eigen::Vector2d& w,
                           double R);
PointedSample hyperbolic_sample(const std::vector<Eigen::Vector2d>& samples,
                                double R);

// Half the largest pairwise distance distortion between two samples of the
// same marked points; an upper proxy for the pointed GH distance realised
// by the identity correspondence.
double gh_discrepancy(const PointedSample& a, const PointedSample& b);

// Basepoint-centred ring of k sample points of the given radius, plus the
// basepoint itself at index 0.
std::vector<Eigen::Vector2d> ring_samples(double radius, int k);

// Relative error of the grid-graph distances against exact straight-line
// flat distances (lambda = 1); the metrication bias of the 16-neighbor
// stencil at this resolution.
double flat_metrication_error(double extent, int grid_m, int k);

void write_sample_csv(const PointedSample& s, const std::string& path);
std::string gh_report_json(const PointedSample& a, const PointedSample& b);

}  // namespace polylim
