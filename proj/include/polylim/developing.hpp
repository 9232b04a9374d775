#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "polylim/wang.hpp"

namespace polylim {

// Affine sphere connection coefficients in the real frame (d/dx, d/dy, 1),
// obtained from the complex-frame matrix by the constant change of frame
// d/dz = (d/dx - i d/dy)/2, d/dzbar = (d/dx + i d/dy)/2:
//
//   A_x = [ e^{-u}p + ux/2   -e^{-u}q + uy/2   1 ]
//         [-e^{-u}q - uy/2   -e^{-u}p + ux/2   0 ]
//         [ e^u               0                0 ]
//
//   A_y = [-e^{-u}q + uy/2   -e^{-u}p - ux/2   0 ]
//         [-e^{-u}p + ux/2    e^{-u}q + uy/2   1 ]
//         [ 0                 e^u              0 ]
//
// with psi(z) = p + iq, u and u' interpolated from the radial solution.
// Note tr A_x = ux, tr A_y = uy: the raw ray transport has determinant
// e^{u(z)-u(0)}; Transport::T is its unimodular normalization.
struct ConnectionField {
  ConformalFactor cf;

  Eigen::Matrix3d Ax(std::complex<double> z) const;
  Eigen::Matrix3d Ay(std::complex<double> z) const;
  // Complex-frame route: converts numerically and reports the largest
  // imaginary residue of the converted entries (reality check of E).
  void real_frame_residual(std::complex<double> z, Eigen::Matrix3d& ax,
                           Eigen::Matrix3d& ay, double& imag_residual) const;
};

ConnectionField assemble_connection(const ConformalFactor& cf);

struct Transport {
  std::complex<double> z;
  Eigen::Matrix3d T;       // unimodular part, det = 1 up to integration error
  double log_scale;        // raw transport = e^{log_scale} * T
  int steps;
  double step_error_estimate;

  Eigen::Matrix3d raw() const { return std::exp(log_scale) * T; }
};

// Parallel transport along the radial segment from the base point 0 out to z
// (RK4 on T' = T * A(direction), T(0) = I). The convention "accumulate from
// the base point outward" is the one recorded in serialization metadata.
Transport transport(const ConnectionField& conn, std::complex<double> z,
                    int steps);

// Transport along an arbitrary straight segment; used for path-independence
// and holonomy checks.
Eigen::Matrix3d transport_segment(const ConnectionField& conn,
                                  std::complex<double> z0,
                                  std::complex<double> z1, int steps);

// f(z) = (raw transport) * (0,0,1)^T in the frame (d/dx, d/dy, 1).
Eigen::Vector3d develop(const ConnectionField& conn, std::complex<double> z,
                        int steps = 256);

// Dual immersion from an independent integration of the dual connection
// (T*' = T* * (-A^T)); pairing <f*, f> = 1 is a genuine numerical check.
Eigen::Vector3d develop_dual(const ConnectionField& conn,
                             std::complex<double> z, int steps = 256);

// f(rho e^{2 pi i j / k}) for j = 0..k-1, each along its own radial ray.
// OpenMP-parallel over rays; results are bitwise independent of the schedule.
std::vector<Eigen::Vector3d> develop_boundary(const ConnectionField& conn,
                                              double rho, int k,
                                              int steps = 256);
// Serial reference implementation kept for testing and benchmarking.
std::vector<Eigen::Vector3d> develop_boundary_serial(const ConnectionField& conn,
                                                     double rho, int k,
                                                     int steps = 256);

// CSV (theta, f1, f2, f3) plus a JSON header (n, r, rho, steps, convention).
void write_boundary_csv(const std::string& path,
                        const std::vector<Eigen::Vector3d>& pts, double rho);
std::string boundary_metadata_json(const ConnectionField& conn, double rho,
                                   int k, int steps);

}  // namespace polylim
