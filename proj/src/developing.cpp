#include "polylim/developing.hpp"

#include <cmath>
#include <fstream>
#include <json.hpp>

namespace polylim {

namespace {

struct LocalData {
  double u, ux, uy, p, q;
};

LocalData local_data(const ConformalFactor& cf, std::complex<double> z) {
  LocalData d;
  const double rho = std::abs(z);
  d.u = cf.u_at(rho);
  if (rho > 1e-14) {
    const double du = cf.du_at(rho);
    d.ux = du * z.real() / rho;
    d.uy = du * z.imag() / rho;
  } else {
    d.ux = d.uy = 0.0;  // u'(0) = 0
  }
  const std::complex<double> psi = eval_psi(cf.cd, z);
  d.p = psi.real();
  d.q = psi.imag();
  return d;
}

using Mat3 = Eigen::Matrix3d;

Mat3 ax_from(const LocalData& d) {
  const double em = std::exp(-d.u), eu = std::exp(d.u);
  Mat3 A;
  A << em * d.p + 0.5 * d.ux, -em * d.q + 0.5 * d.uy, 1.0,
      -em * d.q - 0.5 * d.uy, -em * d.p + 0.5 * d.ux, 0.0,
      eu, 0.0, 0.0;
  return A;
}

Mat3 ay_from(const LocalData& d) {
  const double em = std::exp(-d.u), eu = std::exp(d.u);
  Mat3 A;
  A << -em * d.q + 0.5 * d.uy, -em * d.p - 0.5 * d.ux, 0.0,
      -em * d.p + 0.5 * d.ux, em * d.q + 0.5 * d.uy, 1.0,
      0.0, eu, 0.0;
  return A;
}

// RK4 for T' = T * M(t) on [0, L].
template <typename MFun>
Mat3 integrate(MFun&& M, double L, int steps) {
  Mat3 T = Mat3::Identity();
  const double h = L / steps;
  for (int k = 0; k < steps; ++k) {
    const double t = k * h;
    const Mat3 M0 = M(t), Mh = M(t + 0.5 * h), M1 = M(t + h);
    const Mat3 k1 = T * M0;
    const Mat3 k2 = (T + 0.5 * h * k1) * Mh;
    const Mat3 k3 = (T + 0.5 * h * k2) * Mh;
    const Mat3 k4 = (T + h * k3) * M1;
    T += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return T;
}

Mat3 ray_transport_raw(const ConnectionField& conn, std::complex<double> z,
                       int steps) {
  const double L = std::abs(z);
  if (L < 1e-300) return Mat3::Identity();
  const double cs = z.real() / L, sn = z.imag() / L;
  auto M = [&](double t) -> Mat3 {
    const std::complex<double> zt =
        std::complex<double>(cs * t, sn * t);
    const LocalData d = local_data(conn.cf, zt);
    return cs * ax_from(d) + sn * ay_from(d);
  };
  return integrate(M, L, steps);
}

void check_domain(const ConnectionField& conn, std::complex<double> z) {
  if (std::abs(z) >= conn.cf.grid.r)
    throw std::domain_error("transport: |z| must be < r");
}

}  // namespace

Mat3 ConnectionField::Ax(std::complex<double> z) const {
  return ax_from(local_data(cf, z));
}

Mat3 ConnectionField::Ay(std::complex<double> z) const {
  return ay_from(local_data(cf, z));
}

void ConnectionField::real_frame_residual(std::complex<double> z, Mat3& ax,
                                          Mat3& ay, double& imag_residual) const {
  using C = std::complex<double>;
  using CMat = Eigen::Matrix3cd;
  const LocalData d = local_data(cf, z);
  const C I(0.0, 1.0);
  const C uz = 0.5 * (d.ux - I * d.uy), uzb = 0.5 * (d.ux + I * d.uy);
  const C psi(d.p, d.q);
  const double em = std::exp(-d.u), eu = std::exp(d.u);
  CMat Az, Azb;
  Az << uz, 0.0, 1.0, em * psi, 0.0, 0.0, 0.0, 0.5 * eu, 0.0;
  Azb << 0.0, em * std::conj(psi), 0.0, 0.0, uzb, 1.0, 0.5 * eu, 0.0, 0.0;
  CMat P;
  P << 0.5, 0.5, 0.0, -0.5 * I, 0.5 * I, 0.0, 0.0, 0.0, 1.0;
  const CMat Pi = P.inverse();
  const CMat Axc = P * (Az + Azb) * Pi;
  const CMat Ayc = P * (I * (Az - Azb)) * Pi;
  imag_residual = std::max(Axc.imag().cwiseAbs().maxCoeff(),
                           Ayc.imag().cwiseAbs().maxCoeff());
  ax = Axc.real();
  ay = Ayc.real();
}

ConnectionField assemble_connection(const ConformalFactor& cf) {
  if (!cf.accepted)
    throw std::invalid_argument("assemble_connection: cf not accepted");
  return ConnectionField{cf};
}

Transport transport(const ConnectionField& conn, std::complex<double> z,
                    int steps) {
  check_domain(conn, z);
  if (steps < 32) throw std::invalid_argument("transport: steps must be >= 32");
  const Mat3 full = ray_transport_raw(conn, z, steps);
  const Mat3 half = ray_transport_raw(conn, z, std::max(16, steps / 2));
  Transport tr;
  tr.z = z;
  // det(raw) = e^{u(z) - u(0)}; strip the known scale to land in SL(3).
  tr.log_scale = (conn.cf.u_at(std::abs(z)) - conn.cf.u_at(0.0)) / 3.0;
  const double s = std::exp(-tr.log_scale);
  tr.T = s * full;
  tr.steps = steps;
  tr.step_error_estimate = (s * half - tr.T).cwiseAbs().maxCoeff();
  return tr;
}

Mat3 transport_segment(const ConnectionField& conn, std::complex<double> z0,
                       std::complex<double> z1, int steps) {
  check_domain(conn, z0);
  check_domain(conn, z1);
  const std::complex<double> dz = z1 - z0;
  const double L = std::abs(dz);
  if (L < 1e-300) return Mat3::Identity();
  const double cs = dz.real() / L, sn = dz.imag() / L;
  auto M = [&](double t) -> Mat3 {
    const std::complex<double> zt = z0 + (t / L) * dz;
    const LocalData d = local_data(conn.cf, zt);
    return cs * ax_from(d) + sn * ay_from(d);
  };
  return integrate(M, L, steps);
}

Eigen::Vector3d develop(const ConnectionField& conn, std::complex<double> z,
                        int steps) {
  check_domain(conn, z);
  return ray_transport_raw(conn, z, steps) * Eigen::Vector3d(0, 0, 1);
}

Eigen::Vector3d develop_dual(const ConnectionField& conn,
                             std::complex<double> z, int steps) {
  check_domain(conn, z);
  const double L = std::abs(z);
  if (L < 1e-300) return Eigen::Vector3d(0, 0, 1);
  const double cs = z.real() / L, sn = z.imag() / L;
  auto M = [&](double t) -> Mat3 {
    const std::complex<double> zt(cs * t, sn * t);
    const LocalData d = local_data(conn.cf, zt);
    return (-(cs * ax_from(d) + sn * ay_from(d))).transpose().eval();
  };
  return integrate(M, L, steps) * Eigen::Vector3d(0, 0, 1);
}

std::vector<Eigen::Vector3d> develop_boundary(const ConnectionField& conn,
                                              double rho, int k, int steps) {
  if (k < 3) throw std::invalid_argument("develop_boundary: need k >= 3");
  if (rho >= conn.cf.grid.r)
    throw std::domain_error("develop_boundary: rho must be < r");
  std::vector<Eigen::Vector3d> out(k);
  const double twopi = 2.0 * 3.14159265358979323846;
#pragma omp parallel for schedule(static)
  for (int j = 0; j < k; ++j) {
    const double th = twopi * j / k;
    out[j] = develop(conn, std::polar(rho, th), steps);
  }
  return out;
}

std::vector<Eigen::Vector3d> develop_boundary_serial(const ConnectionField& conn,
                                                     double rho, int k,
                                                     int steps) {
  if (k < 3) throw std::invalid_argument("develop_boundary: need k >= 3");
  if (rho >= conn.cf.grid.r)
    throw std::domain_error("develop_boundary: rho must be < r");
  std::vector<Eigen::Vector3d> out(k);
  const double twopi = 2.0 * 3.14159265358979323846;
  for (int j = 0; j < k; ++j) {
    const double th = twopi * j / k;
    out[j] = develop(conn, std::polar(rho, th), steps);
  }
  return out;
}

void write_boundary_csv(const std::string& path,
                        const std::vector<Eigen::Vector3d>& pts, double rho) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_boundary_csv: cannot open " + path);
  out.precision(17);
  out << "theta,f1,f2,f3\n";
  const double twopi = 2.0 * 3.14159265358979323846;
  const int k = static_cast<int>(pts.size());
  for (int j = 0; j < k; ++j)
    out << twopi * j / k << "," << pts[j][0] << "," << pts[j][1] << ","
        << pts[j][2] << "\n";
  (void)rho;
}

std::string boundary_metadata_json(const ConnectionField& conn, double rho,
                                   int k, int steps) {
  nlohmann::json j;
  j["n"] = conn.cf.cd.n;
  j["scale_re"] = conn.cf.cd.scale.real();
  j["scale_im"] = conn.cf.cd.scale.imag();
  j["r"] = conn.cf.grid.r;
  j["rho"] = rho;
  j["samples"] = k;
  j["steps"] = steps;
  j["convention"] = "transport accumulated from the base point outward";
  return j.dump(2);
}

}  // namespace polylim
