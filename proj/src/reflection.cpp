#include "polylim/reflection.hpp"

#include <cmath>
#include <deque>
#include <fstream>
#include <limits>
#include <nlohmann/json.hpp>
#include <numbers>
#include <stdexcept>

#include "polylim/svg.hpp"

namespace polylim {

Eigen::Matrix3d cartan_family(const CoxeterData& data) {
  const double pi = std::numbers::pi;
  const double ca = 2.0 * std::cos(pi / data.a);
  const double cb = 2.0 * std::cos(pi / data.b);
  const double cc = 2.0 * std::cos(pi / data.c);
  Eigen::Matrix3d A;
  A << 2.0, -cc * std::exp(data.s), -cb,
      -cc * std::exp(-data.s), 2.0, -ca,
      -cb, -ca, 2.0;
  return A;
}

ReflectionSet build_reflections(const Eigen::Matrix3d& cartan) {
  ReflectionSet rs;
  rs.cartan = cartan;
  for (int i = 0; i < 3; ++i) {
    if (std::abs(cartan(i, i) - 2.0) > 1e-12)
      throw std::invalid_argument("build_reflections: diagonal must be 2");
    rs.v[i] = Eigen::Vector3d::Unit(i);
    rs.alpha[i] = cartan.row(i);
    rs.sigma[i] = rs.v[i] * rs.alpha[i] - Eigen::Matrix3d::Identity();
  }
  const double pi = std::numbers::pi;
  // Orders from the off-diagonal products A_ij A_ji = 4 cos^2(pi/m_ij).
  const auto order_of = [&](int i, int j) {
    const double p = cartan(i, j) * cartan(j, i);
    if (p < -1e-12 || p >= 4.0)
      throw std::invalid_argument("build_reflections: off-diagonal product out of range");
    const double m = pi / std::acos(0.5 * std::sqrt(std::max(p, 0.0)));
    const int mi = static_cast<int>(std::lround(m));
    if (std::abs(m - mi) > 1e-6 || mi < 3)
      throw std::invalid_argument("build_reflections: pairwise order not an integer >= 3");
    return mi;
  };
  rs.order = {order_of(1, 2), order_of(0, 2), order_of(0, 1)};
  return rs;
}

ReflectionSet build_reflections(const CoxeterData& data) {
  return build_reflections(cartan_family(data));
}

std::array<Eigen::Vector3d, 3> fundamental_triangle(const ReflectionSet& rs) {
  std::array<Eigen::Vector3d, 3> p;
  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3, k = (i + 2) % 3;
    Eigen::Vector3d q = rs.alpha[j].transpose().cross(rs.alpha[k].transpose());
    const double s = rs.alpha[i] * q;
    if (std::abs(s) < 1e-12)
      throw std::domain_error("fundamental_triangle: degenerate walls");
    p[i] = (s > 0.0 ? q : Eigen::Vector3d(-q)) / q.norm();
  }
  return p;
}

namespace {

// Canonical lookup with a relative tolerance; the audit band catches
// quantization choices that would silently merge or split orbits.
int find_matrix(const std::vector<Eigen::Matrix3d>& pool,
                const Eigen::Matrix3d& m) {
  const double nm = m.norm();
  for (int i = 0; i < static_cast<int>(pool.size()); ++i) {
    const double rel = (pool[i] - m).norm() / std::max(nm, pool[i].norm());
    if (rel < 1e-8) return i;
    if (rel < 1e-7)
      throw std::domain_error(
          "enumerate_tiling: dedup resolution exhausted, matrices too close");
  }
  return -1;
}

// The unnormalized lift is canonical: every tile incident to a vertex
// produces the same vector (the stabilizer acts trivially on it once the
// sign character is applied), so duplicates agree to rounding error while
// distinct vertices with nearly parallel rays still differ in magnitude.
int find_lift(const std::vector<TilingVertex>& verts,
              const Eigen::Vector3d& w) {
  for (int i = 0; i < static_cast<int>(verts.size()); ++i) {
    const double rel =
        (verts[i].lift - w).norm() / std::max(verts[i].lift.norm(), w.norm());
    if (rel < 1e-8) return i;
    if (rel < 1e-7)
      throw std::domain_error(
          "enumerate_tiling: vertex resolution exhausted, lifts too close");
  }
  return -1;
}

}  // namespace

Tiling enumerate_tiling(const ReflectionSet& rs, int max_word_len) {
  if (max_word_len < 0)
    throw std::invalid_argument("enumerate_tiling: negative depth");
  Tiling t;
  t.rs = rs;
  t.fund = fundamental_triangle(rs);
  t.max_word_len = max_word_len;

  std::vector<Eigen::Matrix3d> pool;
  std::vector<int> level;
  pool.push_back(Eigen::Matrix3d::Identity());
  level.push_back(0);
  t.tiles.push_back(Tile{"", Eigen::Matrix3d::Identity(), {0, 0, 0}, 0});
  std::vector<std::string> words{""};

  std::size_t head = 0;
  while (head < pool.size()) {
    const std::size_t idx = head++;
    if (level[idx] >= max_word_len) continue;
    for (int gen = 0; gen < 3; ++gen) {
      const Eigen::Matrix3d cand = pool[idx] * rs.sigma[gen];
      if (find_matrix(pool, cand) >= 0) continue;
      pool.push_back(cand);
      level.push_back(level[idx] + 1);
      words.push_back(words[idx] + static_cast<char>('1' + gen));
      t.tiles.push_back(
          Tile{words.back(), cand, {0, 0, 0}, (level[idx] + 1) % 2});
    }
  }

  t.count_per_length.assign(max_word_len + 1, 0);
  for (int l : level) ++t.count_per_length[l];

  for (int ti = 0; ti < static_cast<int>(t.tiles.size()); ++ti) {
    Tile& tile = t.tiles[ti];
    // Each generator negates its wall, so the chamber lift of a length-L
    // word carries the sign character (-1)^L; without it adjacent tiles
    // would lift to opposite cones.
    const double sign = tile.parity == 0 ? 1.0 : -1.0;
    for (int k = 0; k < 3; ++k) {
      const Eigen::Vector3d w = sign * (tile.g * t.fund[k]);
      int vi = find_lift(t.verts, w);
      if (vi < 0) {
        vi = static_cast<int>(t.verts.size());
        t.verts.push_back(TilingVertex{w, k, tile.g, {}});
      }
      tile.vid[k] = vi;
      t.verts[vi].tiles.push_back(ti);
    }
  }
  return t;
}

std::vector<VertexDegree> vertex_degrees(const Tiling& tiling) {
  std::vector<VertexDegree> out(tiling.verts.size());
  for (int vi = 0; vi < static_cast<int>(tiling.verts.size()); ++vi) {
    const auto& vert = tiling.verts[vi];
    VertexDegree d;
    d.total = static_cast<int>(vert.tiles.size());
    // Interior iff every incident edge is shared by exactly two incident
    // tiles, so the fan around the vertex closes up.
    std::vector<std::pair<int, int>> edges;
    for (int ti : vert.tiles) {
      const auto& tile = tiling.tiles[ti];
      if (tile.parity == 0) ++d.shaded;
      for (int k = 0; k < 3; ++k) {
        if (tile.vid[k] != vi) continue;
        const int u = tile.vid[(k + 1) % 3];
        const int w = tile.vid[(k + 2) % 3];
        edges.emplace_back(std::min(vi, u), std::max(vi, u));
        edges.emplace_back(std::min(vi, w), std::max(vi, w));
      }
    }
    std::sort(edges.begin(), edges.end());
    bool closed = !edges.empty();
    for (std::size_t i = 0; i < edges.size(); i += 2) {
      if (i + 1 >= edges.size() || edges[i] != edges[i + 1]) {
        closed = false;
        break;
      }
    }
    d.interior = closed;
    out[vi] = d;
  }
  return out;
}

Eigen::Matrix3d chart_from_lifts(const std::vector<Eigen::Vector3d>& lifts) {
  Eigen::Vector3d dir = Eigen::Vector3d::Zero();
  for (const auto& w : lifts) dir += w.normalized();
  if (dir.norm() < 1e-12) dir = Eigen::Vector3d(0, 0, 1);
  dir.normalize();
  // Perceptron sweep with a decreasing margin target: prefer a functional
  // well inside the dual cone so chart coordinates stay moderate, fall back
  // to bare positivity when the lifts crowd the boundary.
  bool found = false;
  for (double margin = 0.1; margin >= 1e-9 && !found; margin *= 1e-2) {
    Eigen::Vector3d trial = dir;
    found = true;
    for (int it = 0; it < 10000; ++it) {
      bool done = true;
      for (const auto& w : lifts) {
        const Eigen::Vector3d wn = w.normalized();
        if (trial.dot(wn) <= margin) {
          trial = (trial + wn).normalized();
          done = false;
        }
      }
      if (done) break;
      if (it == 9999) found = false;
    }
    if (found) dir = trial;
  }
  if (!found)
    throw std::domain_error("chart_from_lifts: no positive functional found");
  Eigen::Matrix3d chart;
  const Eigen::Vector3d e1 = dir.unitOrthogonal();
  chart.row(0) = e1;
  chart.row(1) = dir.cross(e1);
  chart.row(2) = dir;
  return chart;
}

ConvexDomain domain_hull(const Tiling& tiling) {
  std::vector<Eigen::Vector3d> lifts;
  lifts.reserve(tiling.verts.size());
  for (const auto& v : tiling.verts) lifts.push_back(v.lift);
  return projectivize(lifts, chart_from_lifts(lifts));
}

ConvexDomain domain_hull_triangle_frame(const Tiling& tiling) {
  if (tiling.verts.empty())
    throw std::domain_error("domain_hull_triangle_frame: empty tiling");
  // Simplex frame: the Cartan matrix sends the fundamental corners to the
  // coordinate axes (alpha_j(p_i) = 0 for j != i), so A-conjugation realizes
  // the chamber as the standard simplex for every deformation parameter.
  const Eigen::Matrix3d& A = tiling.rs.cartan;

  // Residual freedom: diagonal maps fix the corners. Spend it by equalizing
  // the barycentric overshoot of the three reflected-tile apexes beyond their
  // walls; the balance condition d_i |q_i^(i)| = t * sum_j d_j q_i^(j) is a
  // Perron eigenvector problem for the positive matrix M_ij = q_i^(j)/|q_i^(i)|.
  Eigen::Matrix3d M = Eigen::Matrix3d::Zero();
  for (int i = 0; i < 3; ++i) {
    // Apex of the tile across wall i: sigma_i applied to corner e_i.
    const Eigen::Vector3d q = Eigen::Vector3d::Unit(i) - 2.0 * A.col(i);
    if (q(i) >= 0.0)
      throw std::domain_error(
          "domain_hull_triangle_frame: reflected apex on the wrong side");
    for (int j = 0; j < 3; ++j)
      if (j != i) M(i, j) = q(j) / -q(i);
  }
  Eigen::EigenSolver<Eigen::Matrix3d> es(M);
  int pf = -1;
  double lam = std::numeric_limits<double>::lowest();
  for (int k = 0; k < 3; ++k) {
    const std::complex<double> l = es.eigenvalues()(k);
    if (std::abs(l.imag()) < 1e-10 && l.real() > lam) {
      lam = l.real();
      pf = k;
    }
  }
  if (pf < 0)
    throw std::domain_error("domain_hull_triangle_frame: no Perron eigenvalue");
  Eigen::Vector3d d = es.eigenvectors().col(pf).real();
  if (d.sum() < 0.0) d = -d;
  if (d.minCoeff() <= 0.0)
    throw std::domain_error(
        "domain_hull_triangle_frame: Perron vector not positive");

  // Barycentric chart of the balanced simplex frame, then the affine plane
  // map pinning the corners at angles 2*pi*k/3 on the unit circle (matching
  // the orientation of regular_polygon).
  const double pi = std::numbers::pi;
  Eigen::Matrix3d src, dst;
  src.col(0) << 1.0, 0.0, 1.0;
  src.col(1) << 0.0, 1.0, 1.0;
  src.col(2) << 0.0, 0.0, 1.0;
  for (int k = 0; k < 3; ++k) {
    const double th = 2.0 * pi * k / 3.0;
    dst.col(k) << std::cos(th), std::sin(th), 1.0;
  }
  Eigen::Matrix3d bary;
  bary << 1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 1.0, 1.0, 1.0;
  const Eigen::Matrix3d chart =
      dst * src.inverse() * bary * d.asDiagonal() * A;

  std::vector<Eigen::Vector3d> lifts;
  lifts.reserve(tiling.verts.size());
  for (const auto& v : tiling.verts) {
    const double z = (chart * v.lift).z();
    if (z == 0.0)
      throw std::domain_error("domain_hull_triangle_frame: lift on chart horizon");
    lifts.push_back(z > 0.0 ? v.lift : Eigen::Vector3d(-v.lift));
  }
  return projectivize(lifts, chart);
}

int vertex_rotation_order(const Tiling& tiling, int vertex_id) {
  if (vertex_id < 0 || vertex_id >= static_cast<int>(tiling.verts.size()))
    throw std::invalid_argument("vertex_rotation_order: bad id");
  return tiling.rs.order[tiling.verts[vertex_id].type];
}

ProjTransform vertex_normalization(const Tiling& tiling, int vertex_id) {
  if (vertex_id < 0 || vertex_id >= static_cast<int>(tiling.verts.size()))
    throw std::invalid_argument("vertex_normalization: bad id");
  const auto degs = vertex_degrees(tiling);
  if (!degs[vertex_id].interior)
    throw std::domain_error("vertex_normalization: vertex is not interior");
  const auto& vert = tiling.verts[vertex_id];
  const int i = (vert.type + 1) % 3, j = (vert.type + 2) % 3;
  const Eigen::Matrix3d gamma =
      vert.rep * (tiling.rs.sigma[i] * tiling.rs.sigma[j]) *
      vert.rep.inverse();
  const int m = tiling.rs.order[vert.type];
  const double pi = std::numbers::pi;

  Eigen::EigenSolver<Eigen::Matrix3d> es(gamma);
  int fixed = -1, rot = -1;
  for (int k = 0; k < 3; ++k) {
    const std::complex<double> lam = es.eigenvalues()(k);
    if (std::abs(lam - 1.0) < 1e-8 && fixed < 0)
      fixed = k;
    else if (lam.imag() > 1e-8 && rot < 0)
      rot = k;
  }
  if (fixed < 0 || rot < 0)
    throw std::domain_error("vertex_normalization: stabilizer not elliptic");
  const std::complex<double> lam = es.eigenvalues()(rot);
  if (std::abs(std::abs(lam) - 1.0) > 1e-8 ||
      std::abs(lam.real() - std::cos(2.0 * pi / m)) > 1e-6)
    throw std::domain_error("vertex_normalization: rotation angle mismatch");

  Eigen::Vector3d axis = es.eigenvectors().col(fixed).real();
  axis.normalize();
  if (axis.dot(vert.lift) < 0.0) axis = -axis;
  const Eigen::Vector3cd wc = es.eigenvectors().col(rot);
  Eigen::Matrix3d B;
  B.col(0) = wc.real();
  B.col(1) = -wc.imag();
  B.col(2) = axis;
  if (B.determinant() < 0.0) B.col(1) = -B.col(1);
  // a gamma a^{-1} = diag(R(2 pi s/m), 1) for some s coprime to m; a sends
  // the vertex to the chart origin.
  return ProjTransform(B.inverse());
}

std::array<Eigen::Vector2d, 3> tile_chart_points(const Tiling& tiling,
                                                 int tile_index,
                                                 const Eigen::Matrix3d& chart) {
  const auto& tile = tiling.tiles.at(tile_index);
  std::array<Eigen::Vector2d, 3> out;
  for (int k = 0; k < 3; ++k) {
    const Eigen::Vector3d q = chart * tiling.verts[tile.vid[k]].lift;
    if (q.z() <= 0.0)
      throw std::domain_error("tile_chart_points: corner outside chart");
    out[k] = Eigen::Vector2d(q.x() / q.z(), q.y() / q.z());
  }
  return out;
}

double convex_overlap_area(const std::vector<Eigen::Vector2d>& p,
                           const std::vector<Eigen::Vector2d>& q) {
  const auto signed_area = [](const std::vector<Eigen::Vector2d>& poly) {
    double a = 0.0;
    const int n = static_cast<int>(poly.size());
    for (int i = 0; i < n; ++i) {
      const auto& u = poly[i];
      const auto& v = poly[(i + 1) % n];
      a += u.x() * v.y() - v.x() * u.y();
    }
    return 0.5 * a;
  };
  std::vector<Eigen::Vector2d> clip = q;
  if (signed_area(clip) < 0.0) std::reverse(clip.begin(), clip.end());
  std::vector<Eigen::Vector2d> out = p;
  if (signed_area(out) < 0.0) std::reverse(out.begin(), out.end());
  const int nc = static_cast<int>(clip.size());
  for (int e = 0; e < nc; ++e) {
    const Eigen::Vector2d a = clip[e], b = clip[(e + 1) % nc];
    const auto side = [&](const Eigen::Vector2d& r) {
      return (b.x() - a.x()) * (r.y() - a.y()) -
             (b.y() - a.y()) * (r.x() - a.x());
    };
    std::vector<Eigen::Vector2d> in;
    in.swap(out);
    const int n = static_cast<int>(in.size());
    for (int i = 0; i < n; ++i) {
      const Eigen::Vector2d u = in[i], v = in[(i + 1) % n];
      const double su = side(u), sv = side(v);
      if (su >= 0.0) out.push_back(u);
      if ((su >= 0.0) != (sv >= 0.0)) {
        const double t = su / (su - sv);
        out.push_back(u + t * (v - u));
      }
    }
    if (out.empty()) return 0.0;
  }
  return std::abs(signed_area(out));
}

std::string tiling_json(const Tiling& tiling) {
  nlohmann::json j;
  j["orders"] = {tiling.rs.order[0], tiling.rs.order[1], tiling.rs.order[2]};
  j["max_word_len"] = tiling.max_word_len;
  j["count_per_length"] = tiling.count_per_length;
  j["tile_count"] = tiling.tiles.size();
  j["vertex_count"] = tiling.verts.size();
  nlohmann::json tiles = nlohmann::json::array();
  for (const auto& t : tiling.tiles)
    tiles.push_back({{"word", t.word},
                     {"vertices", {t.vid[0], t.vid[1], t.vid[2]}},
                     {"parity", t.parity}});
  j["tiles"] = tiles;
  const auto degs = vertex_degrees(tiling);
  nlohmann::json verts = nlohmann::json::array();
  for (std::size_t i = 0; i < tiling.verts.size(); ++i)
    verts.push_back({{"type", tiling.verts[i].type},
                     {"degree", degs[i].total},
                     {"shaded", degs[i].shaded},
                     {"interior", degs[i].interior}});
  j["vertices"] = verts;
  return j.dump(2);
}

void write_tiling_svg(const Tiling& tiling, const std::string& path,
                      bool reproducible) {
  const ConvexDomain dom = domain_hull(tiling);
  SvgWriter svg(path, dom.boundary, reproducible);
  for (const auto& tile : tiling.tiles) {
    std::vector<Eigen::Vector2d> pts;
    bool ok = true;
    for (int k = 0; k < 3; ++k) {
      const Eigen::Vector3d q = dom.chart * tiling.verts[tile.vid[k]].lift;
      if (q.z() <= 0.0) {
        ok = false;
        break;
      }
      pts.emplace_back(q.x() / q.z(), q.y() / q.z());
    }
    if (!ok) continue;
    svg.polygon(pts, tile.parity == 0 ? "#888888" : "#eeeeee", "#333333",
                0.001);
  }
  svg.polygon(dom.hull_points(), "none", "#cc3333", 0.003);
  svg.finish();
}

}  // namespace polylim
