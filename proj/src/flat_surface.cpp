#include "polylim/flat_surface.hpp"

#include <algorithm>
#include <map>
#include <nlohmann/json.hpp>
#include <random>
#include <stdexcept>

namespace polylim {

namespace {

std::map<std::pair<int, int>, int> edge_multiset(const TrianglePatch& p) {
  std::map<std::pair<int, int>, int> e;
  for (const auto& t : p.triangles)
    for (int k = 0; k < 3; ++k) {
      const int u = t[k], v = t[(k + 1) % 3];
      ++e[{std::min(u, v), std::max(u, v)}];
    }
  return e;
}

}  // namespace

int TrianglePatch::edge_count() const {
  return static_cast<int>(edge_multiset(*this).size());
}

int TrianglePatch::euler_characteristic() const {
  return n_vertices - edge_count() + n_triangles;
}

std::vector<int> TrianglePatch::vertex_degree() const {
  std::vector<int> deg(n_vertices, 0);
  for (const auto& t : triangles)
    for (int k = 0; k < 3; ++k) ++deg[t[k]];
  return deg;
}

std::vector<bool> TrianglePatch::interior_vertex() const {
  // A vertex is interior iff none of its incident edges lies on the patch
  // boundary (boundary edge = edge with a single incident triangle).
  const auto edges = edge_multiset(*this);
  std::vector<bool> interior(n_vertices, false);
  std::vector<bool> touches(n_vertices, false);
  for (const auto& [e, cnt] : edges) {
    if (cnt == 1) {
      touches[e.first] = true;
      touches[e.second] = true;
    } else if (cnt > 2) {
      throw std::domain_error("interior_vertex: non-manifold edge");
    }
  }
  const auto deg = vertex_degree();
  for (int v = 0; v < n_vertices; ++v)
    interior[v] = deg[v] > 0 && !touches[v];
  return interior;
}

int corner_index_from_multiplicity(int n) {
  if (n < 0) throw std::invalid_argument("corner index: n >= 0");
  return 3 + 2 * n;
}

int multiplicity_from_degree(int total_degree) {
  if (total_degree < 6 || total_degree % 2 != 0)
    throw std::invalid_argument("multiplicity: degree must be even and >= 6");
  return (total_degree - 6) / 2;
}

GaussBonnetReport gauss_bonnet_check(const TrianglePatch& patch) {
  GaussBonnetReport r;
  const auto deg = patch.vertex_degree();
  const auto interior = patch.interior_vertex();
  for (int v = 0; v < patch.n_vertices; ++v) {
    if (deg[v] == 0) continue;
    if (interior[v])
      r.interior_sum += deg[v] - 6;
    else
      r.boundary_sum += deg[v] - 3;
  }
  r.euler_term = 6L * patch.euler_characteristic();
  r.residual = r.interior_sum + r.boundary_sum + r.euler_term;
  r.ok = (r.residual == 0);
  return r;
}

TrianglePatch fan_patch(int k) {
  if (k < 3) throw std::invalid_argument("fan_patch: k >= 3");
  TrianglePatch p;
  p.n_triangles = k;
  p.n_vertices = k + 1;
  for (int i = 0; i < k; ++i)
    p.triangles.push_back({0, 1 + i, 1 + (i + 1) % k});
  return p;
}

TrianglePatch random_patch(int n_triangles, std::uint64_t seed) {
  if (n_triangles < 1) throw std::invalid_argument("random_patch: need >= 1");
  TrianglePatch p;
  p.triangles.push_back({0, 1, 2});
  p.n_triangles = 1;
  p.n_vertices = 3;
  std::vector<int> bd{0, 1, 2};  // simple cycle, counterclockwise

  std::mt19937_64 rng(seed);
  while (p.n_triangles < n_triangles) {
    const int nb = static_cast<int>(bd.size());
    std::uniform_int_distribution<int> pick(0, nb - 1);
    const bool try_fill = nb >= 4 && (rng() & 1u);
    if (try_fill) {
      // Fill the ear at boundary vertex v; rejected when the chord already
      // exists, which would pinch the disk or create a non-manifold edge.
      const int i = pick(rng);
      const int u = bd[(i + nb - 1) % nb], v = bd[i], w = bd[(i + 1) % nb];
      const auto edges = edge_multiset(p);
      if (edges.count({std::min(u, w), std::max(u, w)})) continue;
      p.triangles.push_back({u, v, w});
      ++p.n_triangles;
      bd.erase(bd.begin() + i);
    } else {
      const int i = pick(rng);
      const int u = bd[i], v = bd[(i + 1) % nb];
      const int x = p.n_vertices++;
      p.triangles.push_back({v, u, x});
      ++p.n_triangles;
      bd.insert(bd.begin() + i + 1, x);
    }
  }
  return p;
}

std::string patch_json(const TrianglePatch& patch,
                       const GaussBonnetReport& report) {
  nlohmann::json j;
  j["triangles"] = patch.n_triangles;
  j["vertices"] = patch.n_vertices;
  j["edges"] = patch.edge_count();
  j["euler_characteristic"] = patch.euler_characteristic();
  j["interior_sum"] = report.interior_sum;
  j["boundary_sum"] = report.boundary_sum;
  j["euler_term"] = report.euler_term;
  j["residual"] = report.residual;
  j["ok"] = report.ok;
  const auto deg = patch.vertex_degree();
  const auto interior = patch.interior_vertex();
  nlohmann::json mult = nlohmann::json::array();
  for (int v = 0; v < patch.n_vertices; ++v)
    if (interior[v] && deg[v] >= 6 && deg[v] % 2 == 0)
      mult.push_back({{"vertex", v},
                      {"degree", deg[v]},
                      {"multiplicity", multiplicity_from_degree(deg[v])},
                      {"corner_index", corner_index_from_multiplicity(
                                           multiplicity_from_degree(deg[v]))}});
  j["interior_cone_points"] = mult;
  return j.dump(2);
}

}  // namespace polylim
