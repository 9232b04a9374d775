#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace polylim {

// Combinatorial patch of the shaded-triangle surface: a simply connected
// union of triangles glued along edges, with prescribed vertex degrees.
struct TrianglePatch {
  int n_triangles = 0;
  // Each triangle lists its three vertex ids counterclockwise.
  std::vector<std::array<int, 3>> triangles;
  int n_vertices = 0;

  int euler_characteristic() const;
  int edge_count() const;
  std::vector<int> vertex_degree() const;       // incident triangles
  std::vector<bool> interior_vertex() const;    // closed edge fan
};

// Cone angle 2 pi (1 + n/3) has corner index l = 3 angle/pi - 3 = 3 + 2n,
// measured against the flat corner value 3; boundary corners subtract.
int corner_index_from_multiplicity(int n);

// Multiplicity n of a zero read off an interior vertex of total degree d
// in the full (shaded + unshaded) tiling: d = 6 + 2n.
int multiplicity_from_degree(int total_degree);

struct GaussBonnetReport {
  long interior_sum = 0;   // sum over interior vertices of (degree - 6)
  long boundary_sum = 0;   // sum over boundary vertices of (degree - 3)
  long euler_term = 0;     // 6 * chi
  long residual = 0;       // interior_sum + boundary_sum + euler_term... = 0
  bool ok = false;
};

GaussBonnetReport gauss_bonnet_check(const TrianglePatch& patch);

// Random simply connected patch grown triangle by triangle; rejects glue
// moves that would pinch the disk (identify two boundary vertices).
TrianglePatch random_patch(int n_triangles, std::uint64_t seed);

// Fan of k triangles around one interior hub vertex (k >= 3).
TrianglePatch fan_patch(int k);

std::string patch_json(const TrianglePatch& patch,
                       const GaussBonnetReport& report);

}  // namespace polylim
