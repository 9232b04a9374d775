#pragma once

#include <Eigen/Dense>
#include <array>
#include <string>
#include <vector>

#include "polylim/polygon.hpp"

namespace polylim {

struct CoxeterData {
  int a = 4, b = 4, c = 4;  // (m23, m13, m12)
  double s = 0.0;           // deformation parameter, triple ratio e^{2s}

  CoxeterData() = default;
  CoxeterData(int a_, int b_, int c_, double s_) : a(a_), b(b_), c(c_), s(s_) {
    if (a < 3 || b < 3 || c < 3)
      throw std::invalid_argument("CoxeterData: need a,b,c >= 3");
    if (1.0 / a + 1.0 / b + 1.0 / c >= 1.0)
      throw std::invalid_argument("CoxeterData: triangle must be hyperbolic");
  }
};

// A_ii = 2, A23 = A32 = -2cos(pi/a), A13 = A31 = -2cos(pi/b),
// A12 = -2cos(pi/c) e^s, A21 = -2cos(pi/c) e^{-s}; the triple ratio
// (A12 A23 A31)/(A21 A32 A13) equals e^{2s}.
Eigen::Matrix3d cartan_family(const CoxeterData& data);

struct ReflectionSet {
  Eigen::Matrix3d cartan;
  std::array<Eigen::Vector3d, 3> v;       // reflection fixed points (e_i)
  std::array<Eigen::RowVector3d, 3> alpha;  // wall covectors (rows of A)
  std::array<Eigen::Matrix3d, 3> sigma;   // sigma_i = v_i alpha_i - I
  std::array<int, 3> order{4, 4, 4};      // (a, b, c)
};

ReflectionSet build_reflections(const Eigen::Matrix3d& cartan);
ReflectionSet build_reflections(const CoxeterData& data);

// Vertex opposite wall i, signed so every alpha_i is positive on the open
// triangle's lifted cone.
std::array<Eigen::Vector3d, 3> fundamental_triangle(const ReflectionSet& rs);

struct Tile {
  std::string word;               // over {1,2,3}; identity has empty word
  Eigen::Matrix3d g;
  std::array<int, 3> vid;         // canonical vertex ids, slot k = orbit of p_k
  int parity;                     // word length mod 2; 0 = shaded
};

struct TilingVertex {
  Eigen::Vector3d lift;           // representative lift in the Tits cone
  int type;                       // which fundamental vertex this orbits
  Eigen::Matrix3d rep;            // group element with rep * p_type = lift
  std::vector<int> tiles;         // incident tile indices
};

struct Tiling {
  ReflectionSet rs;
  std::array<Eigen::Vector3d, 3> fund;
  std::vector<Tile> tiles;
  std::vector<TilingVertex> verts;
  int max_word_len = 0;
  std::vector<int> count_per_length;  // group elements per word length
};

// Breadth-first enumeration of the group orbit up to the given word length;
// deduplication by relative-quantized matrices with a collision audit band.
Tiling enumerate_tiling(const ReflectionSet& rs, int max_word_len);

struct VertexDegree {
  int total = 0;
  int shaded = 0;
  bool interior = false;
};
std::vector<VertexDegree> vertex_degrees(const Tiling& tiling);

// Chart in which every enumerated lift has positive third coordinate.
Eigen::Matrix3d chart_from_lifts(const std::vector<Eigen::Vector3d>& lifts);

// Convex hull of all tile vertices, in a chart where the tiling is bounded.
ConvexDomain domain_hull(const Tiling& tiling);

// Hull in the frame that pins the fundamental triangle onto the equilateral
// triangle of circumradius 1 centered at the origin (same orientation as
// regular_polygon(3, 1, n)). The corners alone leave a two-parameter family
// of projective maps; the residue is fixed canonically by balancing the three
// reflected corner tiles so their apexes overshoot the pinned walls by equal
// barycentric depth (a Perron eigenvector computation in the simplex frame).
ConvexDomain domain_hull_triangle_frame(const Tiling& tiling);

// Determinant-1 transform conjugating the vertex stabilizer rotation to
// diag(R(2 pi/m), 1) and sending the vertex to the chart origin.
ProjTransform vertex_normalization(const Tiling& tiling, int vertex_id);

// Rotation order of the stabilizer at an interior vertex of this type.
int vertex_rotation_order(const Tiling& tiling, int vertex_id);

// Chart positions of one tile's corners.
std::array<Eigen::Vector2d, 3> tile_chart_points(const Tiling& tiling,
                                                 int tile_index,
                                                 const Eigen::Matrix3d& chart);

// Area of the intersection of two convex polygons (Sutherland-Hodgman).
double convex_overlap_area(const std::vector<Eigen::Vector2d>& p,
                           const std::vector<Eigen::Vector2d>& q);

std::string tiling_json(const Tiling& tiling);
void write_tiling_svg(const Tiling& tiling, const std::string& path,
                      bool reproducible = true);

}  // namespace polylim
