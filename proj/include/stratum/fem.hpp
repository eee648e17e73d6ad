#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "stratum/geometry.hpp"
#include "stratum/materials.hpp"

namespace stratum::fem {

class FemError : public std::runtime_error {
 public:
  explicit FemError(const std::string& what) : std::runtime_error(what) {}
};

enum class EdgeTag { Top, Bottom, Left, Right, Interface };

struct TaggedEdge {
  int a, b;
  EdgeTag tag;
};

/// Conforming P1 triangulation of Omega_h truncated at y = -depth. The
/// interface y = 0 is a mesh line; every triangle lies in {y>=0} or {y<=0}.
/// Cuts are meshed as slits with duplicated vertices.
struct Mesh {
  std::vector<geom::Point> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<TaggedEdge> edges;
  double depth = 0.0;
  double resolution = 0.0;
  geom::Interval interval{1.0, 2.0};

  std::vector<int> nodes_with_tag(EdgeTag tag) const;
  double triangle_area(int t) const;
  /// Index of a triangle containing (x, y), or -1.
  int locate(double x, double y) const;

  // Column binning for point location, filled by build_mesh.
  std::vector<double> column_x;
  std::vector<std::vector<int>> column_tris;

  // Periodic lateral BC: {duplicate at x = b, owner at x = a}. The duplicate
  // keeps its own coordinates; only its dofs are identified with the owner's.
  std::vector<std::array<int, 2>> periodic_pairs;
};

struct BCSpec {
  bool clamp_bottom = true;
  bool periodic_x = false;
};

Mesh build_mesh(const geom::Profile& p, double depth, double resolution,
                const BCSpec& bc = {});

struct Displacement {
  const Mesh* mesh = nullptr;
  std::vector<double> u;  // 2 dofs per vertex, interleaved (ux, uy)

  mat::Sym2 strain(int tri) const;
  /// P1 interpolation at a point; nearest-node fallback just outside.
  std::array<double, 2> sample(double x, double y) const;
};

struct ElasticMode {
  bool sharp = true;
  std::optional<mat::TransitionParams> transition;

  static ElasticMode Sharp() { return {true, std::nullopt}; }
  static ElasticMode Delta(const mat::TransitionParams& t) { return {false, t}; }
};

struct SolveStats {
  int iterations = 0;
  double residual = 0.0;
};

/// Minimizes the discrete bulk energy int W(y, Eu - E*(y)) over the P1 space
/// with u = 0 on the bottom boundary.
Displacement solve_equilibrium(const Mesh& mesh, const mat::Materials& m,
                               const ElasticMode& mode, const BCSpec& bc = {},
                               double tol_solve = 1e-10,
                               SolveStats* stats = nullptr);

/// Total bulk energy; centroid rule in sharp mode, 3-point edge-midpoint
/// quadrature in delta mode.
double bulk_energy(const Displacement& d, const mat::Materials& m,
                   const ElasticMode& mode);

/// Directional derivative of the discrete bulk energy at d along v.
double energy_directional_derivative(const Displacement& d,
                                     const std::vector<double>& v,
                                     const mat::Materials& m,
                                     const ElasticMode& mode);

}  // namespace stratum::fem
