#include "stratum/fem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace stratum::fem {

using geom::Point;
using geom::Profile;
using mat::Sym2;
using mat::Tensor4;

std::vector<int> Mesh::nodes_with_tag(EdgeTag tag) const {
  std::vector<int> out;
  for (const auto& e : edges) {
    if (e.tag == tag) {
      out.push_back(e.a);
      out.push_back(e.b);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double Mesh::triangle_area(int t) const {
  const auto& tr = triangles[t];
  const Point& p0 = vertices[tr[0]];
  const Point& p1 = vertices[tr[1]];
  const Point& p2 = vertices[tr[2]];
  return 0.5 * ((p1.x - p0.x) * (p2.y - p0.y) - (p2.x - p0.x) * (p1.y - p0.y));
}

int Mesh::locate(double x, double y) const {
  if (column_x.empty()) return -1;
  auto it = std::upper_bound(column_x.begin(), column_x.end(), x);
  int col = static_cast<int>(it - column_x.begin()) - 1;
  col = std::clamp(col, 0, static_cast<int>(column_tris.size()) - 1);
  const double tol = 1e-9 * (1.0 + std::abs(x) + std::abs(y));
  for (int pass = 0; pass < 2; ++pass) {
    for (int dc = -pass; dc <= pass; ++dc) {
      const int c = col + dc;
      if (c < 0 || c >= static_cast<int>(column_tris.size())) continue;
      for (int t : column_tris[c]) {
        const auto& tr = triangles[t];
        const Point& p0 = vertices[tr[0]];
        const Point& p1 = vertices[tr[1]];
        const Point& p2 = vertices[tr[2]];
        const double det =
            (p1.x - p0.x) * (p2.y - p0.y) - (p2.x - p0.x) * (p1.y - p0.y);
        if (det == 0.0) continue;
        const double l1 = ((x - p0.x) * (p2.y - p0.y) - (p2.x - p0.x) * (y - p0.y)) / det;
        const double l2 = ((p1.x - p0.x) * (y - p0.y) - (x - p0.x) * (p1.y - p0.y)) / det;
        if (l1 >= -tol && l2 >= -tol && l1 + l2 <= 1.0 + tol) return t;
      }
    }
  }
  return -1;
}

namespace {

struct Columns {
  std::vector<double> xs;
  std::vector<double> hs;
};

Columns make_columns(const Profile& p, double resolution) {
  std::vector<double> brk;
  for (const auto& pc : p.pieces()) {
    brk.push_back(pc.x0);
    brk.push_back(pc.x1);
  }
  for (const auto& c : p.cuts()) brk.push_back(c.x);
  std::sort(brk.begin(), brk.end());
  brk.erase(std::unique(brk.begin(), brk.end()), brk.end());
  Columns cols;
  for (std::size_t i = 0; i + 1 < brk.size(); ++i) {
    const double span = brk[i + 1] - brk[i];
    const int n = std::max(1, static_cast<int>(std::ceil(span / resolution - 1e-12)));
    for (int k = 0; k < n; ++k) cols.xs.push_back(brk[i] + span * k / n);
  }
  cols.xs.push_back(brk.back());
  for (double x : cols.xs) {
    cols.hs.push_back(std::min(p.left_limit(x), p.right_limit(x)));
  }
  return cols;
}

}  // namespace

Mesh build_mesh(const Profile& p, double depth, double resolution,
                const BCSpec& bc) {
  if (!(depth > 0.0)) throw FemError("mesh depth must be > 0");
  if (!(resolution > 0.0)) throw FemError("mesh resolution must be > 0");
  if (!p.jumps().empty()) {
    throw FemError("profiles with jumps are not meshable; approximate first");
  }

  Mesh mesh;
  mesh.depth = depth;
  mesh.resolution = resolution;
  mesh.interval = p.interval();

  const Columns cols = make_columns(p, resolution);
  const int nc = static_cast<int>(cols.xs.size());
  if (nc < 2) throw FemError("degenerate profile: zero-width region");
  const double max_h = p.max_height();
  const int Ks = std::max(1, static_cast<int>(std::ceil(depth / resolution - 1e-12)));
  const int Kf =
      max_h > 0.0 ? std::max(1, static_cast<int>(std::ceil(max_h / resolution - 1e-12))) : 0;

  const bool periodic = bc.periodic_x;
  if (periodic && std::abs(cols.hs.front() - cols.hs.back()) > 1e-12) {
    throw FemError("periodic lateral BC requires h(a) == h(b)");
  }

  auto add_vertex = [&](double x, double y) {
    mesh.vertices.push_back({x, y});
    return static_cast<int>(mesh.vertices.size()) - 1;
  };

  // Substrate nodes: layers k = 0..Ks, y = -D .. 0.
  std::vector<std::vector<int>> sub(nc, std::vector<int>(Ks + 1, -1));
  for (int i = 0; i < nc; ++i) {
    for (int k = 0; k <= Ks; ++k) {
      const double y = -depth + depth * k / Ks;
      sub[i][k] = add_vertex(cols.xs[i], k == Ks ? 0.0 : y);
    }
  }

  // Film nodes: layers k = 1..Kf, y = k h_i / Kf; collapsed where h_i = 0.
  // Slit columns carry left/right copies above the cut bottom.
  struct FilmColumn {
    std::vector<int> left;
    std::vector<int> right;
  };
  std::vector<FilmColumn> film(nc);
  std::map<int, const geom::CutMark*> slit;  // column index -> cut
  for (const auto& c : p.cuts()) {
    auto it = std::lower_bound(cols.xs.begin(), cols.xs.end(), c.x);
    if (it == cols.xs.end() || *it != c.x) {
      throw FemError("cut x is not a mesh column");
    }
    slit[static_cast<int>(it - cols.xs.begin())] = &c;
  }
  for (int i = 0; i < nc; ++i) {
    film[i].left.assign(Kf + 1, -1);
    film[i].right.assign(Kf + 1, -1);
    film[i].left[0] = film[i].right[0] = sub[i][Ks];
    const double h = cols.hs[i];
    const auto slit_it = slit.find(i);
    for (int k = 1; k <= Kf; ++k) {
      if (h == 0.0) {
        film[i].left[k] = film[i].right[k] = sub[i][Ks];
        continue;
      }
      const double y = h * k / Kf;
      const int id = add_vertex(cols.xs[i], k == Kf ? h : y);
      film[i].left[k] = film[i].right[k] = id;
      if (slit_it != slit.end() && y > slit_it->second->y_bottom + 1e-12) {
        film[i].right[k] = add_vertex(cols.xs[i], k == Kf ? h : y);
      }
    }
  }

  if (periodic) {
    for (int k = 0; k <= Ks; ++k) {
      mesh.periodic_pairs.push_back({sub[nc - 1][k], sub[0][k]});
    }
    for (int k = 1; k <= Kf; ++k) {
      if (film[nc - 1].left[k] != sub[nc - 1][Ks]) {
        mesh.periodic_pairs.push_back({film[nc - 1].left[k], film[0].left[k]});
      }
    }
  }

  auto add_tri = [&](int a, int b, int c) {
    const Point& p0 = mesh.vertices[a];
    const Point& p1 = mesh.vertices[b];
    const Point& p2 = mesh.vertices[c];
    double det = (p1.x - p0.x) * (p2.y - p0.y) - (p2.x - p0.x) * (p1.y - p0.y);
    if (std::abs(det) < 1e-14 * resolution * resolution) return;
    if (det < 0.0) std::swap(b, c);
    mesh.triangles.push_back({a, b, c});
  };

  mesh.column_x.assign(cols.xs.begin(), cols.xs.end() - 1);
  mesh.column_tris.resize(nc - 1);

  for (int i = 0; i + 1 < nc; ++i) {
    const std::size_t first = mesh.triangles.size();
    for (int k = 0; k < Ks; ++k) {
      add_tri(sub[i][k], sub[i + 1][k], sub[i + 1][k + 1]);
      add_tri(sub[i][k], sub[i + 1][k + 1], sub[i][k + 1]);
    }
    // Film strip: the left column contributes its right copy and vice versa.
    for (int k = 0; k < Kf; ++k) {
      const int v00 = film[i].right[k];
      const int v10 = film[i + 1].left[k];
      const int v11 = film[i + 1].left[k + 1];
      const int v01 = film[i].right[k + 1];
      add_tri(v00, v10, v11);
      add_tri(v00, v11, v01);
    }
    for (std::size_t t = first; t < mesh.triangles.size(); ++t) {
      mesh.column_tris[i].push_back(static_cast<int>(t));
    }
  }

  // Boundary and interface tags.
  for (int i = 0; i + 1 < nc; ++i) {
    mesh.edges.push_back({sub[i][0], sub[i + 1][0], EdgeTag::Bottom});
    mesh.edges.push_back({sub[i][Ks], sub[i + 1][Ks], EdgeTag::Interface});
    if (cols.hs[i] == 0.0 && cols.hs[i + 1] == 0.0) {
      mesh.edges.push_back({sub[i][Ks], sub[i + 1][Ks], EdgeTag::Top});
    } else {
      mesh.edges.push_back(
          {film[i].right[Kf], film[i + 1].left[Kf], EdgeTag::Top});
    }
  }
  if (!periodic) {
    for (int k = 0; k < Ks; ++k) {
      mesh.edges.push_back({sub[0][k], sub[0][k + 1], EdgeTag::Left});
      mesh.edges.push_back({sub[nc - 1][k], sub[nc - 1][k + 1], EdgeTag::Right});
    }
    for (int k = 0; k < Kf; ++k) {
      if (film[0].left[k] != film[0].left[k + 1]) {
        mesh.edges.push_back({film[0].left[k], film[0].left[k + 1], EdgeTag::Left});
      }
      if (film[nc - 1].right[k] != film[nc - 1].right[k + 1]) {
        mesh.edges.push_back(
            {film[nc - 1].right[k], film[nc - 1].right[k + 1], EdgeTag::Right});
      }
    }
  }
  for (const auto& [i, cut] : slit) {
    (void)cut;
    for (int k = 0; k < Kf; ++k) {
      if (film[i].left[k + 1] != film[i].right[k + 1]) {
        mesh.edges.push_back({film[i].left[k], film[i].left[k + 1], EdgeTag::Top});
        mesh.edges.push_back({film[i].right[k], film[i].right[k + 1], EdgeTag::Top});
      }
    }
  }

  if (mesh.triangles.empty()) throw FemError("degenerate profile: empty mesh");
  return mesh;
}

namespace {

// P1 strain-displacement operator: rows are Voigt components, columns the six
// nodal dofs (ux0, uy0, ux1, uy1, ux2, uy2).
struct BMatrix {
  double b[3][6];
  double area;
};

BMatrix b_matrix(const Mesh& mesh, int t) {
  const auto& tr = mesh.triangles[t];
  const Point& p0 = mesh.vertices[tr[0]];
  const Point& p1 = mesh.vertices[tr[1]];
  const Point& p2 = mesh.vertices[tr[2]];
  const double det =
      (p1.x - p0.x) * (p2.y - p0.y) - (p2.x - p0.x) * (p1.y - p0.y);
  BMatrix B{};
  B.area = 0.5 * det;
  const double gx[3] = {(p1.y - p2.y) / det, (p2.y - p0.y) / det,
                        (p0.y - p1.y) / det};
  const double gy[3] = {(p2.x - p1.x) / det, (p0.x - p2.x) / det,
                        (p1.x - p0.x) / det};
  const double s = 1.0 / std::sqrt(2.0);
  for (int n = 0; n < 3; ++n) {
    B.b[0][2 * n] = gx[n];
    B.b[1][2 * n + 1] = gy[n];
    B.b[2][2 * n] = s * gy[n];
    B.b[2][2 * n + 1] = s * gx[n];
  }
  return B;
}

struct QuadPoint {
  double y;
  double weight;  // fraction of the triangle area
};

// Sharp mode: single centroid point; delta mode: edge midpoints.
void quadrature(const Mesh& mesh, int t, const ElasticMode& mode,
                std::vector<QuadPoint>* pts) {
  pts->clear();
  const auto& tr = mesh.triangles[t];
  const Point& p0 = mesh.vertices[tr[0]];
  const Point& p1 = mesh.vertices[tr[1]];
  const Point& p2 = mesh.vertices[tr[2]];
  if (mode.sharp) {
    pts->push_back({(p0.y + p1.y + p2.y) / 3.0, 1.0});
  } else {
    pts->push_back({0.5 * (p0.y + p1.y), 1.0 / 3.0});
    pts->push_back({0.5 * (p1.y + p2.y), 1.0 / 3.0});
    pts->push_back({0.5 * (p2.y + p0.y), 1.0 / 3.0});
  }
}

Tensor4 mode_tensor(const mat::Materials& m, const ElasticMode& mode, double y) {
  if (mode.sharp) return mat::c_sharp(m, y);
  return mat::c_delta(m, *mode.transition, y);
}

Sym2 mode_mismatch(const mat::Materials& m, const ElasticMode& mode, double y) {
  if (mode.sharp) return mat::mismatch_sharp(m, y);
  return mat::mismatch_delta(m, *mode.transition, y);
}

struct Csr {
  std::vector<int> row_ptr;
  std::vector<int> col;
  std::vector<double> val;
  int n = 0;

  void multiply(const std::vector<double>& x, std::vector<double>* y) const {
    y->assign(n, 0.0);
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k) s += val[k] * x[col[k]];
      (*y)[i] = s;
    }
  }
};

Csr to_csr(int n, std::vector<std::array<int, 2>>& idx, std::vector<double>& v) {
  std::vector<int> order(idx.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return idx[a][0] < idx[b][0] ||
           (idx[a][0] == idx[b][0] && idx[a][1] < idx[b][1]);
  });
  Csr csr;
  csr.n = n;
  std::vector<int> rows;
  int prev_r = -1, prev_c = -1;
  for (int o : order) {
    const int r = idx[o][0];
    const int c = idx[o][1];
    if (r == prev_r && c == prev_c) {
      csr.val.back() += v[o];
    } else {
      rows.push_back(r);
      csr.col.push_back(c);
      csr.val.push_back(v[o]);
      prev_r = r;
      prev_c = c;
    }
  }
  csr.row_ptr.assign(n + 1, 0);
  for (int r : rows) ++csr.row_ptr[r + 1];
  for (int i = 0; i < n; ++i) csr.row_ptr[i + 1] += csr.row_ptr[i];
  return csr;
}

}  // namespace

mat::Sym2 Displacement::strain(int tri) const {
  const BMatrix B = b_matrix(*mesh, tri);
  const auto& tr = mesh->triangles[tri];
  Sym2 e;
  for (int n = 0; n < 3; ++n) {
    for (int c = 0; c < 2; ++c) {
      const double un = u[2 * tr[n] + c];
      for (int r = 0; r < 3; ++r) e.v[r] += B.b[r][2 * n + c] * un;
    }
  }
  return e;
}

std::array<double, 2> Displacement::sample(double x, double y) const {
  const int t = mesh->locate(x, y);
  if (t >= 0) {
    const auto& tr = mesh->triangles[t];
    const Point& p0 = mesh->vertices[tr[0]];
    const Point& p1 = mesh->vertices[tr[1]];
    const Point& p2 = mesh->vertices[tr[2]];
    const double det =
        (p1.x - p0.x) * (p2.y - p0.y) - (p2.x - p0.x) * (p1.y - p0.y);
    const double l1 = ((x - p0.x) * (p2.y - p0.y) - (p2.x - p0.x) * (y - p0.y)) / det;
    const double l2 = ((p1.x - p0.x) * (y - p0.y) - (x - p0.x) * (p1.y - p0.y)) / det;
    const double l0 = 1.0 - l1 - l2;
    return {l0 * u[2 * tr[0]] + l1 * u[2 * tr[1]] + l2 * u[2 * tr[2]],
            l0 * u[2 * tr[0] + 1] + l1 * u[2 * tr[1] + 1] + l2 * u[2 * tr[2] + 1]};
  }
  // Nearest node fallback for points marginally outside the mesh.
  double best = std::numeric_limits<double>::infinity();
  int bi = 0;
  for (std::size_t i = 0; i < mesh->vertices.size(); ++i) {
    const double d = std::hypot(mesh->vertices[i].x - x, mesh->vertices[i].y - y);
    if (d < best) {
      best = d;
      bi = static_cast<int>(i);
    }
  }
  return {u[2 * bi], u[2 * bi + 1]};
}

Displacement solve_equilibrium(const Mesh& mesh, const mat::Materials& m,
                               const ElasticMode& mode, const BCSpec& bc,
                               double tol_solve, SolveStats* stats) {
  const int nv = static_cast<int>(mesh.vertices.size());
  const int n = 2 * nv;

  // Periodic duplicates hold no dofs of their own: assembly targets the
  // owner's dofs and the solution is copied back afterwards.
  std::vector<int> owner(nv);
  for (int v = 0; v < nv; ++v) owner[v] = v;
  for (const auto& pr : mesh.periodic_pairs) owner[pr[0]] = pr[1];

  std::vector<char> fixed(n, 0);
  if (bc.clamp_bottom) {
    for (int v : mesh.nodes_with_tag(EdgeTag::Bottom)) {
      const int o = owner[v];
      fixed[2 * v] = fixed[2 * v + 1] = 1;
      fixed[2 * o] = fixed[2 * o + 1] = 1;
    }
  }
  if (std::none_of(fixed.begin(), fixed.end(), [](char c) { return c != 0; })) {
    throw FemError(
        "singular system: unconstrained rigid-body mode (translation); no "
        "Dirichlet boundary");
  }

  std::vector<std::array<int, 2>> idx;
  std::vector<double> val;
  std::vector<double> rhs(n, 0.0);
  std::vector<QuadPoint> pts;
  for (int t = 0; t < static_cast<int>(mesh.triangles.size()); ++t) {
    const BMatrix B = b_matrix(mesh, t);
    const auto& tr = mesh.triangles[t];
    quadrature(mesh, t, mode, &pts);
    double ke[6][6] = {};
    double fe[6] = {};
    for (const auto& q : pts) {
      const Tensor4 C = mode_tensor(m, mode, q.y);
      const Sym2 estar = mode_mismatch(m, mode, q.y);
      const double w = q.weight * B.area;
      // ke += w B^T C B ; fe += w B^T C E*
      double cb[3][6];
      for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 6; ++c) {
          cb[r][c] = C.at(r, 0) * B.b[0][c] + C.at(r, 1) * B.b[1][c] +
                     C.at(r, 2) * B.b[2][c];
        }
      }
      const Sym2 ce = C.apply(estar);
      for (int a = 0; a < 6; ++a) {
        for (int b2 = 0; b2 < 6; ++b2) {
          ke[a][b2] += w * (B.b[0][a] * cb[0][b2] + B.b[1][a] * cb[1][b2] +
                            B.b[2][a] * cb[2][b2]);
        }
        fe[a] += w * (B.b[0][a] * ce.v[0] + B.b[1][a] * ce.v[1] +
                      B.b[2][a] * ce.v[2]);
      }
    }
    int dof[6];
    for (int a = 0; a < 3; ++a) {
      dof[2 * a] = 2 * owner[tr[a]];
      dof[2 * a + 1] = 2 * owner[tr[a]] + 1;
    }
    for (int a = 0; a < 6; ++a) {
      if (fixed[dof[a]]) continue;
      rhs[dof[a]] += fe[a];
      for (int b2 = 0; b2 < 6; ++b2) {
        if (fixed[dof[b2]]) continue;
        idx.push_back({dof[a], dof[b2]});
        val.push_back(ke[a][b2]);
      }
    }
  }
  for (int i = 0; i < n; ++i) {
    const bool slave = owner[i / 2] != i / 2;
    if (fixed[i] || slave) {
      idx.push_back({i, i});
      val.push_back(1.0);
      rhs[i] = 0.0;
    }
  }

  const Csr K = to_csr(n, idx, val);

  // Jacobi-preconditioned conjugate gradients.
  std::vector<double> diag(n, 1.0);
  for (int i = 0; i < n; ++i) {
    for (int k = K.row_ptr[i]; k < K.row_ptr[i + 1]; ++k) {
      if (K.col[k] == i && K.val[k] != 0.0) diag[i] = K.val[k];
    }
  }
  std::vector<double> x(n, 0.0), r = rhs, z(n), pdir(n), Ap(n);
  double rhs_norm = 0.0;
  for (double v : rhs) rhs_norm += v * v;
  rhs_norm = std::sqrt(rhs_norm);
  if (rhs_norm == 0.0) {
    Displacement d;
    d.mesh = &mesh;
    d.u = x;
    if (stats) *stats = {0, 0.0};
    return d;
  }
  for (int i = 0; i < n; ++i) z[i] = r[i] / diag[i];
  pdir = z;
  double rz = 0.0;
  for (int i = 0; i < n; ++i) rz += r[i] * z[i];
  const int max_iters = 50000;
  int it = 0;
  double res = 1.0;
  for (; it < max_iters; ++it) {
    K.multiply(pdir, &Ap);
    double pap = 0.0;
    for (int i = 0; i < n; ++i) pap += pdir[i] * Ap[i];
    if (!(pap > 0.0)) throw FemError("CG breakdown: matrix not SPD");
    const double alpha = rz / pap;
    double rn = 0.0;
    for (int i = 0; i < n; ++i) {
      x[i] += alpha * pdir[i];
      r[i] -= alpha * Ap[i];
      rn += r[i] * r[i];
    }
    res = std::sqrt(rn) / rhs_norm;
    if (res <= tol_solve) break;
    for (int i = 0; i < n; ++i) z[i] = r[i] / diag[i];
    double rz_new = 0.0;
    for (int i = 0; i < n; ++i) rz_new += r[i] * z[i];
    const double betacg = rz_new / rz;
    rz = rz_new;
    for (int i = 0; i < n; ++i) pdir[i] = z[i] + betacg * pdir[i];
  }
  if (res > tol_solve) {
    throw FemError("CG did not reach the requested residual");
  }
  if (stats) *stats = {it + 1, res};

  for (const auto& pr : mesh.periodic_pairs) {
    x[2 * pr[0]] = x[2 * pr[1]];
    x[2 * pr[0] + 1] = x[2 * pr[1] + 1];
  }
  Displacement d;
  d.mesh = &mesh;
  d.u = std::move(x);
  return d;
}

double bulk_energy(const Displacement& d, const mat::Materials& m,
                   const ElasticMode& mode) {
  const Mesh& mesh = *d.mesh;
  double energy = 0.0;
  std::vector<QuadPoint> pts;
  for (int t = 0; t < static_cast<int>(mesh.triangles.size()); ++t) {
    const Sym2 eu = d.strain(t);
    const double area = mesh.triangle_area(t);
    quadrature(mesh, t, mode, &pts);
    for (const auto& q : pts) {
      const Sym2 e = eu - mode_mismatch(m, mode, q.y);
      const Tensor4 C = mode_tensor(m, mode, q.y);
      energy += q.weight * area * 0.5 * mat::quad(C, e);
    }
  }
  return energy;
}

double energy_directional_derivative(const Displacement& d,
                                     const std::vector<double>& v,
                                     const mat::Materials& m,
                                     const ElasticMode& mode) {
  const Mesh& mesh = *d.mesh;
  Displacement dv;
  dv.mesh = d.mesh;
  dv.u = v;
  double deriv = 0.0;
  std::vector<QuadPoint> pts;
  for (int t = 0; t < static_cast<int>(mesh.triangles.size()); ++t) {
    const Sym2 eu = d.strain(t);
    const Sym2 ev = dv.strain(t);
    const double area = mesh.triangle_area(t);
    quadrature(mesh, t, mode, &pts);
    for (const auto& q : pts) {
      const Sym2 e = eu - mode_mismatch(m, mode, q.y);
      const Tensor4 C = mode_tensor(m, mode, q.y);
      deriv += q.weight * area * mat::dot(C.apply(e), ev);
    }
  }
  return deriv;
}

}  // namespace stratum::fem
