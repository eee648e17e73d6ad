#include "stratum/energy.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace stratum::energy {

using geom::Profile;
using geom::Segment;
using mat::Materials;
using mat::Sym2;
using mat::TransitionParams;

std::string functional_name(Functional f) {
  switch (f) {
    case Functional::F:
      return "F";
    case Functional::F0:
      return "F0";
    case Functional::Fdelta:
      return "Fdelta";
    case Functional::FdeltaRelaxed:
      return "Fdelta-relaxed";
  }
  return "?";
}

namespace {

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double fa, double m, double fm, double b, double fb,
                        double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double err = left + right - whole;
  if (depth <= 0 || std::abs(err) <= 15.0 * tol) {
    return left + right + err / 15.0;
  }
  return adaptive_simpson(f, a, fa, lm, flm, m, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, fm, rm, frm, b, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol) {
  if (b == a) return 0.0;
  const double fa = f(a), fb = f(b);
  const double m = 0.5 * (a + b);
  const double fm = f(m);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  const double tol = std::max(1e-14, rel_tol * std::abs(whole));
  return adaptive_simpson(f, a, fa, m, fm, b, fb, whole, tol, 40);
}

namespace {

bool is_zero_plateau(const Segment& s) { return s.a.y == 0.0 && s.b.y == 0.0; }

double segment_integral(const std::function<double(double)>& density_of_y,
                        const Segment& s) {
  const double len = s.length();
  if (len == 0.0) return 0.0;
  return len * integrate([&](double t) {
           return density_of_y(s.a.y + t * (s.b.y - s.a.y));
         },
                         0.0, 1.0);
}

double depth_or_default(const EvalOptions& opt, const Profile& p) {
  if (opt.depth > 0.0) return opt.depth;
  const double h = p.max_height();
  return h > 0.0 ? 2.0 * h : 1.0;
}

/// Measure of {x : h(x) > y}; piecewise linear in y between knot heights.
double level_width(const Profile& p, double y) {
  double w = 0.0;
  for (const auto& pc : p.pieces()) {
    const double lo = std::min(pc.y0, pc.y1);
    const double hi = std::max(pc.y0, pc.y1);
    if (y < lo) {
      w += pc.x1 - pc.x0;
    } else if (y < hi) {
      w += (pc.x1 - pc.x0) * (hi - y) / (hi - lo);
    }
  }
  return w;
}

/// Bulk energy for u = 0: integral over the truncated subgraph of
/// (1/2) Estar(y) : C(y) Estar(y) with the given y-densities.
double zero_displacement_bulk(const Profile& p, double depth,
                              const std::function<double(double)>& g) {
  const double width = p.interval().length();
  double bulk = width * integrate(g, -depth, 0.0);
  const double max_h = p.max_height();
  if (max_h > 0.0) {
    // Split at piece-endpoint heights: level_width has kinks there.
    std::vector<double> levels{0.0, max_h};
    for (const auto& pc : p.pieces()) {
      if (pc.y0 > 0.0 && pc.y0 < max_h) levels.push_back(pc.y0);
      if (pc.y1 > 0.0 && pc.y1 < max_h) levels.push_back(pc.y1);
    }
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    for (std::size_t i = 0; i + 1 < levels.size(); ++i) {
      bulk += integrate([&](double y) { return g(y) * level_width(p, y); },
                        levels[i], levels[i + 1]);
    }
  }
  return bulk;
}

double sharp_zero_bulk(const Profile& p, const Materials& m) {
  const Sym2 e0 = mat::mismatch_sharp(m, 1.0);
  return 0.5 * mat::quad(m.C_f, e0) * geom::film_area(p);
}

/// Bulk of a supplied displacement with arbitrary per-point tensor and
/// mismatch (used by the relaxed functional, whose bulk pairs W_delta
/// with E_0); 3-point edge-midpoint quadrature.
double mixed_bulk(const fem::Displacement& d,
                  const std::function<mat::Tensor4(double)>& tensor_of_y,
                  const std::function<Sym2(double)>& mismatch_of_y) {
  const fem::Mesh& mesh = *d.mesh;
  double bulk = 0.0;
  for (int t = 0; t < static_cast<int>(mesh.triangles.size()); ++t) {
    const Sym2 eu = d.strain(t);
    const double area = mesh.triangle_area(t);
    const auto& tr = mesh.triangles[t];
    const geom::Point& p0 = mesh.vertices[tr[0]];
    const geom::Point& p1 = mesh.vertices[tr[1]];
    const geom::Point& p2 = mesh.vertices[tr[2]];
    const double ys[3] = {0.5 * (p0.y + p1.y), 0.5 * (p1.y + p2.y),
                          0.5 * (p2.y + p0.y)};
    for (double y : ys) {
      const Sym2 e = eu - mismatch_of_y(y);
      bulk += (area / 3.0) * 0.5 * mat::quad(tensor_of_y(y), e);
    }
  }
  return bulk;
}

void finalize(EnergyReport* r) {
  r->total = r->bulk + r->surface + r->cut_term + r->wetting_term;
}

void check_mesh_matches(const fem::Displacement* u, const Profile& p) {
  if (u == nullptr || u->mesh == nullptr) return;
  if (u->mesh->interval.a != p.interval().a ||
      u->mesh->interval.b != p.interval().b) {
    throw EnergyError("displacement mesh does not match the profile interval");
  }
}

}  // namespace

double surface_integral_phi(const Materials& m,
                            const std::vector<Segment>& segments) {
  double s = 0.0;
  for (const auto& seg : segments) {
    s += (is_zero_plateau(seg) ? mat::phi(m, 0.0) : m.gamma_f) * seg.length();
  }
  return s;
}

double surface_integral_phi_delta(const Materials& m,
                                  const TransitionParams& t,
                                  const std::vector<Segment>& segments) {
  double s = 0.0;
  for (const auto& seg : segments) {
    s += segment_integral([&](double y) { return mat::phi_delta(m, t, y); }, seg);
  }
  return s;
}

EnergyReport eval_F(const fem::Displacement* u, const Profile& p,
                    const Materials& m, const EvalOptions& opt) {
  check_mesh_matches(u, p);
  const auto d = geom::decompose(p);
  EnergyReport r;
  r.functional_tag = Functional::F;
  if (u != nullptr) {
    r.bulk = fem::bulk_energy(*u, m, fem::ElasticMode::Sharp());
    r.truncation_depth = u->mesh->depth;
    r.resolution = u->mesh->resolution;
  } else {
    r.bulk = sharp_zero_bulk(p, m);
    r.truncation_depth = depth_or_default(opt, p);
    r.resolution = opt.resolution;
  }
  r.surface = surface_integral_phi(m, d.tilde_gamma);
  r.cut_term = 2.0 * m.gamma_f * d.cut_length();
  r.wetting_term = m.gamma_fs * p.interval().length();
  finalize(&r);
  return r;
}

EnergyReport eval_F0(const fem::Displacement* u, const Profile& p,
                     const Materials& m, const EvalOptions& opt) {
  if (!p.is_lipschitz()) throw EnergyError("not in X_Lip");
  check_mesh_matches(u, p);
  const auto d = geom::decompose(p);
  EnergyReport r;
  r.functional_tag = Functional::F0;
  if (u != nullptr) {
    r.bulk = fem::bulk_energy(*u, m, fem::ElasticMode::Sharp());
    r.truncation_depth = u->mesh->depth;
    r.resolution = u->mesh->resolution;
  } else {
    r.bulk = sharp_zero_bulk(p, m);
    r.truncation_depth = depth_or_default(opt, p);
    r.resolution = opt.resolution;
  }
  double surface = 0.0;
  for (const auto& seg : d.graph_part) {
    surface += (is_zero_plateau(seg) ? m.gamma_s : m.gamma_f) * seg.length();
  }
  r.surface = surface;
  r.wetting_term =
      m.gamma_fs * (p.interval().length() - d.zero_set_measure());
  finalize(&r);
  return r;
}

EnergyReport eval_Fdelta(const fem::Displacement* u, const Profile& p,
                         const Materials& m, const TransitionParams& t,
                         const EvalOptions& opt) {
  if (!p.is_lipschitz()) throw EnergyError("not in X_Lip");
  check_mesh_matches(u, p);
  const auto d = geom::decompose(p);
  EnergyReport r;
  r.functional_tag = Functional::Fdelta;
  if (u != nullptr) {
    r.bulk = fem::bulk_energy(*u, m, fem::ElasticMode::Delta(t));
    r.truncation_depth = u->mesh->depth;
    r.resolution = u->mesh->resolution;
  } else {
    const double depth = depth_or_default(opt, p);
    r.bulk = zero_displacement_bulk(p, depth, [&](double y) {
      const Sym2 e = mat::mismatch_delta(m, t, y);
      return 0.5 * mat::quad(mat::c_delta(m, t, y), e);
    });
    r.truncation_depth = depth;
    r.resolution = opt.resolution;
  }
  r.surface = surface_integral_phi_delta(m, t, d.graph_part);
  r.wetting_term = m.gamma_fs * p.interval().length();
  finalize(&r);
  return r;
}

EnergyReport eval_Fdelta_relaxed(const fem::Displacement* u, const Profile& p,
                                 const Materials& m, const TransitionParams& t,
                                 const EvalOptions& opt) {
  check_mesh_matches(u, p);
  const auto d = geom::decompose(p);
  EnergyReport r;
  r.functional_tag = Functional::FdeltaRelaxed;
  auto mismatch = [&](double y) {
    return opt.use_regularized_mismatch ? mat::mismatch_delta(m, t, y)
                                        : mat::mismatch_sharp(m, y);
  };
  if (u != nullptr) {
    r.bulk = mixed_bulk(
        *u, [&](double y) { return mat::c_delta(m, t, y); }, mismatch);
    r.truncation_depth = u->mesh->depth;
    r.resolution = u->mesh->resolution;
  } else {
    const double depth = depth_or_default(opt, p);
    r.bulk = zero_displacement_bulk(p, depth, [&](double y) {
      const Sym2 e = mismatch(y);
      return 0.5 * mat::quad(mat::c_delta(m, t, y), e);
    });
    r.truncation_depth = depth;
    r.resolution = opt.resolution;
  }
  r.surface = surface_integral_phi_delta(m, t, d.tilde_gamma);
  double cut_sum = 0.0;
  for (const auto& c : p.cuts()) {
    cut_sum += integrate(
        [&](double y) { return mat::phi_delta(m, t, y); }, c.y_bottom, c.y_top);
  }
  r.cut_term = 2.0 * cut_sum;
  r.wetting_term = m.gamma_fs * p.interval().length();
  finalize(&r);
  return r;
}

}  // namespace stratum::energy
