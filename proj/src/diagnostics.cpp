#include "stratum/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "stratum/relaxation.hpp"

namespace stratum::diag {

using geom::Point;
using geom::Profile;
using geom::Segment;

namespace {

constexpr int kDirections = 32;
constexpr double kFarAbove = 1e6;

/// Distance from a point to the complement of the subgraph within the
/// strip: zero on or above the profile (and on slits), otherwise the
/// nearest boundary or lateral complement face.
struct ComplementDistance {
  const Profile* p;
  geom::BoundaryDecomposition d;
  std::vector<Segment> faces;  // boundary plus lateral complement faces

  explicit ComplementDistance(const Profile& prof)
      : p(&prof), d(geom::decompose(prof)) {
    faces = d.graph_part;
    faces.insert(faces.end(), d.jump_part.begin(), d.jump_part.end());
    faces.insert(faces.end(), d.cut_part.begin(), d.cut_part.end());
    const double a = prof.interval().a, b = prof.interval().b;
    faces.push_back({{a, geom::envelopes(prof, a).h_plus}, {a, kFarAbove}});
    faces.push_back({{b, geom::envelopes(prof, b).h_plus}, {b, kFarAbove}});
  }

  double operator()(const Point& q) const {
    if (q.x >= p->interval().a && q.x <= p->interval().b) {
      if (q.y >= geom::envelopes(*p, q.x).h_minus) return 0.0;
    }
    double best = std::numeric_limits<double>::infinity();
    for (const auto& s : faces) {
      best = std::min(best, geom::point_segment_distance(q, s));
    }
    return best;
  }
};

struct BoundarySample {
  Point z;
};

std::vector<BoundarySample> sample_boundary(
    const geom::BoundaryDecomposition& d, double spacing) {
  std::vector<BoundarySample> out;
  auto walk = [&](const Segment& s, bool both_sides) {
    const double len = s.length();
    const int n = std::max(1, static_cast<int>(std::ceil(len / spacing)));
    for (int i = 0; i <= n; ++i) {
      const double t = static_cast<double>(i) / n;
      Point z{s.a.x + t * (s.b.x - s.a.x), s.a.y + t * (s.b.y - s.a.y)};
      out.push_back({z});
      if (both_sides) out.push_back({z});
    }
  };
  for (const auto& s : d.graph_part) walk(s, false);
  for (const auto& s : d.jump_part) walk(s, false);
  for (const auto& s : d.cut_part) walk(s, true);
  return out;
}

bool admissible_center(const ComplementDistance& cd, const Point& c,
                       double rho, double tol) {
  return cd(c) >= rho - tol;
}

bool point_passes(const ComplementDistance& cd, const Point& z, double rho,
                  double tol, Point* center_out) {
  for (int k = 0; k < kDirections; ++k) {
    const double ang = 2.0 * M_PI * k / kDirections;
    const Point c{z.x + rho * std::cos(ang), z.y + rho * std::sin(ang)};
    if (admissible_center(cd, c, rho, tol)) {
      if (center_out) *center_out = c;
      return true;
    }
  }
  return false;
}

}  // namespace

BallCertificate internal_ball_check(const Profile& p, double rho,
                                    double spacing) {
  if (!(rho > 0.0)) throw DiagError("rho must be positive");
  if (!(spacing > 0.0 && spacing <= rho / 4.0)) {
    throw DiagError("sample spacing must be positive and at most rho/4");
  }
  const double tol = 0.5 * spacing;
  ComplementDistance cd(p);
  BallCertificate cert;
  cert.rho = rho;
  cert.sample_spacing = spacing;
  cert.passed = true;
  for (const auto& s : sample_boundary(cd.d, spacing)) {
    Point c;
    if (point_passes(cd, s.z, rho, tol, &c)) {
      cert.witnesses.push_back({s.z, c});
    } else {
      cert.passed = false;
      double best = 0.0;
      for (double r = 0.5 * rho; r >= 0.25 * spacing; r *= 0.5) {
        if (point_passes(cd, s.z, r, tol, nullptr)) {
          best = r;
          break;
        }
      }
      cert.violations.push_back({s.z, best});
    }
  }
  return cert;
}

BallCertificate internal_ball_sweep(const Profile& p, double spacing) {
  const double rho_max = 0.5 * p.interval().length();
  BallCertificate last;
  for (double rho = rho_max; rho >= spacing; rho *= 0.5) {
    BallCertificate c =
        internal_ball_check(p, rho, std::min(spacing, rho / 4.0));
    if (c.passed) {
      c.rho0 = rho;
      return c;
    }
    last = std::move(c);
  }
  last.rho0 = 0.0;
  return last;
}

namespace {

/// Boundary path of tilde Gamma from (a, h(a)) to (b, h(b)) as an ordered
/// polyline.
std::vector<Point> boundary_path(const geom::BoundaryDecomposition& d) {
  std::vector<Segment> segs = d.tilde_gamma;
  std::sort(segs.begin(), segs.end(), [](const Segment& l, const Segment& r) {
    if (l.a.x != r.a.x) return l.a.x < r.a.x;
    return std::min(l.a.y, l.b.y) < std::min(r.a.y, r.b.y);
  });
  std::vector<Point> path;
  for (const auto& s : segs) {
    if (path.empty()) path.push_back(s.a);
    path.push_back(s.b);
  }
  return path;
}

double dist(const Point& p, const Point& q) {
  return std::hypot(p.x - q.x, p.y - q.y);
}

}  // namespace

IsoperimetricProbe isoperimetric_probe(const Profile& p, Point p1, Point p2) {
  const auto d = geom::decompose(p);
  std::vector<Point> path = boundary_path(d);

  // Locate the two chord ends on the path (projected onto the polyline).
  auto locate = [&](const Point& q) -> std::pair<std::size_t, Point> {
    double best = std::numeric_limits<double>::infinity();
    std::size_t at = 0;
    Point proj = q;
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
      Segment s{path[i], path[i + 1]};
      const double dd = geom::point_segment_distance(q, s);
      if (dd < best) {
        best = dd;
        at = i;
        const double vx = s.b.x - s.a.x, vy = s.b.y - s.a.y;
        const double l2 = vx * vx + vy * vy;
        double t = l2 > 0.0 ? ((q.x - s.a.x) * vx + (q.y - s.a.y) * vy) / l2
                            : 0.0;
        t = std::clamp(t, 0.0, 1.0);
        proj = {s.a.x + t * vx, s.a.y + t * vy};
      }
    }
    if (best > 1e-7 * p.interval().length()) {
      throw DiagError("chord endpoint does not lie on the boundary");
    }
    return {at, proj};
  };
  auto [i1, q1] = locate(p1);
  auto [i2, q2] = locate(p2);
  if (i2 < i1 || (i1 == i2 && q2.x < q1.x)) {
    std::swap(i1, i2);
    std::swap(q1, q2);
  }

  // The open chord must stay inside the film.
  for (int k = 1; k < 64; ++k) {
    const double t = k / 64.0;
    const double x = q1.x + t * (q2.x - q1.x);
    const double y = q1.y + t * (q2.y - q1.y);
    if (x <= p.interval().a || x >= p.interval().b ||
        y > geom::envelopes(p, x).h_minus + 1e-12) {
      throw DiagError("chord exits the film region");
    }
  }

  std::vector<Point> arc{q1};
  for (std::size_t i = i1 + 1; i <= i2; ++i) arc.push_back(path[i]);
  arc.push_back(q2);

  double arc_len = 0.0;
  for (std::size_t i = 0; i + 1 < arc.size(); ++i) {
    arc_len += dist(arc[i], arc[i + 1]);
  }
  const double chord = dist(q1, q2);
  if (chord <= 0.0) throw DiagError("degenerate chord");

  // Shoelace over arc closed by the chord.
  double area2 = 0.0;
  for (std::size_t i = 0; i + 1 < arc.size(); ++i) {
    area2 += arc[i].x * arc[i + 1].y - arc[i + 1].x * arc[i].y;
  }
  area2 += arc.back().x * arc.front().y - arc.front().x * arc.back().y;

  IsoperimetricProbe probe;
  probe.theta = arc_len / chord;
  probe.area = 0.5 * std::abs(area2);
  probe.slack = (probe.theta + 1.0) * chord / (2.0 * std::sqrt(M_PI)) -
                std::sqrt(probe.area);
  return probe;
}

std::vector<GammaRow> gamma_sweep(const fem::Displacement* u, const Profile& p,
                                  const mat::Materials& m,
                                  mat::BoundaryLayer f,
                                  const std::vector<double>& deltas,
                                  bool with_lift) {
  if (!p.is_lipschitz()) throw DiagError("sweep requires a Lipschitz profile");
  for (std::size_t i = 1; i < deltas.size(); ++i) {
    if (!(deltas[i] < deltas[i - 1])) {
      throw DiagError("delta schedule must be decreasing");
    }
  }
  const double f_total = energy::eval_F(u, p, m).total;
  std::vector<GammaRow> rows;
  for (double delta : deltas) {
    mat::TransitionParams t{delta, f};
    GammaRow row;
    row.delta = delta;
    row.f_total = f_total;
    if (with_lift) {
      relax::DewettingLift lift = relax::dewetting_lift(p, std::sqrt(delta));
      row.lift_t = lift.t_n;
      row.f_delta_total = energy::eval_Fdelta(nullptr, lift.h_n, m, t).total;
    } else {
      row.f_delta_total = energy::eval_Fdelta(u, p, m, t).total;
    }
    row.gap = std::abs(row.f_delta_total - f_total);
    rows.push_back(row);
  }
  return rows;
}

BoundaryClassification classify_boundary(const Profile& p) {
  const auto d = geom::decompose(p);
  BoundaryClassification c;
  c.regular = d.graph_part;
  c.regular.insert(c.regular.end(), d.jump_part.begin(), d.jump_part.end());
  c.cusps = d.cusp_points;
  c.cut_segments = d.cut_part;
  for (const auto& s : d.graph_part) {
    const double dx = std::abs(s.b.x - s.a.x);
    const double dy = std::abs(s.b.y - s.a.y);
    c.local_graphs.push_back(
        {{0.5 * (s.a.x + s.b.x), 0.5 * (s.a.y + s.b.y)},
         dx > 0.0 ? dy / dx : 0.0,
         false});
  }
  // Vertical parts are graphs in the rotated frame with zero slope.
  for (const auto& s : d.jump_part) {
    c.local_graphs.push_back(
        {{0.5 * (s.a.x + s.b.x), 0.5 * (s.a.y + s.b.y)}, 0.0, false});
  }
  for (const auto& cut : p.cuts()) {
    // Slit neighborhood: the two one-sided graphs meet at the top with
    // matching value.
    double lip = 0.0;
    for (const auto& pc : p.pieces()) {
      if (pc.x1 == cut.x || pc.x0 == cut.x) {
        lip = std::max(lip, std::abs(pc.slope()));
      }
    }
    c.local_graphs.push_back({{cut.x, cut.y_top}, lip, true});
  }
  return c;
}

}  // namespace stratum::diag
