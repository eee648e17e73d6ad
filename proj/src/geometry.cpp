#include "stratum/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace stratum::geom {

namespace {

constexpr double kMatchTol = 1e-9;

bool close(double a, double b) {
  return std::abs(a - b) <= kMatchTol * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

double Segment::length() const { return std::hypot(b.x - a.x, b.y - a.y); }

double point_segment_distance(const Point& p, const Segment& s) {
  const double dx = s.b.x - s.a.x;
  const double dy = s.b.y - s.a.y;
  const double len2 = dx * dx + dy * dy;
  double t = 0.0;
  if (len2 > 0.0) {
    t = ((p.x - s.a.x) * dx + (p.y - s.a.y) * dy) / len2;
    t = std::clamp(t, 0.0, 1.0);
  }
  return std::hypot(p.x - (s.a.x + t * dx), p.y - (s.a.y + t * dy));
}

Interval::Interval(double a_, double b_) : a(a_), b(b_) {
  if (!(b > a && a > 0.0)) {
    throw ProfileError("interval requires b > a > 0");
  }
}

double LinearPiece::value_at(double x) const {
  if (x1 == x0) return y0;
  const double t = (x - x0) / (x1 - x0);
  return y0 + t * (y1 - y0);
}

double LinearPiece::slope() const {
  return x1 == x0 ? 0.0 : (y1 - y0) / (x1 - x0);
}

double LinearPiece::length() const { return std::hypot(x1 - x0, y1 - y0); }

Profile::Profile(Interval interval, std::vector<Knot> knots,
                 std::vector<JumpMark> jumps, std::vector<CutMark> cuts)
    : interval_(interval),
      knots_(std::move(knots)),
      jumps_(std::move(jumps)),
      cuts_(std::move(cuts)) {
  validate_and_compile();
}

Profile Profile::constant(Interval interval, double height) {
  return Profile(interval,
                 {{interval.a, height}, {interval.b, height}});
}

void Profile::validate_and_compile() {
  if (knots_.size() < 2) throw ProfileError("profile needs at least two knots");
  for (std::size_t i = 0; i < knots_.size(); ++i) {
    if (knots_[i].y < 0.0) throw ProfileError("knot height must be >= 0");
    if (i > 0 && !(knots_[i].x > knots_[i - 1].x)) {
      throw ProfileError("knot x-coordinates must be strictly increasing");
    }
  }
  if (!close(knots_.front().x, interval_.a) ||
      !close(knots_.back().x, interval_.b)) {
    throw ProfileError("knots must span the interval [a,b]");
  }
  knots_.front().x = interval_.a;
  knots_.back().x = interval_.b;

  std::sort(jumps_.begin(), jumps_.end(),
            [](const JumpMark& l, const JumpMark& r) { return l.x < r.x; });
  std::sort(cuts_.begin(), cuts_.end(),
            [](const CutMark& l, const CutMark& r) { return l.x < r.x; });
  for (std::size_t i = 1; i < jumps_.size(); ++i) {
    if (jumps_[i].x == jumps_[i - 1].x) throw ProfileError("duplicate jump x");
  }
  for (std::size_t i = 1; i < cuts_.size(); ++i) {
    if (cuts_[i].x == cuts_[i - 1].x) throw ProfileError("duplicate cut x");
  }
  for (const auto& j : jumps_) {
    if (!(j.x > interval_.a && j.x < interval_.b)) {
      throw ProfileError("jump x must lie strictly inside (a,b)");
    }
    if (!(j.y_high > j.y_low) || j.y_low < 0.0) {
      throw ProfileError("jump requires 0 <= y_low < y_high");
    }
  }

  // Compile linear pieces, restarting the interpolant at each jump.
  pieces_.clear();
  double cx = knots_.front().x;
  double cy = knots_.front().y;
  std::size_t ki = 1;
  std::size_t ji = 0;
  while (ki < knots_.size()) {
    const double kx = knots_[ki].x;
    const double ky = knots_[ki].y;
    if (ji < jumps_.size() && jumps_[ji].x < kx) {
      const JumpMark& j = jumps_[ji];
      const double left =
          cx == kx ? cy : cy + (ky - cy) * (j.x - cx) / (kx - cx);
      double restart;
      if (close(left, j.y_low)) {
        restart = j.y_high;
      } else if (close(left, j.y_high)) {
        restart = j.y_low;
      } else {
        throw ProfileError("jump endpoints inconsistent with the knot polyline");
      }
      if (j.x > cx) pieces_.push_back({cx, j.x, cy, left});
      cx = j.x;
      cy = restart;
      ++ji;
      continue;
    }
    if (kx > cx) pieces_.push_back({cx, kx, cy, ky});
    cx = kx;
    cy = ky;
    // A jump sitting exactly at this knot restarts the next piece.
    if (ji < jumps_.size() && jumps_[ji].x == kx) {
      const JumpMark& j = jumps_[ji];
      if (close(cy, j.y_low)) {
        cy = j.y_high;
      } else if (close(cy, j.y_high)) {
        cy = j.y_low;
      } else {
        throw ProfileError("jump endpoints inconsistent with the knot polyline");
      }
      ++ji;
    }
    ++ki;
  }
  if (ji < jumps_.size()) throw ProfileError("jump beyond the last knot");

  for (const auto& c : cuts_) {
    if (!(c.x > interval_.a && c.x < interval_.b)) {
      throw ProfileError("cut x must lie strictly inside (a,b)");
    }
    if (c.y_bottom < 0.0 || !(c.y_bottom < c.y_top)) {
      throw ProfileError("cut requires 0 <= y_bottom < y_top");
    }
    const double env = std::min(left_limit(c.x), right_limit(c.x));
    if (!close(c.y_top, env)) {
      throw ProfileError("cut y_top must equal the lower envelope h^-(x)");
    }
  }
}

double Profile::left_limit(double x) const {
  if (x <= interval_.a) x = interval_.a;
  if (x >= interval_.b) x = interval_.b;
  if (x == interval_.a) return pieces_.front().y0;
  for (const auto& p : pieces_) {
    if (x > p.x0 && x <= p.x1) return p.value_at(x);
  }
  return pieces_.back().y1;
}

double Profile::right_limit(double x) const {
  if (x <= interval_.a) x = interval_.a;
  if (x >= interval_.b) x = interval_.b;
  if (x == interval_.b) return pieces_.back().y1;
  for (const auto& p : pieces_) {
    if (x >= p.x0 && x < p.x1) return p.value_at(x);
  }
  return pieces_.front().y0;
}

double Profile::value(double x) const {
  if (x < interval_.a || x > interval_.b) {
    throw ProfileError("x outside [a,b]");
  }
  for (const auto& c : cuts_) {
    if (c.x == x) return c.y_bottom;
  }
  return std::min(left_limit(x), right_limit(x));
}

double Profile::max_height() const {
  double m = 0.0;
  for (const auto& p : pieces_) m = std::max({m, p.y0, p.y1});
  return m;
}

double Profile::total_variation() const {
  double var = 0.0;
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    var += std::abs(pieces_[i].y1 - pieces_[i].y0);
    if (i + 1 < pieces_.size()) {
      var += std::abs(pieces_[i + 1].y0 - pieces_[i].y1);
    }
  }
  for (const auto& c : cuts_) var += 2.0 * (c.y_top - c.y_bottom);
  return var;
}

double Profile::lipschitz_constant() const {
  double L = 0.0;
  for (const auto& p : pieces_) L = std::max(L, std::abs(p.slope()));
  return L;
}

Envelopes envelopes(const Profile& p, double x) {
  if (x < p.interval().a || x > p.interval().b) {
    throw ProfileError("x outside [a,b]");
  }
  const double l = p.left_limit(x);
  const double r = p.right_limit(x);
  return {std::min(l, r), std::max(l, r)};
}

double BoundaryDecomposition::graph_length() const {
  double s = 0.0;
  for (const auto& seg : graph_part) s += seg.length();
  return s;
}

double BoundaryDecomposition::jump_length() const {
  double s = 0.0;
  for (const auto& seg : jump_part) s += seg.length();
  return s;
}

double BoundaryDecomposition::cut_length() const {
  double s = 0.0;
  for (const auto& seg : cut_part) s += seg.length();
  return s;
}

double BoundaryDecomposition::total_length() const {
  return graph_length() + jump_length() + cut_length();
}

double BoundaryDecomposition::tilde_length() const {
  return graph_length() + jump_length();
}

double BoundaryDecomposition::zero_set_measure() const {
  double s = 0.0;
  for (const auto& z : zero_set) s += z.x1 - z.x0;
  return s;
}

BoundaryDecomposition decompose(const Profile& p, double cusp_slope) {
  BoundaryDecomposition d;
  const auto& pieces = p.pieces();
  for (const auto& pc : pieces) {
    if (pc.length() > 0.0) {
      d.graph_part.push_back({{pc.x0, pc.y0}, {pc.x1, pc.y1}});
    }
  }
  for (const auto& j : p.jumps()) {
    d.jump_part.push_back({{j.x, j.y_low}, {j.x, j.y_high}});
    d.cusp_points.push_back({j.x, j.y_low});
  }
  for (const auto& c : p.cuts()) {
    d.cut_part.push_back({{c.x, c.y_bottom}, {c.x, c.y_top}});
    d.cusp_points.push_back({c.x, c.y_top});
  }
  // Steep one-sided slopes at interior piece boundaries.
  for (std::size_t i = 0; i + 1 < pieces.size(); ++i) {
    const double x = pieces[i].x1;
    if (std::abs(pieces[i].slope()) > cusp_slope ||
        std::abs(pieces[i + 1].slope()) > cusp_slope) {
      d.cusp_points.push_back({x, std::min(pieces[i].y1, pieces[i + 1].y0)});
    }
  }
  std::sort(d.cusp_points.begin(), d.cusp_points.end(),
            [](const Point& l, const Point& r) {
              return l.x < r.x || (l.x == r.x && l.y < r.y);
            });
  d.cusp_points.erase(
      std::unique(d.cusp_points.begin(), d.cusp_points.end(),
                  [](const Point& l, const Point& r) {
                    return l.x == r.x && l.y == r.y;
                  }),
      d.cusp_points.end());

  d.tilde_gamma = d.graph_part;
  d.tilde_gamma.insert(d.tilde_gamma.end(), d.jump_part.begin(),
                       d.jump_part.end());

  // Zero set: zero plateaus plus isolated zeros of the pointwise value.
  std::vector<ZeroPart> zs;
  for (const auto& pc : pieces) {
    if (pc.y0 == 0.0 && pc.y1 == 0.0) {
      zs.push_back({pc.x0, pc.x1});
    } else if (pc.y0 == 0.0) {
      zs.push_back({pc.x0, pc.x0});
    } else if (pc.y1 == 0.0) {
      zs.push_back({pc.x1, pc.x1});
    }
  }
  for (const auto& c : p.cuts()) {
    if (c.y_bottom == 0.0) zs.push_back({c.x, c.x});
  }
  std::sort(zs.begin(), zs.end(), [](const ZeroPart& l, const ZeroPart& r) {
    return l.x0 < r.x0 || (l.x0 == r.x0 && l.x1 < r.x1);
  });
  for (const auto& z : zs) {
    if (!d.zero_set.empty() && z.x0 <= d.zero_set.back().x1) {
      d.zero_set.back().x1 = std::max(d.zero_set.back().x1, z.x1);
    } else {
      d.zero_set.push_back(z);
    }
  }
  return d;
}

double film_area(const Profile& p) {
  double area = 0.0;
  for (const auto& pc : p.pieces()) {
    area += 0.5 * (pc.y0 + pc.y1) * (pc.x1 - pc.x0);
  }
  return area;
}

double symmetric_difference_area(const Profile& p, const Profile& q) {
  if (p.interval().a != q.interval().a || p.interval().b != q.interval().b) {
    throw ProfileError("profiles must share the interval");
  }
  std::vector<double> xs;
  for (const auto& pc : p.pieces()) {
    xs.push_back(pc.x0);
    xs.push_back(pc.x1);
  }
  for (const auto& pc : q.pieces()) {
    xs.push_back(pc.x0);
    xs.push_back(pc.x1);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  double area = 0.0;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    const double x0 = xs[i], x1 = xs[i + 1];
    if (x1 <= x0) continue;
    const double d0 = p.right_limit(x0) - q.right_limit(x0);
    const double d1 = p.left_limit(x1) - q.left_limit(x1);
    if (d0 * d1 >= 0.0) {
      area += 0.5 * std::abs(d0 + d1) * (x1 - x0);
    } else {
      const double t = d0 / (d0 - d1);  // root of the linear difference
      area += 0.5 * std::abs(d0) * t * (x1 - x0) +
              0.5 * std::abs(d1) * (1.0 - t) * (x1 - x0);
    }
  }
  return area;
}

namespace {

// Distance from z to the closed complement of the subgraph of q inside the
// strip: zero when z lies at or above the lower envelope, otherwise the exact
// distance to the boundary segments (cut needles included).
double distance_to_complement(const Point& z, const Profile& q,
                              const BoundaryDecomposition& dq) {
  const double env = std::min(q.left_limit(z.x), q.right_limit(z.x));
  if (z.y >= env) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (const auto& seg : dq.graph_part) best = std::min(best, point_segment_distance(z, seg));
  for (const auto& seg : dq.jump_part) best = std::min(best, point_segment_distance(z, seg));
  for (const auto& seg : dq.cut_part) best = std::min(best, point_segment_distance(z, seg));
  return best;
}

void sample_boundary(const BoundaryDecomposition& d, double spacing,
                     std::vector<Point>* out) {
  auto sample = [&](const Segment& s) {
    const double len = s.length();
    const int n = std::max(1, static_cast<int>(std::ceil(len / spacing)));
    for (int i = 0; i <= n; ++i) {
      const double t = static_cast<double>(i) / n;
      out->push_back({s.a.x + t * (s.b.x - s.a.x), s.a.y + t * (s.b.y - s.a.y)});
    }
  };
  for (const auto& s : d.graph_part) sample(s);
  for (const auto& s : d.jump_part) sample(s);
  for (const auto& s : d.cut_part) sample(s);
}

}  // namespace

double hausdorff_complement_distance(const Profile& p, const Profile& q,
                                     double sample_spacing_rel) {
  if (p.interval().a != q.interval().a || p.interval().b != q.interval().b) {
    throw ProfileError("profiles must share the interval");
  }
  const double spacing = sample_spacing_rel * p.interval().length();
  const auto dp = decompose(p);
  const auto dq = decompose(q);
  std::vector<Point> sp, sq;
  sample_boundary(dp, spacing, &sp);
  sample_boundary(dq, spacing, &sq);
  double d = 0.0;
  for (const auto& z : sp) d = std::max(d, distance_to_complement(z, q, dq));
  for (const auto& z : sq) d = std::max(d, distance_to_complement(z, p, dp));
  return d;
}

}  // namespace stratum::geom
