#include "stratum/relaxation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace stratum::relax {

using geom::Interval;
using geom::Knot;
using geom::LinearPiece;
using geom::Profile;

namespace {

struct Seg {
  double x0, x1, y0, y1;
  double at(double x) const {
    if (x1 == x0) return std::min(y0, y1);
    return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
  }
};

/// Candidate branches whose lower envelope is the Yosida transform: each
/// piece with |slope| <= L extended by +-L cones, and an L-cone over every
/// pointwise value site (piece endpoints, jump lows, cut bottoms).
std::vector<Seg> transform_branches(const Profile& p, double L) {
  const double a = p.interval().a, b = p.interval().b;
  std::vector<Seg> segs;
  auto add = [&](double x0, double y0, double x1, double y1) {
    if (x1 <= x0) return;
    segs.push_back({x0, x1, y0, y1});
  };
  auto add_cone = [&](double cx, double cy) {
    add(a, cy + L * (cx - a), cx, cy);
    add(cx, cy, b, cy + L * (b - cx));
  };
  for (const auto& pc : p.pieces()) {
    add_cone(pc.x0, pc.y0);
    add_cone(pc.x1, pc.y1);
    if (std::abs(pc.slope()) <= L) add(pc.x0, pc.y0, pc.x1, pc.y1);
  }
  for (const auto& j : p.jumps()) add_cone(j.x, std::min(j.y_low, j.y_high));
  for (const auto& c : p.cuts()) add_cone(c.x, c.y_bottom);
  return segs;
}

}  // namespace

Profile yosida_transform(const Profile& p, double L) {
  if (!(L > 0.0)) throw RelaxError("Lipschitz bound must be positive");
  const double a = p.interval().a, b = p.interval().b;
  const auto segs = transform_branches(p, L);

  // The envelope is linear between branch endpoints and pairwise branch
  // crossings; interpolation through all of them reproduces it exactly.
  std::vector<double> xs{a, b};
  for (const auto& s : segs) {
    xs.push_back(s.x0);
    xs.push_back(s.x1);
  }
  for (std::size_t i = 0; i < segs.size(); ++i) {
    const double si = (segs[i].y1 - segs[i].y0) / (segs[i].x1 - segs[i].x0);
    for (std::size_t j = i + 1; j < segs.size(); ++j) {
      const double sj = (segs[j].y1 - segs[j].y0) / (segs[j].x1 - segs[j].x0);
      if (si == sj) continue;
      const double x =
          (segs[j].y0 - sj * segs[j].x0 - segs[i].y0 + si * segs[i].x0) /
          (si - sj);
      if (x > std::max(segs[i].x0, segs[j].x0) &&
          x < std::min(segs[i].x1, segs[j].x1)) {
        xs.push_back(x);
      }
    }
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  std::vector<Knot> knots;
  knots.reserve(xs.size());
  double prev_x = a - 1.0;
  for (double x : xs) {
    if (x < a || x > b) continue;
    if (x - prev_x < 1e-13 * (b - a) && !knots.empty()) continue;
    double v = std::numeric_limits<double>::infinity();
    for (const auto& s : segs) {
      if (x >= s.x0 && x <= s.x1) v = std::min(v, s.at(x));
    }
    knots.push_back({x, std::max(0.0, v)});
    prev_x = x;
  }
  // Drop collinear interior knots to keep the piece list tight.
  std::vector<Knot> out;
  for (std::size_t i = 0; i < knots.size(); ++i) {
    if (i > 0 && i + 1 < knots.size()) {
      const Knot& l = out.back();
      const Knot& r = knots[i + 1];
      const double yi = l.y + (r.y - l.y) * (knots[i].x - l.x) / (r.x - l.x);
      if (std::abs(yi - knots[i].y) < 1e-13) continue;
    }
    out.push_back(knots[i]);
  }
  return Profile(p.interval(), out);
}

std::vector<Profile> lipschitz_approximants(const Profile& p,
                                            const std::vector<double>& Ls) {
  std::vector<Profile> out;
  out.reserve(Ls.size());
  for (double L : Ls) out.push_back(yosida_transform(p, L));
  return out;
}

std::vector<double> default_L_schedule(const Profile& p, int n) {
  double L0 = 4.0 * p.total_variation() / p.interval().length();
  if (L0 <= 0.0) L0 = 1.0;
  std::vector<double> out;
  out.reserve(n);
  for (int k = 0; k < n; ++k) out.push_back(std::ldexp(L0, k));
  return out;
}

namespace {

/// |{h >= lambda}| and int of h over {h < lambda}, exact on the pieces.
void split_at_level(const Profile& p, double lambda, double* measure_above,
                    double* integral_below) {
  double ma = 0.0, ib = 0.0;
  for (const auto& pc : p.pieces()) {
    const double w = pc.x1 - pc.x0;
    if (w == 0.0) continue;
    const double lo = std::min(pc.y0, pc.y1), hi = std::max(pc.y0, pc.y1);
    if (lo >= lambda) {
      ma += w;
    } else if (hi <= lambda) {
      ib += 0.5 * (pc.y0 + pc.y1) * w;
    } else {
      const double xc = pc.x0 + w * (lambda - pc.y0) / (pc.y1 - pc.y0);
      const double wa = (pc.y1 > pc.y0) ? (pc.x1 - xc) : (xc - pc.x0);
      ma += wa;
      ib += 0.5 * (lo + lambda) * (w - wa);
    }
  }
  *measure_above = ma;
  *integral_below = ib;
}

}  // namespace

VolumeCorrection volume_correct(const Profile& tilde_h, double target_area,
                                double r) {
  if (!(r > 0.0 && r < 1.0)) throw RelaxError("r must lie in (0,1)");
  const double area = geom::film_area(tilde_h);
  const double deficit = target_area - area;
  if (deficit < -kTolQuad) {
    throw RelaxError("approximant area exceeds the target");
  }
  if (deficit <= kTolQuad) {
    double ma, ib;
    split_at_level(tilde_h, 0.0, &ma, &ib);
    return {tilde_h, 0.0, 0.0, ma};
  }
  const double lambda = std::pow(deficit, r);
  double measure_above, integral_below;
  split_at_level(tilde_h, lambda, &measure_above, &integral_below);
  const double mu = measure_above + integral_below / lambda;
  if (mu <= 0.0) {
    throw RelaxError(
        "Vitali lower bound hypothesis violated: approximant vanishes with "
        "positive deficit");
  }
  const double eps = deficit / mu;

  // Apply the three-branch value transform; continuous across v = lambda,
  // so knot insertion at the lambda crossings suffices.
  auto T = [&](double v) {
    if (v == 0.0) return 0.0;
    if (v >= lambda) return v + eps;
    return (1.0 + eps / lambda) * v;
  };
  std::vector<Knot> knots;
  std::vector<geom::JumpMark> jumps;
  const auto& pcs = tilde_h.pieces();
  for (std::size_t i = 0; i < pcs.size(); ++i) {
    const auto& pc = pcs[i];
    if (i > 0 && pcs[i - 1].y1 != pc.y0) {
      // Discontinuity between pieces: the transform maps both one-sided
      // limits; the knot at the junction already carries the left one.
      jumps.push_back({pc.x0, std::min(T(pcs[i - 1].y1), T(pc.y0)),
                       std::max(T(pcs[i - 1].y1), T(pc.y0))});
    }
    knots.push_back({pc.x0, T(i > 0 ? pcs[i - 1].y1 : pc.y0)});
    const double lo = std::min(pc.y0, pc.y1), hi = std::max(pc.y0, pc.y1);
    if (lo < lambda && hi > lambda) {
      const double xc =
          pc.x0 + (pc.x1 - pc.x0) * (lambda - pc.y0) / (pc.y1 - pc.y0);
      knots.push_back({xc, lambda + eps});
    }
    if (i + 1 == pcs.size()) knots.push_back({pc.x1, T(pc.y1)});
  }
  std::vector<geom::CutMark> cuts;
  for (const auto& c : tilde_h.cuts()) {
    cuts.push_back({c.x, T(c.y_bottom), T(c.y_top)});
  }
  Profile h_n(tilde_h.interval(), std::move(knots), std::move(jumps),
              std::move(cuts));
  return {std::move(h_n), eps, lambda, mu};
}

fem::Displacement shift_displacement(const fem::Displacement& u, double eps_n,
                                     double y0, const fem::Mesh* target) {
  if (eps_n < 0.0) throw RelaxError("shift requires eps >= 0");
  if (!(y0 < -eps_n)) throw RelaxError("y0 must lie below -eps");
  const fem::Mesh* mesh = target ? target : u.mesh;
  fem::Displacement out;
  out.mesh = mesh;
  out.u.resize(2 * mesh->vertices.size());
  for (std::size_t i = 0; i < mesh->vertices.size(); ++i) {
    const auto& v = mesh->vertices[i];
    std::array<double, 2> val;
    if (v.y > y0 + eps_n) {
      val = u.sample(v.x, v.y - eps_n);
    } else if (v.y > y0) {
      val = u.sample(v.x, y0);
    } else {
      val = u.sample(v.x, v.y);
    }
    out.u[2 * i] = val[0];
    out.u[2 * i + 1] = val[1];
  }
  return out;
}

DewettingLift dewetting_lift(const Profile& p, double eps_n) {
  if (!p.is_lipschitz()) throw RelaxError("lift requires a Lipschitz profile");
  if (!(eps_n > 0.0)) throw RelaxError("lift requires eps > 0");
  const double area = geom::film_area(p);
  if (area <= 0.0) throw RelaxError("degenerate input: film area is zero");

  auto capped = [&](double t) {
    std::vector<Knot> knots;
    const auto& pcs = p.pieces();
    auto push = [&](double x, double v) {
      knots.push_back({x, std::min(v + eps_n, t)});
    };
    for (std::size_t i = 0; i < pcs.size(); ++i) {
      const auto& pc = pcs[i];
      push(pc.x0, pc.y0);
      const double cap = t - eps_n;
      const double lo = std::min(pc.y0, pc.y1), hi = std::max(pc.y0, pc.y1);
      if (lo < cap && hi > cap) {
        const double xc =
            pc.x0 + (pc.x1 - pc.x0) * (cap - pc.y0) / (pc.y1 - pc.y0);
        knots.push_back({xc, t});
      }
      if (i + 1 == pcs.size()) push(pc.x1, pc.y1);
    }
    return Profile(p.interval(), knots);
  };

  double lo = 0.0, hi = p.max_height() + eps_n;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double am = geom::film_area(capped(mid));
    if (std::abs(am - area) <= 1e-12 * std::max(1.0, area)) {
      return {capped(mid), mid};
    }
    (am < area ? lo : hi) = mid;
  }
  const double t = 0.5 * (lo + hi);
  return {capped(t), t};
}

VitaliReport vitali_lower_bound(const std::vector<Profile>& h_seq,
                                const std::vector<double>& lambda_seq) {
  if (h_seq.empty() || h_seq.size() != lambda_seq.size()) {
    throw RelaxError("empty or mismatched sequence");
  }
  VitaliReport rep;
  rep.empirical_mu = std::numeric_limits<double>::infinity();
  for (std::size_t n = 0; n < h_seq.size(); ++n) {
    const double lambda = lambda_seq[n];
    if (!(lambda > 0.0)) throw RelaxError("lambda values must be positive");
    double ma, ib;
    split_at_level(h_seq[n], lambda, &ma, &ib);
    const double bound = ma + ib / lambda;
    rep.per_step.push_back(bound);
    rep.empirical_mu = std::min(rep.empirical_mu, bound);
  }
  // Least-squares slope of bound vs step index.
  const std::size_t n = rep.per_step.size();
  if (n >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
      sx += static_cast<double>(i);
      sy += rep.per_step[i];
      sxx += static_cast<double>(i) * static_cast<double>(i);
      sxy += static_cast<double>(i) * rep.per_step[i];
    }
    const double denom = n * sxx - sx * sx;
    rep.trend_slope = denom != 0.0 ? (n * sxy - sx * sy) / denom : 0.0;
  }
  rep.decays = rep.trend_slope < -1e-3 || rep.empirical_mu <= 0.0;
  return rep;
}

RecoverySequence build_recovery_sequence(const Profile& target, double r,
                                         const std::vector<double>& Ls) {
  const double target_area = geom::film_area(target);
  RecoverySequence seq{target, r, false, {}};
  int n = 0;
  for (double L : Ls) {
    Profile h_tilde = yosida_transform(target, L);
    VolumeCorrection vc = volume_correct(h_tilde, target_area, r);
    const double area_err = geom::film_area(vc.h_n) - target_area;
    const double ratio = vc.lambda_n > 0.0 ? vc.eps_n / vc.lambda_n : 0.0;
    seq.steps.push_back({n, L, std::move(h_tilde), std::move(vc.h_n), vc.eps_n,
                         vc.lambda_n, vc.mu_n, area_err,
                         ratio * ratio + 2.0 * ratio});
    ++n;
  }
  return seq;
}

}  // namespace stratum::relax
