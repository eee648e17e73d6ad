#include "stratum/minimize.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace stratum::minimize {

using geom::Interval;
using geom::Knot;
using geom::Profile;
using mat::Materials;

namespace {

Profile from_heights(const Interval& iv, const std::vector<double>& h) {
  std::vector<Knot> knots;
  knots.reserve(h.size());
  const int n = static_cast<int>(h.size());
  for (int i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / (n - 1);
    knots.push_back({iv.a + t * iv.length(), h[i]});
  }
  return Profile(iv, knots);
}

energy::EnergyReport energy_at(const Profile& p, const Materials& m,
                               const MinimizeSpec& spec) {
  if (spec.fem_depth > 0.0 && spec.fem_resolution > 0.0 && m.e0 > 0.0) {
    fem::Mesh mesh = fem::build_mesh(p, spec.fem_depth, spec.fem_resolution);
    fem::Displacement u = fem::solve_equilibrium(
        mesh, m, fem::ElasticMode::Sharp(), {}, spec.tol_solve);
    return energy::eval_F(&u, p, m);
  }
  return energy::eval_F(nullptr, p, m);
}

struct Eval {
  double penalized;
  double total;
  double area;
  double boundary_length;
};

Eval evaluate(const std::vector<double>& h, const Interval& iv,
              const Materials& m, double lambda, const MinimizeSpec& spec) {
  Profile p = from_heights(iv, h);
  energy::EnergyReport rep = energy_at(p, m, spec);
  const double area = geom::film_area(p);
  const double len = geom::decompose(p).total_length();
  return {rep.total + lambda * std::abs(area - spec.target_area), rep.total,
          area, len};
}

}  // namespace

double penalized_energy(const Profile& p, const Materials& m, double lambda,
                        double target_area, const MinimizeSpec& spec) {
  energy::EnergyReport rep = energy_at(p, m, spec);
  return rep.total + lambda * std::abs(geom::film_area(p) - target_area);
}

MinimizeResult run(const MinimizeSpec& spec, const Materials& m) {
  if (!(spec.target_area > 0.0)) throw MinimizeError("target_area > 0 violated");
  if (!(spec.mu > 0.0)) throw MinimizeError("mu > 0 violated");
  if (spec.knot_count < 3) throw MinimizeError("knot_count >= 3 violated");
  if (spec.lambda_schedule.empty()) {
    throw MinimizeError("lambda schedule must be non-empty");
  }
  for (double l : spec.lambda_schedule) {
    if (!(l > 0.0)) throw MinimizeError("lambda values must be positive");
  }
  const Interval iv = spec.initial.interval();
  if (!spec.initial.is_lipschitz()) {
    throw MinimizeError("initial profile must be a Lipschitz graph");
  }

  // Initial heights sampled on the descent grid.
  std::vector<double> h0(spec.knot_count);
  for (int i = 0; i < spec.knot_count; ++i) {
    const double t = static_cast<double>(i) / (spec.knot_count - 1);
    const double x = iv.a + t * iv.length();
    h0[i] = std::max(0.0, spec.initial.value(x));
  }
  const Profile grid_initial = from_heights(iv, h0);

  auto locality = [&](const std::vector<double>& h) {
    return geom::symmetric_difference_area(from_heights(iv, h), grid_initial);
  };

  MinimizeResult best{grid_initial, {}, 0.0, 0.0, 0.0, false, false, {}};
  bool have_best = false;

  for (double lambda : spec.lambda_schedule) {
    std::vector<double> h = h0;
    Eval cur = evaluate(h, iv, m, lambda, spec);
    double locality_used = 0.0;
    double last_step = 0.0;
    bool stationary = false;
    std::vector<IterationRecord> log;

    for (int iter = 0; iter < spec.max_outer_iters; ++iter) {
      const double max_h = *std::max_element(h.begin(), h.end());
      const double fd = 1e-6 * std::max(1.0, max_h);
      std::vector<double> g(h.size());
      double gmax = 0.0;
      for (std::size_t i = 0; i < h.size(); ++i) {
        std::vector<double> hp = h, hm = h;
        hp[i] = h[i] + fd;
        hm[i] = std::max(0.0, h[i] - fd);
        const double ep = evaluate(hp, iv, m, lambda, spec).penalized;
        const double em = evaluate(hm, iv, m, lambda, spec).penalized;
        g[i] = (ep - em) / (hp[i] - hm[i]);
        // At the h = 0 constraint only outward (upward) moves count.
        if (h[i] == 0.0 && g[i] > 0.0) g[i] = 0.0;
        gmax = std::max(gmax, std::abs(g[i]));
      }
      if (gmax == 0.0) {
        stationary = true;
        break;
      }

      double alpha = 0.1 * std::max(1.0, max_h) / gmax;
      bool accepted = false;
      for (int bt = 0; bt < 30; ++bt, alpha *= 0.5) {
        std::vector<double> hn(h.size());
        double step = 0.0;
        for (std::size_t i = 0; i < h.size(); ++i) {
          hn[i] = std::max(0.0, h[i] - alpha * g[i]);
          step = std::max(step, std::abs(hn[i] - h[i]));
        }
        if (step == 0.0) break;
        const double loc = locality(hn);
        if (loc > 0.5 * spec.mu) continue;
        Eval en = evaluate(hn, iv, m, lambda, spec);
        const bool better =
            en.penalized < cur.penalized - 1e-15 ||
            (std::abs(en.penalized - cur.penalized) <= 1e-15 &&
             en.boundary_length < cur.boundary_length);
        if (!better) continue;
        h = std::move(hn);
        cur = en;
        locality_used = std::max(locality_used, loc);
        last_step = step;
        accepted = true;
        break;
      }
      log.push_back({lambda, iter, cur.penalized,
                     cur.area - spec.target_area, last_step,
                     cur.boundary_length});

      // A perimeter past this bound cannot coexist with the recorded
      // energy; it would mean the accounting is wrong.
      const double cap = mat::perimeter_bound(m, std::max(cur.total, 0.0));
      if (cur.boundary_length > cap + 1e-9) {
        throw MinimizeError("perimeter bound violated during descent");
      }
      if (!accepted || last_step < spec.tol_step) {
        stationary = true;
        break;
      }
    }

    const double area_err = cur.area - spec.target_area;
    MinimizeResult res{from_heights(iv, h),
                       energy_at(from_heights(iv, h), m, spec),
                       lambda,
                       area_err,
                       locality_used,
                       stationary && std::abs(area_err) < spec.tol_area,
                       false,
                       std::move(log)};

    if (!have_best || std::abs(res.area_error) < std::abs(best.area_error)) {
      best = res;
      have_best = true;
    }
    if (res.converged) {
      best = std::move(res);
      break;
    }
  }

  // Sampled local-minimality certificate: random area-preserving
  // perturbations inside the locality radius must not beat the result.
  {
    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> h(spec.knot_count);
    for (int i = 0; i < spec.knot_count; ++i) {
      const double t = static_cast<double>(i) / (spec.knot_count - 1);
      h[i] = best.profile.value(iv.a + t * iv.length());
    }
    const double e_here = energy_at(best.profile, m, spec).total;
    // Trapezoid weights; directions orthogonal to them preserve the area.
    std::vector<double> w(spec.knot_count, 1.0);
    w.front() = w.back() = 0.5;
    bool ok = true;
    for (int trial = 0; trial < 200 && ok; ++trial) {
      std::vector<double> d(spec.knot_count);
      double wd = 0.0, ww = 0.0;
      for (int i = 0; i < spec.knot_count; ++i) {
        d[i] = gauss(rng);
        wd += w[i] * d[i];
        ww += w[i] * w[i];
      }
      for (int i = 0; i < spec.knot_count; ++i) d[i] -= wd / ww * w[i];
      double dmax = 0.0;
      for (double v : d) dmax = std::max(dmax, std::abs(v));
      if (dmax == 0.0) continue;
      double scale = 0.01 * std::max(1.0, best.profile.max_height()) / dmax;
      // Shrink until the perturbation is admissible (h >= 0, local).
      for (int half = 0; half < 40; ++half, scale *= 0.5) {
        std::vector<double> hp(spec.knot_count);
        bool nonneg = true;
        for (int i = 0; i < spec.knot_count; ++i) {
          hp[i] = h[i] + scale * d[i];
          if (hp[i] < 0.0) nonneg = false;
        }
        if (!nonneg) continue;
        Profile pp = from_heights(iv, hp);
        if (geom::symmetric_difference_area(pp, best.profile) > 0.5 * spec.mu) {
          continue;
        }
        if (energy_at(pp, m, spec).total < e_here - spec.tol_cert) ok = false;
        break;
      }
    }
    best.certificate_ok = ok;
  }

  return best;
}

}  // namespace stratum::minimize
