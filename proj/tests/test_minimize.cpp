#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "stratum/minimize.hpp"

using namespace stratum;
using namespace stratum::minimize;

namespace {

mat::Materials mats(double gf, double gs, double gfs, double e0 = 0.0) {
  return mat::Materials(gf, gs, gfs, e0, mat::Tensor4::isotropic(1.0, 1.0),
                        mat::Tensor4::isotropic(1.0, 1.0));
}

MinimizeSpec base_spec(geom::Profile initial, double target) {
  MinimizeSpec s{std::move(initial)};
  s.target_area = target;
  s.mu = 1.0;
  s.lambda_schedule = {1.0, 2.0, 4.0, 8.0};
  s.knot_count = 33;
  return s;
}

geom::Profile sawtooth(double mean, double amp, int teeth) {
  std::vector<geom::Knot> ks;
  for (int i = 0; i <= 2 * teeth; ++i) {
    const double x = 1.0 + 0.5 * i / teeth;
    ks.push_back({x, mean + (i % 2 == 0 ? -amp : amp)});
  }
  return geom::Profile(geom::Interval(1.0, 2.0), ks);
}

}  // namespace

TEST_CASE("penalized energy splits into energy plus area penalty") {
  geom::Profile flat = geom::Profile::constant(geom::Interval(1.0, 2.0), 0.5);
  mat::Materials m = mats(1.0, 2.0, 0.5);
  MinimizeSpec s = base_spec(flat, 0.5);
  const double at_target = penalized_energy(flat, m, 3.0, 0.5, s);
  CHECK(at_target == doctest::Approx(1.5).epsilon(1e-12));
  const double off_target = penalized_energy(flat, m, 3.0, 0.3, s);
  CHECK(off_target == doctest::Approx(1.5 + 3.0 * 0.2).epsilon(1e-12));
}

TEST_CASE("a flat film of the right area is already stationary") {
  geom::Profile flat = geom::Profile::constant(geom::Interval(1.0, 2.0), 0.5);
  MinimizeResult r = run(base_spec(flat, 0.5), mats(1.0, 2.0, 0.5));
  CHECK(r.converged);
  CHECK(r.certificate_ok);
  CHECK(r.area_error < 1e-6);
  CHECK(r.report.total == doctest::Approx(1.5).epsilon(1e-6));
  for (double x = 1.0; x <= 2.0; x += 0.05) {
    CHECK(r.profile.value(x) == doctest::Approx(0.5).epsilon(1e-4));
  }
}

TEST_CASE("a sawtooth start descends to the flat minimizer") {
  MinimizeResult r = run(base_spec(sawtooth(0.5, 0.15, 8), 0.5),
                         mats(1.0, 2.0, 0.5));
  CHECK(r.converged);
  CHECK(r.certificate_ok);
  // Flat optimum: gamma_f (b-a) + gamma_fs (b-a) = 1.5.
  CHECK(r.report.total < 1.5 * 1.01);
  CHECK(r.report.total >= 1.5 - 1e-9);
  CHECK(r.area_error < 1e-6);
}

TEST_CASE("accepted steps never raise the penalized energy") {
  MinimizeResult r = run(base_spec(sawtooth(0.5, 0.15, 8), 0.5),
                         mats(1.0, 2.0, 0.5));
  double lambda = -1.0, prev = 0.0;
  for (const auto& rec : r.log) {
    if (rec.lambda != lambda) {
      lambda = rec.lambda;
      prev = rec.penalized;
      continue;
    }
    CHECK(rec.penalized <= prev + 1e-12);
    prev = rec.penalized;
  }
}

TEST_CASE("the sweep reports the multiplier that met the area tolerance") {
  MinimizeResult r = run(base_spec(sawtooth(0.5, 0.1, 6), 0.5),
                         mats(1.0, 2.0, 0.5));
  bool found = false;
  for (double l : {1.0, 2.0, 4.0, 8.0}) found = found || l == r.lambda_used;
  CHECK(found);
  CHECK(r.area_error <= 1e-6);
}

TEST_CASE("the symmetric difference to the start stays within the budget") {
  MinimizeSpec s = base_spec(sawtooth(0.5, 0.15, 8), 0.5);
  s.mu = 0.05;  // tight budget: |Omega delta Omega_0| <= mu / 2
  MinimizeResult r = run(s, mats(1.0, 2.0, 0.5));
  CHECK(r.locality_used <= 0.5 * s.mu + 1e-12);
  CHECK(geom::symmetric_difference_area(r.profile, s.initial) <=
        0.5 * s.mu + 1e-12);
}

TEST_CASE("runs with the same seed are bitwise repeatable") {
  MinimizeSpec s = base_spec(sawtooth(0.5, 0.12, 8), 0.5);
  s.seed = 42;
  MinimizeResult a = run(s, mats(1.0, 2.0, 0.5));
  MinimizeResult b = run(s, mats(1.0, 2.0, 0.5));
  REQUIRE(a.log.size() == b.log.size());
  for (std::size_t i = 0; i < a.log.size(); ++i) {
    CHECK(a.log[i].penalized == b.log[i].penalized);
    CHECK(a.log[i].step_norm == b.log[i].step_norm);
  }
  CHECK(a.report.total == b.report.total);
}

TEST_CASE("heights are clipped at the substrate, never below") {
  // Start partly at zero; the dewetting constants push mass together but
  // the constraint keeps h >= 0 everywhere.
  geom::Profile start(geom::Interval(1.0, 2.0),
                      {{1.0, 0.0}, {1.3, 0.0}, {1.6, 0.6}, {2.0, 0.2}});
  MinimizeSpec s = base_spec(start, geom::film_area(start));
  MinimizeResult r = run(s, mats(2.0, 1.0, 0.3));
  CHECK(r.converged);
  for (double x = 1.0; x <= 2.0; x += 0.01) {
    CHECK(r.profile.value(x) >= -1e-14);
  }
}

TEST_CASE("an empty multiplier schedule is rejected") {
  MinimizeSpec s = base_spec(
      geom::Profile::constant(geom::Interval(1.0, 2.0), 0.5), 0.5);
  s.lambda_schedule.clear();
  CHECK_THROWS_AS(run(s, mats(1.0, 2.0, 0.5)), MinimizeError);
}
