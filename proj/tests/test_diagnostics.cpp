#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "stratum/diagnostics.hpp"

using namespace stratum;
using namespace stratum::diag;

namespace {

mat::Materials mats(double gf, double gs, double gfs) {
  return mat::Materials(gf, gs, gfs, 0.0, mat::Tensor4::isotropic(1.0, 1.0),
                        mat::Tensor4::isotropic(1.0, 1.0));
}

geom::Profile half_disc(double r, int n) {
  std::vector<geom::Knot> ks;
  for (int i = 0; i <= n; ++i) {
    const double x = 1.5 - r + 2.0 * r * i / n;
    const double s = r * r - (x - 1.5) * (x - 1.5);
    ks.push_back({x, std::sqrt(std::max(0.0, s))});
  }
  ks.front().y = 0.0;
  ks.back().y = 0.0;
  return geom::Profile(geom::Interval(1.5 - r, 1.5 + r), ks);
}

}  // namespace

TEST_CASE("flat boundary admits interior balls everywhere") {
  geom::Profile p = geom::Profile::constant(geom::Interval(1.0, 2.0), 0.5);
  BallCertificate c = internal_ball_check(p, 0.2, 0.05);
  CHECK(c.passed);
  CHECK(c.violations.empty());
  CHECK(!c.witnesses.empty());
  // Every witness ball lies inside the strip and touches its sample.
  for (const auto& w : c.witnesses) {
    const double d = std::hypot(w.z.x - w.center.x, w.z.y - w.center.y);
    CHECK(d == doctest::Approx(0.2).epsilon(1e-9));
  }
}

TEST_CASE("a peak kink defeats every radius, a valley kink none") {
  // At a concave kink of h the film wedge is narrower than a half plane,
  // so no interior ball can touch the apex at any radius.
  geom::Profile peak(geom::Interval(1.0, 2.0),
                     {{1.0, 0.2}, {1.5, 0.9}, {2.0, 0.2}});
  for (double rho : {0.1, 0.01}) {
    BallCertificate c = internal_ball_check(peak, rho, rho / 4.0);
    CHECK_FALSE(c.passed);
    bool near_apex = false;
    for (const auto& v : c.violations) {
      near_apex = near_apex || (std::abs(v.z.x - 1.5) < 0.1 &&
                                std::abs(v.z.y - 0.9) < 0.15);
      CHECK(v.best_rho < rho);
    }
    CHECK(near_apex);
  }
  // A reentrant valley leaves more than a half plane of film below the
  // apex; a ball hanging straight down touches it at any modest radius.
  geom::Profile valley(geom::Interval(1.0, 2.0),
                       {{1.0, 0.8}, {1.5, 0.1}, {2.0, 0.8}});
  for (double rho : {0.05, 0.0125}) {
    CHECK(internal_ball_check(valley, rho, rho / 4.0).passed);
  }
}

TEST_CASE("a slit blocks balls near its mouth but not at its tip") {
  geom::Profile p(geom::Interval(1.0, 2.0), {{1.0, 1.0}, {2.0, 1.0}}, {},
                  {{1.5, 0.4, 1.0}});
  BallCertificate c = internal_ball_check(p, 0.1, 0.025);
  CHECK_FALSE(c.passed);
  bool near_mouth = false;
  for (const auto& v : c.violations) {
    // The tip itself is touchable by a ball hanging below the slit.
    CHECK(std::hypot(v.z.x - 1.5, v.z.y - 0.4) > 0.05);
    if (std::abs(v.z.x - 1.5) < 0.12 && v.z.y > 0.85) near_mouth = true;
  }
  CHECK(near_mouth);
}

TEST_CASE("ball check rejects bad radius and spacing") {
  geom::Profile p = geom::Profile::constant(geom::Interval(1.0, 2.0), 0.5);
  CHECK_THROWS_WITH_AS(internal_ball_check(p, 0.0, 0.1),
                       "rho must be positive", DiagError);
  CHECK_THROWS_WITH_AS(internal_ball_check(p, 0.2, 0.1),
                       "sample spacing must be positive and at most rho/4",
                       DiagError);
}

TEST_CASE("dyadic sweep finds a positive radius on a smooth boundary") {
  geom::Profile p = geom::Profile::constant(geom::Interval(1.0, 2.0), 0.5);
  BallCertificate c = internal_ball_sweep(p, 0.01);
  CHECK(c.rho0 > 0.0);
  CHECK(c.rho0 <= 0.5);
  CHECK(internal_ball_check(p, c.rho0, c.rho0 / 4.0).passed);
}

TEST_CASE("isoperimetric probe on a straight boundary piece") {
  geom::Profile p = geom::Profile::constant(geom::Interval(1.0, 2.0), 0.5);
  IsoperimetricProbe r =
      isoperimetric_probe(p, {1.2, 0.5}, {1.8, 0.5});
  CHECK(r.theta == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(r.area == doctest::Approx(0.0));
  CHECK(r.slack == doctest::Approx(2.0 * 0.6 / (2.0 * std::sqrt(M_PI)))
                       .epsilon(1e-9));
}

TEST_CASE("isoperimetric probe on a tent matches the shoelace area") {
  geom::Profile p(geom::Interval(1.0, 2.0),
                  {{1.0, 0.0}, {1.5, 1.0}, {2.0, 0.0}});
  IsoperimetricProbe r = isoperimetric_probe(p, {1.0, 0.0}, {2.0, 0.0});
  CHECK(r.theta == doctest::Approx(std::sqrt(5.0)).epsilon(1e-9));
  CHECK(r.area == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(r.slack > 0.0);
}

TEST_CASE("isoperimetric probe on a half disc is nearly tight") {
  geom::Profile p = half_disc(0.45, 4000);
  IsoperimetricProbe r = isoperimetric_probe(p, {1.05, 0.0}, {1.95, 0.0});

  CHECK(r.theta == doctest::Approx(M_PI / 2.0).epsilon(1e-4));
  CHECK(r.area ==
        doctest::Approx(M_PI * 0.45 * 0.45 / 2.0).epsilon(1e-4));
  // sqrt|D| <= (theta + 1) chord / (2 sqrt(pi)) with little slack.
  CHECK(r.slack >= 0.0);
  CHECK(r.slack < 0.2 * std::sqrt(r.area));
}

TEST_CASE("probes reject chords leaving the film or missing the boundary") {
  geom::Profile w(geom::Interval(1.0, 2.0),
                  {{1.0, 0.8}, {1.5, 0.1}, {2.0, 0.8}});
  CHECK_THROWS_WITH_AS(isoperimetric_probe(w, {1.0, 0.8}, {2.0, 0.8}),
                       "chord exits the film region", DiagError);
  geom::Profile p = geom::Profile::constant(geom::Interval(1.0, 2.0), 0.5);
  CHECK_THROWS_WITH_AS(isoperimetric_probe(p, {1.5, 2.0}, {1.8, 0.5}),
                       "chord endpoint does not lie on the boundary",
                       DiagError);
}

TEST_CASE("transition-layer sweep gaps shrink with delta") {
  geom::Profile p = geom::Profile::constant(geom::Interval(1.0, 2.0), 1.0);
  auto rows = gamma_sweep(nullptr, p, mats(1.0, 2.0, 0.5),
                          mat::BoundaryLayer::Atan, {0.1, 0.05, 0.025});
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].gap > rows[1].gap);
  CHECK(rows[1].gap > rows[2].gap);
  CHECK(rows[2].f_total == doctest::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("sweep validates the profile and the schedule") {
  geom::Profile jumpy(geom::Interval(1.0, 2.0),
                      {{1.0, 0.2}, {1.5, 0.2}, {2.0, 0.7}}, {{1.5, 0.2, 0.7}});
  mat::Materials m = mats(1.0, 2.0, 0.5);
  CHECK_THROWS_WITH_AS(
      gamma_sweep(nullptr, jumpy, m, mat::BoundaryLayer::Atan, {0.1}),
      "sweep requires a Lipschitz profile", DiagError);
  geom::Profile p = geom::Profile::constant(geom::Interval(1.0, 2.0), 1.0);
  CHECK_THROWS_WITH_AS(
      gamma_sweep(nullptr, p, m, mat::BoundaryLayer::Atan, {0.05, 0.1}),
      "delta schedule must be decreasing", DiagError);
}

TEST_CASE("lifted sweep records the cap height") {
  geom::Profile p(geom::Interval(1.0, 2.0),
                  {{1.0, 0.0}, {1.5, 1.0}, {2.0, 0.0}});
  auto rows = gamma_sweep(nullptr, p, mats(1.0, 2.5, 0.5),
                          mat::BoundaryLayer::Atan, {0.1, 0.05}, true);
  for (const auto& r : rows) {
    CHECK(r.lift_t > 0.0);
    CHECK(r.lift_t < 1.1);
  }
}

TEST_CASE("boundary classification partitions the reduced boundary") {
  geom::Profile p(geom::Interval(1.0, 2.0),
                  {{1.0, 0.5}, {1.4, 0.5}, {1.7, 0.8}, {2.0, 0.8}},
                  {{1.4, 0.5, 0.9}}, {{1.85, 0.3, 0.8}});
  BoundaryClassification c = classify_boundary(p);
  CHECK(c.cut_segments.size() == 1);
  CHECK(c.cut_segments[0].length() == doctest::Approx(0.5));
  double regular = 0.0;
  for (const auto& s : c.regular) regular += s.length();
  const auto dec = geom::decompose(p);
  CHECK(regular == doctest::Approx(dec.tilde_length()).epsilon(1e-12));
  CHECK(regular + c.cut_segments[0].length() ==
        doctest::Approx(dec.total_length()).epsilon(1e-12));
  bool two_sided = false;
  for (const auto& g : c.local_graphs) two_sided = two_sided || g.two_sided;
  CHECK(two_sided);
}
