#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "stratum/materials.hpp"

using namespace stratum::mat;

namespace {

Materials simple(double gf, double gs, double gfs, double e0 = 0.0) {
  return Materials(gf, gs, gfs, e0, Tensor4::isotropic(1.0, 1.0),
                   Tensor4::isotropic(1.0, 1.0));
}

}  // namespace

TEST_CASE("constructor rejects invalid constants with the failed inequality") {
  CHECK_THROWS_WITH_AS(simple(0.0, 1.0, 0.0), "gamma_f > 0 violated",
                       MaterialError);
  CHECK_THROWS_WITH_AS(simple(1.0, 0.0, 0.0), "gamma_s > 0 violated",
                       MaterialError);
  CHECK_THROWS_WITH_AS(simple(1.0, 1.0, 1.5), "gamma_s - gamma_fs >= 0 violated",
                       MaterialError);
  CHECK_THROWS_WITH_AS(simple(1.0, 1.0, 0.0, -0.1), "e0 >= 0 violated",
                       MaterialError);
  // Negative gamma_fs is admissible.
  CHECK_NOTHROW(simple(1.0, 1.0, -2.0));
}

TEST_CASE("phi branches") {
  Materials m1 = simple(1.0, 2.0, 0.5);
  CHECK(phi(m1, 1.0) == 1.0);
  CHECK(phi(m1, 0.0) == 1.0);  // min{1, 1.5}
  Materials m2 = simple(2.0, 1.0, 0.0);
  CHECK(phi(m2, -0.1) == 1.0);  // dewetting branch
}

TEST_CASE("phi is lower semicontinuous at 0") {
  for (const Materials& m :
       {simple(1.0, 2.0, 0.5), simple(2.0, 1.0, 0.0), simple(1.0, 1.0, 1.0)}) {
    CHECK(phi(m, 0.0) <= std::min(phi(m, 1e-12), phi(m, -1e-12)));
  }
}

TEST_CASE("phi0 branches and domain") {
  Materials m = simple(1.0, 2.0, 0.5);
  CHECK(phi0(m, 0.0) == 2.0);
  CHECK(phi0(m, 1e-9) == 1.0);
  CHECK_THROWS_AS(phi0(m, -1.0), MaterialError);
}

TEST_CASE("phi_delta closed-form value") {
  // gamma_f = 1, gamma_s - gamma_fs = 1.5, delta = 0.1, y = 0.1:
  // f(1) = (2/pi) atan(1) = 1/2, so 1*(1/2) + 1.5*(1/2) = 1.25.
  Materials m = simple(1.0, 2.0, 0.5);
  TransitionParams t{0.1, BoundaryLayer::Atan};
  CHECK(phi_delta(m, t, 0.1) == doctest::Approx(1.25).epsilon(1e-14));
  CHECK(phi_delta(m, t, 0.0) == doctest::Approx(1.5));
  CHECK(phi_delta(m, t, 1e9) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("c_delta endpoints") {
  Materials m(1.0, 2.0, 0.5, 0.0, Tensor4::isotropic(1.0, 2.0),
              Tensor4::isotropic(3.0, 1.0));
  TransitionParams t{0.1, BoundaryLayer::Atan};
  // At y = 0 the blend collapses to the substrate tensor exactly.
  Tensor4 c0 = c_delta(m, t, 0.0);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      CHECK(c0.at(i, j) == doctest::Approx(m.C_s.at(i, j)).epsilon(1e-14));
    }
  }
  Tensor4 cinf = c_delta(m, t, 1e12);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      CHECK(cinf.at(i, j) == doctest::Approx(m.C_f.at(i, j)).epsilon(1e-9));
    }
  }
}

TEST_CASE("c_delta collapses when the tensors agree") {
  Materials m = simple(1.0, 2.0, 0.5);
  TransitionParams t{0.05, BoundaryLayer::Tanh};
  for (double y : {-1.0, -0.01, 0.0, 0.02, 3.0}) {
    Tensor4 c = c_delta(m, t, y);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        CHECK(c.at(i, j) == doctest::Approx(m.C_f.at(i, j)).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("c_delta stays positive definite at moderate contrast") {
  // The blend weights are (1/2)f(1+f) on C_f and (1/2)(1-f)(2+f) on C_s;
  // the C_f weight is negative below the interface, so definiteness needs
  // C_f < 9 C_s in the quadratic-form order (worst mix at f = -1/2).
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> lam(-0.5, 2.0), mu(0.1, 3.0);
  std::uniform_real_distribution<double> kappa(0.2, 8.0);
  std::uniform_real_distribution<double> ys(-5.0, 5.0), ds(0.01, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    double ls = lam(rng), ms = mu(rng);
    if (ls + ms <= 0.0) continue;
    Tensor4 cs = Tensor4::isotropic(ls, ms);
    Materials m(1.0, 2.0, 0.5, 0.0, cs * kappa(rng), cs);
    TransitionParams t{ds(rng), BoundaryLayer::Atan};
    CHECK(c_delta(m, t, ys(rng)).min_eigenvalue() > 0.0);
  }
}

TEST_CASE("c_delta loses definiteness past the 9x contrast threshold") {
  Tensor4 cs = Tensor4::isotropic(1.0, 1.0);
  TransitionParams t{0.1, BoundaryLayer::Atan};
  // atan layer hits f = -1/2 exactly at y = -delta.
  Materials below(1.0, 2.0, 0.5, 0.0, cs * 8.9, cs);
  CHECK(c_delta(below, t, -t.delta).min_eigenvalue() > 0.0);
  Materials above(1.0, 2.0, 0.5, 0.0, cs * 9.1, cs);
  CHECK(c_delta(above, t, -t.delta).min_eigenvalue() < 0.0);
}

TEST_CASE("energy densities") {
  Materials m(1.0, 2.0, 0.5, 0.0, Tensor4::isotropic(0.0, 1.0) * 2.0,
              Tensor4::isotropic(0.0, 1.0));
  Sym2 E = Sym2::e1_dyadic_e1();
  CHECK(w0(m, 1.0, Sym2{}) == 0.0);
  // Isotropic lambda=0, mu=1: W = mu |E|^2 = 1 for E = e1 (x) e1.
  CHECK(w0(m, -1.0, E) == doctest::Approx(1.0));
  // C_f = 2 C_s, so the film branch doubles the substrate one.
  CHECK(w0(m, 1.0, E) == doctest::Approx(2.0 * w0(m, -1.0, E)));
}

TEST_CASE("mismatch strains") {
  Materials m = simple(1.0, 2.0, 0.5, 0.04);
  CHECK(mismatch_sharp(m, 1.0).v[0] == doctest::Approx(0.04));
  CHECK(mismatch_sharp(m, 0.0).v[0] == doctest::Approx(0.04));
  CHECK(mismatch_sharp(m, -1e-12).v[0] == 0.0);
  TransitionParams t{0.1, BoundaryLayer::Atan};
  CHECK(mismatch_delta(m, t, 0.0).v[0] == doctest::Approx(0.02));
  CHECK(mismatch_delta(m, t, 1e9).v[0] == doctest::Approx(0.04).epsilon(1e-8));
  for (double y : {-0.5, 0.3}) {
    for (double d : {0.1, 0.01, 0.001}) {
      TransitionParams td{d, BoundaryLayer::Atan};
      double target = y > 0.0 ? 0.04 : 0.0;
      CHECK(std::abs(mismatch_delta(m, td, y).v[0] - target) <
            std::abs(mismatch_delta(m, {10.0 * d, BoundaryLayer::Atan}, y)
                         .v[0] -
                     target) +
                1e-15);
    }
  }
}

TEST_CASE("beta and perimeter bound") {
  CHECK(beta(simple(1.0, 2.0, 0.5)) == doctest::Approx(1.0));
  Materials m2 = simple(2.0, 1.0, 0.0);
  CHECK(beta(m2) == doctest::Approx(0.5));
  CHECK(perimeter_bound(m2, 4.0) == doctest::Approx(4.0));
  Materials m3 = simple(1.0, 1.0, 1.0);
  CHECK(beta(m3) == 0.0);
  CHECK(perimeter_bound(m3, 2.0) == doctest::Approx(2.0));
  CHECK_THROWS_AS(perimeter_bound(m3, -1.0), MaterialError);
}

TEST_CASE("boundary layer tail is square integrable below zero") {
  // int_{-T}^0 (1+f)^2 dy stays bounded as T grows; the atan tail obeys
  // (1+f(y))^2 <= 4/(pi^2 y^2).
  auto tail = [](double T) {
    const int n = 200000;
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
      const double y = -T * (i + 0.5) / n;
      const double v = 1.0 + boundary_layer(BoundaryLayer::Atan, y);
      s += v * v * (T / n);
    }
    return s;
  };
  const double t10 = tail(10.0), t100 = tail(100.0), t1000 = tail(1000.0);
  CHECK(t100 >= t10);
  CHECK(t1000 >= t100);
  CHECK(t1000 - t100 < 4.0 / (M_PI * M_PI) * (1.0 / 100.0));
  CHECK(t1000 < 2.0);
}

TEST_CASE("isotropic constructor admissibility") {
  CHECK_THROWS_AS(Tensor4::isotropic(0.0, 0.0), MaterialError);
  CHECK_THROWS_AS(Tensor4::isotropic(-2.0, 1.0), MaterialError);
  Tensor4 c = Tensor4::isotropic(1.0, 1.0);
  CHECK(c.is_symmetric());
  CHECK(c.min_eigenvalue() > 0.0);
}
