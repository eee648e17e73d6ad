#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "stratum/geometry.hpp"

using namespace stratum::geom;

TEST_CASE("interval requires b > a > 0") {
  CHECK_THROWS_AS(Interval(2.0, 1.0), ProfileError);
  CHECK_THROWS_AS(Interval(0.0, 1.0), ProfileError);
  CHECK_THROWS_AS(Interval(-1.0, 2.0), ProfileError);
  CHECK(Interval(1.0, 2.0).length() == 1.0);
}

TEST_CASE("constant profile basics") {
  Profile p = Profile::constant(Interval(1.0, 2.0), 1.0);
  CHECK(p.max_height() == 1.0);
  CHECK(p.total_variation() == 0.0);
  CHECK(p.is_lipschitz());
  CHECK(p.lipschitz_constant() == 0.0);
  CHECK(film_area(p) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(p.value(1.5) == 1.0);

  auto d = decompose(p);
  CHECK(d.graph_length() == doctest::Approx(1.0));
  CHECK(d.jump_length() == 0.0);
  CHECK(d.cut_length() == 0.0);
  CHECK(d.zero_set.empty());
}

TEST_CASE("tent profile") {
  Profile p(Interval(1.0, 2.0), {{1.0, 0.0}, {1.5, 0.5}, {2.0, 0.0}});
  CHECK(film_area(p) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(p.total_variation() == doctest::Approx(1.0));
  CHECK(p.lipschitz_constant() == doctest::Approx(1.0));
  auto d = decompose(p);
  // Graph length: two segments of length sqrt(0.25 + 0.25).
  CHECK(d.graph_length() == doctest::Approx(2.0 * std::hypot(0.5, 0.5)));
  // Endpoint zeros are isolated: the projected zero set has measure 0.
  CHECK(d.zero_set_measure() == 0.0);
}

TEST_CASE("zero plateau is recorded with its measure") {
  Profile p(Interval(1.0, 2.0),
            {{1.0, 0.0}, {1.4, 0.0}, {1.6, 0.4}, {2.0, 0.4}});
  auto d = decompose(p);
  CHECK(d.zero_set_measure() == doctest::Approx(0.4));
  REQUIRE(d.zero_set.size() == 1);
  CHECK(d.zero_set[0].is_interval());
}

TEST_CASE("jump profile compiles against one-sided limits") {
  Profile p(Interval(1.0, 2.0), {{1.0, 0.2}, {1.5, 0.2}, {2.0, 0.7}},
            {{1.5, 0.2, 0.7}});
  CHECK_FALSE(p.is_lipschitz());
  CHECK(p.total_variation() == doctest::Approx(0.5));
  CHECK(film_area(p) == doctest::Approx(0.5 * 0.2 + 0.5 * 0.7));
  // lsc value at the jump point is the lower limit.
  CHECK(p.value(1.5) == doctest::Approx(0.2));

  auto d = decompose(p);
  CHECK(d.jump_length() == doctest::Approx(0.5));
  CHECK(d.tilde_length() ==
        doctest::Approx(d.graph_length() + d.jump_length()));
  REQUIRE(!d.cusp_points.empty());
  bool found = false;
  for (const auto& c : d.cusp_points) {
    if (std::abs(c.x - 1.5) < 1e-12 && std::abs(c.y - 0.2) < 1e-12) {
      found = true;
    }
  }
  CHECK(found);
}

TEST_CASE("jump left limit must match one of the marked values") {
  CHECK_THROWS_AS(Profile(Interval(1.0, 2.0), {{1.0, 0.2}, {2.0, 0.7}},
                          {{1.5, 0.2, 0.7}}),
                  ProfileError);
}

TEST_CASE("cut profile") {
  Profile p(Interval(1.0, 2.0), {{1.0, 1.0}, {2.0, 1.0}}, {},
            {{1.5, 0.7, 1.0}});
  CHECK_FALSE(p.is_lipschitz());
  CHECK(film_area(p) == doctest::Approx(1.0));
  CHECK(p.value(1.5) == doctest::Approx(0.7));  // lsc dips to the cut bottom
  auto d = decompose(p);
  CHECK(d.cut_length() == doctest::Approx(0.3));
  // tilde Gamma excludes the slit.
  CHECK(d.tilde_length() == doctest::Approx(1.0));
  CHECK(d.total_length() == doctest::Approx(1.3));
}

TEST_CASE("cut top must meet the lower envelope") {
  CHECK_THROWS_AS(Profile(Interval(1.0, 2.0), {{1.0, 1.0}, {2.0, 1.0}}, {},
                          {{1.5, 0.2, 0.8}}),
                  ProfileError);
}

TEST_CASE("total variation counts cuts twice") {
  Profile p(Interval(1.0, 2.0), {{1.0, 1.0}, {2.0, 1.0}}, {},
            {{1.5, 0.7, 1.0}});
  CHECK(p.total_variation() == doctest::Approx(0.6));
}

TEST_CASE("symmetric difference of flats") {
  Profile p = Profile::constant(Interval(1.0, 2.0), 1.0);
  Profile q = Profile::constant(Interval(1.0, 2.0), 0.8);
  CHECK(symmetric_difference_area(p, q) == doctest::Approx(0.2));
  CHECK(symmetric_difference_area(p, p) == 0.0);
}

TEST_CASE("symmetric difference with sign change") {
  Profile p(Interval(1.0, 2.0), {{1.0, 0.0}, {2.0, 1.0}});
  Profile q(Interval(1.0, 2.0), {{1.0, 1.0}, {2.0, 0.0}});
  // |x - (1-x)| integrated over [0,1] = 1/2.
  CHECK(symmetric_difference_area(p, q) == doctest::Approx(0.5));
}

TEST_CASE("hausdorff distance of complements") {
  Profile p = Profile::constant(Interval(1.0, 2.0), 1.0);
  Profile q = Profile::constant(Interval(1.0, 2.0), 0.8);
  CHECK(hausdorff_complement_distance(p, q) ==
        doctest::Approx(0.2).epsilon(1e-3));
  CHECK(hausdorff_complement_distance(p, p) == doctest::Approx(0.0));
}

TEST_CASE("envelopes at a jump") {
  Profile p(Interval(1.0, 2.0), {{1.0, 0.2}, {1.5, 0.2}, {2.0, 0.7}},
            {{1.5, 0.2, 0.7}});
  auto e = envelopes(p, 1.5);
  CHECK(e.h_minus == doctest::Approx(0.2));
  CHECK(e.h_plus == doctest::Approx(0.7));
}

TEST_CASE("point-segment distance") {
  Segment s{{0.0, 0.0}, {1.0, 0.0}};
  CHECK(point_segment_distance({0.5, 0.3}, s) == doctest::Approx(0.3));
  CHECK(point_segment_distance({2.0, 0.0}, s) == doctest::Approx(1.0));
  CHECK(point_segment_distance({-3.0, 4.0}, s) == doctest::Approx(5.0));
}

TEST_CASE("knots must be inside the interval and ordered") {
  CHECK_THROWS_AS(Profile(Interval(1.0, 2.0), {{0.5, 0.0}, {2.0, 0.0}}),
                  ProfileError);
  CHECK_THROWS_AS(
      Profile(Interval(1.0, 2.0), {{1.0, 0.0}, {1.5, 1.0}, {1.5, 2.0}, {2.0, 0.0}}),
      ProfileError);
  CHECK_THROWS_AS(Profile(Interval(1.0, 2.0), {{1.0, -0.1}, {2.0, 0.0}}),
                  ProfileError);
}
