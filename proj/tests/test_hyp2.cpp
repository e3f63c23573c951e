#include <gtest/gtest.h>

#include "adscurv/errors.hpp"
#include "adscurv/hyp2.hpp"
#include "adscurv/surface.hpp"
#include "oracles.hpp"

using namespace adscurv;

TEST(Distance, IdentityIsZero) { EXPECT_EQ(h2_distance(H2Point(), H2Point()), 0.0); }

TEST(Distance, UnitSpeedGeodesic) {
  H2Point q = H2Point::from_spatial(std::sinh(1.0), 0);
  EXPECT_NEAR(h2_distance(H2Point(), q), 1.0, 1e-14);
}

TEST(Distance, MatchesDiscFormula) {
  H2Point p = H2Point::from_spatial(std::sinh(1.0), 0), q = H2Point::from_spatial(0, std::sinh(1.0));
  double ref = oracle::disc_distance(oracle::disc_from_hyperboloid(p.x0(), p.x1(), p.x2()),
                                     oracle::disc_from_hyperboloid(q.x0(), q.x1(), q.x2()));
  EXPECT_NEAR(h2_distance(p, q), ref, 1e-13);
}

TEST(Distance, RandomPairsMatchDiscFormula) {
  Rng rng(3);
  for (int i = 0; i < 1000; ++i) {
    H2Point p = random_disc_point(rng, 3), q = random_disc_point(rng, 3);
    double ref = oracle::disc_distance(oracle::disc_from_hyperboloid(p.x0(), p.x1(), p.x2()),
                                       oracle::disc_from_hyperboloid(q.x0(), q.x1(), q.x2()));
    ASSERT_NEAR(h2_distance(p, q), ref, 1e-11 * (1 + ref));
  }
}

TEST(Point, StaysOnHyperboloid) {
  Rng rng(5);
  for (int i = 0; i < 1000; ++i) {
    H2Point p = random_disc_point(rng, 5);
    ASSERT_LT(std::abs(p.norm_residual()), 1e-12 * p.x0() * p.x0());
    ASSERT_GE(p.x0(), 1.0);
  }
}

TEST(ComparisonTriangle, EquilateralAnglesMatchPlacement) {
  double a = std::acosh(3.0);
  TriangleShape t = comparison_triangle(a, a, a);
  double placed = oracle::apex_angle_by_placement(a, a, a);
  EXPECT_NEAR(placed, std::acos(0.75), 1e-12);
  EXPECT_NEAR(t.alpha, placed, 1e-12);
  EXPECT_NEAR(t.beta, placed, 1e-12);
  EXPECT_NEAR(t.gamma, placed, 1e-12);
}

TEST(ComparisonTriangle, DegenerateRejected) {
  EXPECT_THROW(comparison_triangle(1, 1, 2), DegenerateTriangle);
  EXPECT_THROW(comparison_triangle(0, 1, 1), DegenerateTriangle);
}

TEST(ComparisonTriangle, TinyBaseApproachesEuclideanLimit) {
  // Apex angle ~ base / sinh(leg); base angles -> pi/2.
  TriangleShape t = comparison_triangle(1, 1, 1e-6);
  EXPECT_NEAR(t.alpha, 1e-6 / std::sinh(1.0), 1e-12);
  EXPECT_NEAR(t.beta, M_PI / 2, 1e-6);
  EXPECT_NEAR(t.gamma, M_PI / 2, 1e-6);
}

TEST(ComparisonTriangle, RandomAnglesMatchPlacement) {
  Rng rng(9);
  for (int i = 0; i < 100; ++i) {
    double b = uniform(rng, 0.1, 2), c = uniform(rng, 0.1, 2);
    double a = uniform(rng, std::abs(b - c) + 0.05, b + c - 0.05);
    TriangleShape t = comparison_triangle(c, b, a);
    ASSERT_NEAR(t.alpha, oracle::apex_angle_by_placement(a, b, c), 1e-10);
  }
}

TEST(Area, EquilateralValue) {
  double a = std::acosh(3.0);
  EXPECT_NEAR(triangle_area(comparison_triangle(a, a, a)), M_PI - 3 * std::acos(0.75), 1e-12);
  EXPECT_NEAR(M_PI - 3 * std::acos(0.75), 0.9733899101495, 1e-12);
}

TEST(Area, RegularOctagonFanIsFourPi) {
  // Interior angle pi/4: the right triangle center-midpoint-corner gives cosh R = cot(pi/8)^2.
  double cot = 1 / std::tan(M_PI / 8);
  double R = std::acosh(cot * cot);
  double side = oracle::disc_distance(oracle::disc_polar(R, 0), oracle::disc_polar(R, M_PI / 4));
  TriangleShape t = comparison_triangle(R, R, side);
  EXPECT_NEAR(t.alpha, M_PI / 4, 1e-10);
  EXPECT_NEAR(8 * triangle_area(t), 4 * M_PI, 1e-9);
}

TEST(Area, TinyTriangleIsNearlyFlat) {
  double s = 1e-4;
  TriangleShape t = comparison_triangle(s, s, s);
  // Area of a small equilateral triangle ~ sqrt(3)/4 s^2.
  EXPECT_NEAR(triangle_area(t), std::sqrt(3.0) / 4 * s * s, 1e-12);
}

TEST(IsoscelesChord, ZeroAngleCollapses) { EXPECT_NEAR(isosceles_chord(0.7, 1e-14), 0, 1e-13); }

TEST(IsoscelesChord, SmallLegsValue) {
  double l = isosceles_chord(0.05, 0.5);
  double via_cosine = std::acosh(std::cosh(0.05) * std::cosh(0.05) - std::sinh(0.05) * std::sinh(0.05) * std::cos(0.5));
  EXPECT_NEAR(l, via_cosine, 1e-12);
  EXPECT_NEAR(l, 0.0247500739968, 1e-12);
  EXPECT_LE(l, std::sinh(0.1) * 0.5);
}

TEST(IsoscelesChord, RightAngleMatchesDisc) {
  double ref = oracle::disc_distance(oracle::disc_polar(1, 0), oracle::disc_polar(1, M_PI / 2));
  EXPECT_NEAR(isosceles_chord(1, M_PI / 2), ref, 1e-12);
}

TEST(IsoscelesChord, BoundedBySinhEpsTheta) {
  Rng rng(17);
  for (int i = 0; i < 20000; ++i) {
    double eps = uniform(rng, 1e-3, 4), x = eps * uniform01(rng), theta = M_PI * uniform01(rng);
    ASSERT_LE(isosceles_chord(x, theta), std::sinh(eps) * theta + 1e-12);
  }
}

TEST(ComparisonAngle, EquilateralClosedForm) {
  for (double a : {0.1, 1.0, 2.5}) {
    double expect = std::acos(std::cosh(a) / (std::cosh(a) + 1));
    EXPECT_NEAR(comparison_angle(a, a, a), expect, 1e-12);
    EXPECT_NEAR(oracle::apex_angle_by_placement(a, a, a), expect, 1e-10);
  }
}

TEST(ComparisonAngle, CollinearIsPi) { EXPECT_NEAR(comparison_angle(1.0, 0.5, 1.5), M_PI, 1e-7); }

TEST(ComparisonAngle, CoincidentFarVerticesGiveZero) { EXPECT_NEAR(comparison_angle(1.0, 1.0, 0.0), 0.0, 1e-12); }

TEST(TriangleProperties, CosineLawAndThinness) {
  Rng rng(21);
  for (int i = 0; i < 5000; ++i) {
    H2Point p = random_disc_point(rng, 3), q = random_disc_point(rng, 3), s = random_disc_point(rng, 3);
    double a = h2_distance(q, s), b = h2_distance(p, s), c = h2_distance(p, q);
    if (std::min({b + c - a, a + c - b, a + b - c}) < 1e-6 || std::min({a, b, c}) < 1e-3) continue;
    TriangleShape t = comparison_triangle(c, b, a);
    ASSERT_LT(t.cosine_residual(), 1e-10);
    ASSERT_GT(triangle_area(t), 0);
    ASSERT_LT(t.excess(), 0);
    ASSERT_NEAR(triangle_area(t), -t.excess(), 1e-15);
  }
}

TEST(TriangleProperties, DualCosineLawRoundTrip) {
  Rng rng(22);
  for (int i = 0; i < 5000; ++i) {
    double b = uniform(rng, 0.05, 3), c = uniform(rng, 0.05, 3);
    double a = uniform(rng, std::abs(b - c), b + c);
    if (std::min({b + c - a, a + c - b, a + b - c}) < 1e-3) continue;
    TriangleShape t = comparison_triangle(c, b, a);
    ASSERT_NEAR(side_from_angles(t.alpha, t.beta, t.gamma), a, 1e-9);
    ASSERT_NEAR(side_from_angles(t.beta, t.alpha, t.gamma), b, 1e-9);
    ASSERT_NEAR(side_from_angles(t.gamma, t.alpha, t.beta), c, 1e-9);
  }
}

TEST(TriangleProperties, TriangleInequality) {
  Rng rng(23);
  for (int i = 0; i < 20000; ++i) {
    H2Point p = random_disc_point(rng, 4), q = random_disc_point(rng, 4), s = random_disc_point(rng, 4);
    ASSERT_LE(h2_distance(p, s), h2_distance(p, q) + h2_distance(q, s) + 1e-12);
    ASSERT_EQ(h2_distance(p, q), h2_distance(q, p));
  }
}

TEST(Placement, ThirdPointHitsBothDistances) {
  Rng rng(24);
  for (int i = 0; i < 500; ++i) {
    H2Point a = random_disc_point(rng, 2), b = random_disc_point(rng, 2);
    double dab = h2_distance(a, b);
    double da = uniform(rng, 0.1, 2), db = uniform(rng, std::abs(dab - da) + 0.05, dab + da - 0.01);
    if (db <= 0.05) continue;
    for (double side : {1.0, -1.0}) {
      H2Point c = third_point(a, b, da, db, side);
      ASSERT_NEAR(h2_distance(a, c), da, 1e-9);
      ASSERT_NEAR(h2_distance(b, c), db, 1e-9);
      ASSERT_GT(side * orientation(a, b, c), 0);
    }
  }
}

TEST(Polyline, LengthIsSumOfSegments) {
  H2Polyline c({H2Point(), H2Point::polar(1, 0), H2Point::polar(1, 1), H2Point::polar(2, 2)});
  double sum = 0;
  for (std::size_t i = 0; i < c.segments(); ++i) sum += c.segment_length(i);
  EXPECT_DOUBLE_EQ(c.length(), sum);
  EXPECT_THROW(H2Polyline({H2Point(), H2Point()}), CoincidentPoints);
  EXPECT_NEAR(h2_distance(c.at(1, c.segment_length(1)), H2Point::polar(1, 1)), 0, 1e-7);
}
