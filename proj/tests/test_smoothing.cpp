#include <gtest/gtest.h>

#include <memory>

#include "adscurv/errors.hpp"
#include "adscurv/smoothing.hpp"
#include "suite.hpp"

using namespace adscurv;

TEST(Cone, UnitApexClosedForm) {
  auto cone = build_cone(-1.0);
  for (double r : {0.0, 0.2, 0.5, 0.9, 0.99}) {
    Vec2 k{r * std::cos(1.1), r * std::sin(1.1)};
    H2Point y = H2Point::from_klein(k);
    EXPECT_NEAR(cone->chart_height(k), -(1 - r), 1e-13) << r;
    EXPECT_NEAR(cone->value(y), std::atan((1 - r) / std::sqrt(1 - r * r)), 1e-13) << r;
  }
  EXPECT_NEAR(cone->bound(), M_PI / 4, 1e-15);
}

TEST(Cone, FlatLimit) {
  auto cone = build_cone(-1e-12);
  EXPECT_LT(cone->value(H2Point()), 1e-11);
  EXPECT_LT(cone->value(H2Point::polar(1, 2)), 1e-11);
}

TEST(Cone, OffCenterIsIsometricImage) {
  // The cone over a moved apex is the centered cone composed with an isometry.
  Vec2 c{0.3, -0.2};
  auto moved = build_cone(-0.8, c), centered = build_cone(-0.8);
  H2Point center = H2Point::from_klein(c);
  Rng rng(51);
  for (int i = 0; i < 200; ++i) {
    H2Point y = random_disc_point(rng, 2);
    double d = h2_distance(y, center);
    ASSERT_NEAR(moved->value(y), centered->value(H2Point::polar(d, 0)), 1e-12);
  }
}

TEST(Cone, ApexOutsideCylinderRejected) {
  EXPECT_THROW(build_cone(-1, {1.0, 0.0}), ApexOutsideCylinder);
  EXPECT_THROW(build_cone(-1, {0.8, 0.8}), ApexOutsideCylinder);
}

TEST(Cone, ApexAngleExceedsTwoPi) {
  auto cone = build_cone(-1.0);
  double prev = 0;
  for (double radius : {0.1, 0.01, 0.001}) {
    double ratio = circle_ratio(*cone, cone->center(), radius);
    EXPECT_GT(ratio, 2 * M_PI) << radius;
    prev = ratio;
  }
  RecordProperty("circle_ratio_0.001", std::to_string(prev));
  EXPECT_GT(cone->apex_angle(), 2 * M_PI);
}

TEST(Smoothing, ExactCoincidenceOutsideCap) {
  auto cone = build_cone(-0.7, {0.1, 0.2});
  for (CapKind cap : {CapKind::Bump, CapKind::Hyperbola}) {
    auto s = smooth_cone(*cone, 0.2, cap);
    Rng rng(52);
    for (int i = 0; i < 2000; ++i) {
      H2Point y = random_disc_point(rng, 3);
      if (std::tanh(h2_distance(y, cone->center())) < 0.2) continue;
      ASSERT_EQ(s->value(y), cone->value(y));
    }
  }
}

TEST(Smoothing, C1MatchAndFlatTop) {
  auto cone = build_cone(-0.7);
  for (CapKind cap : {CapKind::Bump, CapKind::Hyperbola}) {
    auto s = smooth_cone(*cone, 0.15, cap);
    EXPECT_NEAR(s->profile(0.15 - 1e-13), cone->profile(0.15), 1e-10);
    EXPECT_NEAR(s->profile_slope(0.15 - 1e-13), cone->profile_slope(0.15), 1e-10);
    EXPECT_EQ(s->profile_slope(0.0), 0.0);
    // Convex profile: slope nondecreasing.
    double prev = -1;
    for (int i = 0; i <= 300; ++i) {
      double sl = s->profile_slope(0.15 * i / 300);
      ASSERT_GE(sl, prev - 1e-15);
      prev = sl;
    }
  }
}

TEST(Smoothing, RhoValidation) {
  auto cone = build_cone(-0.7);
  EXPECT_THROW(smooth_cone(*cone, 1.0), RhoTooLarge);
  EXPECT_THROW(smooth_cone(*cone, 1.5), RhoTooLarge);
  EXPECT_THROW(smooth_cone(*cone, 0.0), OutOfRange);
}

TEST(Smoothing, AuditPasses) {
  auto s = smooth_cone(*build_cone(-0.7), 0.2);
  Report r = cconvex_audit(*s, 2000, 5);
  EXPECT_TRUE(r.pass) << r.to_json().dump();
}

TEST(Smoothing, CurveLengthConvergesAsRhoShrinks) {
  auto cone = build_cone(-0.7);
  // Polyline avoiding the apex: chart radius stays above 0.25.
  H2Polyline c({H2Point::polar(0.4, 0), H2Point::polar(0.5, 1.5), H2Point::polar(0.45, 3)});
  double ref = curve_length(*cone, c);
  double prev = 1e300;
  for (double rho : {0.2, 0.1, 0.05}) {
    double diff = std::abs(curve_length(*smooth_cone(*cone, rho), c) - ref);
    RecordProperty("length_difference_rho_" + std::to_string(rho), std::to_string(diff));
    EXPECT_LE(diff, prev);
    prev = diff;
  }
  EXPECT_LT(prev, 1e-12);
}

TEST(Curvature, FlatSliceIsMinusOne) {
  auto patch = CurvaturePatch::poincare(-0.3, 0.3, -0.3, 0.3, 31);
  CurvatureField f = induced_curvature(*constant_function(0), patch);
  EXPECT_NEAR(f.max_K, -1, f.tol_curv());
  EXPECT_NEAR(f.min_K, -1, f.tol_curv());
  EXPECT_TRUE(f.check().pass);
}

TEST(Curvature, ConstantHeightScalesCurvature) {
  double R = 0.6;
  auto patch = CurvaturePatch::poincare(-0.3, 0.3, -0.3, 0.3, 31);
  CurvatureField f = induced_curvature(*constant_function(R), patch);
  double expect = -1 / (std::cos(R) * std::cos(R));
  EXPECT_NEAR(f.max_K, expect, f.tol_curv());
  EXPECT_NEAR(f.min_K, expect, f.tol_curv());
  EXPECT_GT(f.min_det, 0);
}

TEST(Curvature, SmoothedConeAcrossJunction) {
  auto cone = build_cone(-0.7);
  auto s = smooth_cone(*cone, 0.2);
  CurvatureField f = induced_curvature(*s, CurvaturePatch::across_junction(cone->center(), 0.2, 41));
  Report r = f.check();
  EXPECT_TRUE(r.pass) << r.to_json().dump();
  EXPECT_GT(f.min_det, 0);
  std::string csv = f.to_csv();
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "s,t,E,F,G,K");
}

TEST(Curvature, NonSpacelikePatchRejected) {
  auto steep = callback_function([](const H2Point& y) { return 0.7 + 0.6 * std::tanh(5 * y.x1()); }, 1.4, "steep");
  EXPECT_THROW(induced_curvature(*steep, CurvaturePatch::poincare(-0.1, 0.1, -0.1, 0.1, 21)), DegenerateMetric);
}

TEST(Strictify, LambdaValidationAndHomothety) {
  EXPECT_THROW(strictify(constant_function(0), 1.0), BadLambda);
  EXPECT_THROW(strictify(constant_function(0), 0.0), BadLambda);
  ScaledMetric m = strictify(constant_function(0), 0.25);
  EXPECT_DOUBLE_EQ(m.distance_factor(), 0.5);
  EXPECT_DOUBLE_EQ(m.scale_distance(3.0), 1.5);
  CurvatureField f = m.curvature(CurvaturePatch::poincare(-0.3, 0.3, -0.3, 0.3, 31));
  EXPECT_NEAR(f.max_K, -4, 4 * f.tol_curv());
  EXPECT_NEAR(f.min_K, -4, 4 * f.tol_curv());
}

TEST(Strictify, SmoothedConeBecomesStrict) {
  auto s = smooth_cone(*build_cone(-0.7), 0.2);
  auto patch = CurvaturePatch::across_junction(s->center(), 0.2, 41);
  CurvatureField base = induced_curvature(*s, patch);
  CurvatureField scaled = strictify(s, 0.9).curvature(patch);
  EXPECT_LE(scaled.max_K, -1 / 0.9 + scaled.tol_curv());
  EXPECT_LT(scaled.max_K, -1);
  EXPECT_NEAR(scaled.max_K, base.max_K / 0.9, 1e-6 * std::abs(base.max_K));
}

TEST(SmoothingProperties, Homothety) { expect_property("homothety"); }
TEST(SmoothingProperties, SmoothingCurvature) { expect_property("smoothing_curvature", {1}); }
TEST(SmoothingProperties, CapCoincidence) { expect_property("cap_coincidence"); }
TEST(SmoothingProperties, SmoothedDistanceConvergence) { expect_property("smoothed_distance_convergence", {1}); }
