#include <gtest/gtest.h>

#include "adscurv/ads3.hpp"
#include "adscurv/errors.hpp"
#include "adscurv/surface.hpp"
#include "suite.hpp"

using namespace adscurv;

TEST(BilinearForm, BasisValues) {
  EXPECT_EQ(bilinear_form({1, 0, 0, 0}, {1, 0, 0, 0}), -1);
  EXPECT_EQ(bilinear_form({0, 1, 0, 0}, {0, 1, 0, 0}), -1);
  EXPECT_EQ(bilinear_form({0, 0, 1, 0}, {0, 0, 1, 0}), 1);
  EXPECT_EQ(bilinear_form({0, 0, 0, 1}, {0, 0, 0, 1}), 1);
}

TEST(BilinearForm, QuadricCurve) {
  for (double s : {0.0, 0.3, 1.0, 4.0}) {
    Vec4 x{std::cosh(s), 0, std::sinh(s), 0};
    EXPECT_NEAR(bilinear_form(x, x), -1, 1e-12 * std::cosh(s) * std::cosh(s));
  }
}

TEST(ProjectivePoint, NormalizedToQuadric) {
  ProjectivePoint4 p({-2, 0, 1, 0});
  EXPECT_NEAR(p.self_form(), -1, 1e-15);
  EXPECT_GT(p[0], 0);
}

TEST(AffineChart, Values) {
  ChartPoint c = affine_chart(ProjectivePoint4({2, 1, 1, 0}));
  EXPECT_DOUBLE_EQ(c.xbar1, 0.5);
  EXPECT_DOUBLE_EQ(c.xbar2, 0.5);
  EXPECT_DOUBLE_EQ(c.xbar3, 0.0);
  ChartPoint o = affine_chart(ProjectivePoint4({1, 0, 0, 0}));
  EXPECT_EQ(o.xbar1, 0);
  EXPECT_EQ(o.xbar2, 0);
  EXPECT_EQ(o.xbar3, 0);
  EXPECT_THROW(affine_chart(ProjectivePoint4({0, 1, 0, 0})), ChartMiss);
}

TEST(AffineChart, LiftRoundTrip) {
  Rng rng(4);
  for (int i = 0; i < 1000; ++i) {
    ChartPoint c{uniform(rng, -0.9, 0.9), uniform(rng, -0.6, 0.6), uniform(rng, -0.6, 0.6)};
    if (!c.inside()) continue;
    ProjectivePoint4 p = chart_lift(c);
    ASSERT_NEAR(p.self_form(), -1, 1e-12);
    ChartPoint back = affine_chart(p);
    ASSERT_NEAR(back.xbar1, c.xbar1, 1e-14);
    ASSERT_NEAR(back.xbar2, c.xbar2, 1e-14);
    ASSERT_NEAR(back.xbar3, c.xbar3, 1e-14);
  }
  EXPECT_THROW(chart_lift({0, 1.5, 0}), ChartMiss);
}

TEST(CausalType, TangentVectorsAtBasePoint) {
  ProjectivePoint4 p({1, 0, 0, 0});
  EXPECT_EQ(classify_vector(p, {0, 0, 1, 0}), CausalType::SpaceLike);
  EXPECT_EQ(classify_vector(p, {0, 1, 0, 0}), CausalType::TimeLike);
  EXPECT_EQ(classify_vector(p, {0, 1, 1, 0}), CausalType::LightLike);
  EXPECT_THROW(classify_vector(p, {1, 0, 0, 0}), NotTangent);
}

TEST(ChartLine, DiscIsSpaceLike) {
  EXPECT_EQ(classify_chart_line({0, 0.5, 0}, {0, -0.5, 0}), CausalType::SpaceLike);
}

TEST(ChartLine, VerticalIsTimeLike) {
  EXPECT_EQ(classify_chart_line({0, 0, 0}, {0.5, 0, 0}), CausalType::TimeLike);
}

TEST(ChartLine, TangentAtFortyFiveDegreesIsLightLike) {
  // Through a point just inside the boundary circle, direction tangent to the circle and
  // tilted 45 degrees upward: the direction is null for the chart quadric.
  ChartPoint a{0, 1 - 1e-9, 0};
  ChartPoint b{0.3, 1 - 1e-9, 0.3};
  EXPECT_EQ(classify_chart_line(a, b), CausalType::LightLike);
  EXPECT_NEAR(chart_line_discriminant(a, b), 0, 1e-12);
}

TEST(ChartLine, CoincidentPointsRejected) {
  EXPECT_THROW(classify_chart_line({0.1, 0.2, 0.3}, {0.1, 0.2, 0.3}), CoincidentPoints);
}

TEST(Cylinder, TimeZeroIsSlice) {
  H2Point x = H2Point::polar(1.3, 0.4);
  ChartPoint c = affine_chart(cylinder_map(x, 0));
  EXPECT_NEAR(c.xbar1, 0, 1e-15);
  EXPECT_NEAR(c.xbar2, x.klein()[0], 1e-15);
  EXPECT_NEAR(c.xbar3, x.klein()[1], 1e-15);
}

TEST(Cylinder, OriginAtQuarterTurn) {
  ChartPoint c = affine_chart(cylinder_map(H2Point(), M_PI / 4));
  EXPECT_NEAR(std::abs(c.xbar1), 1, 1e-15);
  EXPECT_NEAR(c.xbar1, height_to_chart(M_PI / 4, {0, 0}), 1e-15);
}

TEST(Cylinder, StaysOnQuadric) {
  Rng rng(6);
  for (int i = 0; i < 1000; ++i) {
    H2Point x = random_disc_point(rng, 3);
    ProjectivePoint4 p = cylinder_map(x, uniform(rng, 0, M_PI / 2 - 1e-3));
    ASSERT_NEAR(p.self_form(), -1, 1e-12);
  }
  EXPECT_THROW(cylinder_map(H2Point(), M_PI / 2), OutOfRange);
}

TEST(Cylinder, ChartHeightMatchesTime) {
  Rng rng(7);
  for (int i = 0; i < 1000; ++i) {
    H2Point x = random_disc_point(rng, 3);
    double t = uniform(rng, 0, 1.5);
    ChartPoint c = affine_chart(cylinder_map(x, t));
    Vec2 xb{c.xbar2, c.xbar3};
    ASSERT_NEAR(c.xbar1, height_to_chart(t, xb), 1e-12);
    ASSERT_NEAR(chart_to_height(c.xbar1, xb), t, 1e-10);
  }
}

TEST(Height, Values) {
  EXPECT_EQ(height_to_chart(0, {0.3, 0.2}), 0);
  EXPECT_NEAR(height_to_chart(M_PI / 4, {0, 0}), -1, 1e-15);
}

TEST(Height, ConstantIsHalfEllipsoid) {
  // -ubar = tan R sqrt(1 - |x|^2)  <=>  ubar^2 / tan^2 R + |x|^2 = 1.
  double R = 0.7, t = std::tan(R);
  Rng rng(8);
  for (int i = 0; i < 1000; ++i) {
    double r = std::sqrt(uniform01(rng)), a = uniform(rng, 0, 2 * M_PI);
    Vec2 x{r * std::cos(a), r * std::sin(a)};
    double ub = height_to_chart(R, x);
    ASSERT_LE(ub, 0);
    ASSERT_NEAR(ub * ub / (t * t) + r * r, 1, 1e-12);
  }
}

TEST(Ads3Properties, QuadricPreservation) { expect_property("quadric_preservation"); }
TEST(Ads3Properties, CylinderMetric) { expect_property("cylinder_metric"); }
TEST(Ads3Properties, ChartLines) { expect_property("chart_lines"); }
TEST(Ads3Properties, LightlikeLines) { expect_property("lightlike_lines"); }
TEST(Ads3Properties, HeightRoundTrip) { expect_property("height_roundtrip"); }
