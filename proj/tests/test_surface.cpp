#include <gtest/gtest.h>

#include <memory>

#include "adscurv/ads3.hpp"
#include "adscurv/errors.hpp"
#include "adscurv/smoothing.hpp"
#include "adscurv/surface.hpp"
#include "oracles.hpp"
#include "suite.hpp"

using namespace adscurv;

namespace {

// Trapezoid-midpoint oracle for the Lorentzian length: sum of sqrt(cos^2(u) ds^2 - du^2)
// over n uniform steps per segment.
double fine_length(const CConvexFunction& u, const H2Polyline& c, int n) {
  double total = 0;
  for (std::size_t i = 0; i < c.segments(); ++i) {
    double L = c.segment_length(i), ds = L / n;
    double prev = u.value(c.at(i, 0));
    for (int k = 1; k <= n; ++k) {
      double cur = u.value(c.at(i, k * ds));
      double um = u.value(c.at(i, (k - 0.5) * ds));
      double cm = std::cos(um), du = cur - prev;
      total += std::sqrt(std::max(0.0, cm * cm * ds * ds - du * du));
      prev = cur;
    }
  }
  return total;
}

std::shared_ptr<const GeodesicMesh> small_mesh(double h) {
  return std::make_shared<GeodesicMesh>(GeodesicMesh::regular_polygon(8, 1.0, h));
}

}  // namespace

TEST(CurveLength, FlatGeodesic) {
  H2Polyline c({H2Point(), H2Point::polar(1, 0.3)});
  EXPECT_NEAR(curve_length(*constant_function(0), c), 1, 1e-14);
}

TEST(CurveLength, ConstantScales) {
  H2Polyline c({H2Point::polar(0.5, 2), H2Point::polar(1, 0.3), H2Point::polar(2, -1)});
  double R = 0.9;
  EXPECT_NEAR(curve_length(*constant_function(R), c), std::cos(R) * c.length(), 1e-13);
}

TEST(CurveLength, BoundedByHyperbolicLength) {
  Rng rng(11);
  auto cone = build_cone(-0.8, {0.1, -0.2});
  for (int i = 0; i < 200; ++i) {
    H2Polyline c({random_disc_point(rng, 2), random_disc_point(rng, 2), random_disc_point(rng, 2)});
    ASSERT_LE(curve_length(*cone, c), c.length() + 1e-12);
  }
}

TEST(Cone, MatchesClosedForm) {
  // Straight chart cone over the unit circle: u(d) = arctan(|h0| e^{-d}).
  double h0 = -0.7;
  auto cone = build_cone(h0);
  for (double d : {0.0, 0.1, 0.5, 1.0, 2.0, 4.0})
    EXPECT_NEAR(cone->value(H2Point::polar(d, 0.7)), std::atan(-h0 * std::exp(-d)), 1e-14) << d;
}

TEST(CurveLength, ConeDiameterMatchesFineOracle) {
  auto cone = build_cone(-0.7);
  H2Polyline c({H2Point::polar(1.5, M_PI), H2Point(), H2Point::polar(1.5, 0)});
  double oracle_len = fine_length(*cone, c, 20000);
  EXPECT_NEAR(curve_length(*cone, c), oracle_len, 1e-6);
}

TEST(CurveLength, SteepCallbackIsNotSpacelike) {
  // u changes faster than cos u allows along the x1 axis.
  auto steep = callback_function([](const H2Point& y) { return 0.7 + 0.6 * std::tanh(5 * y.x1()); }, 1.4, "steep");
  H2Polyline c({H2Point::polar(0.3, M_PI), H2Point::polar(0.3, 0)});
  EXPECT_THROW(curve_length(*steep, c), NonSpacelikeSegment);
}

TEST(Spacelike, FlatAndConstant) {
  Report flat = spacelike_check(*constant_function(0), 500, 1);
  EXPECT_TRUE(flat.pass);
  EXPECT_NEAR(flat.value("min_ratio"), 1, 1e-12);
  Report c = spacelike_check(*constant_function(0.6), 500, 1);
  EXPECT_NEAR(c.value("min_ratio"), std::cos(0.6), 1e-12);
}

TEST(Spacelike, SmoothedConeBaseline) {
  auto u = smooth_cone(*build_cone(-0.5), 0.2);
  Report r = spacelike_check(*u, 2000, 1);
  EXPECT_TRUE(r.pass);
  EXPECT_NEAR(r.value("min_ratio"), 0.849355588133805, 1e-6);
  EXPECT_EQ(spacelike_check(*u, 2000, 1).value("min_ratio"), r.value("min_ratio"));
}

TEST(Envelope, SupportVectorValidation) {
  EXPECT_THROW(support_vector(-0.5, 0.6, 0), OutOfRange);
  Vec3 m = support_vector(-1, 0.2, 0.3);
  EXPECT_GT(m.x0, 0);
  EXPECT_LT(minkowski(m, m), 0);
}

TEST(Envelope, ValueIsChartPlaneMax) {
  // Planes a0 + a1 x + a2 y, plus the half ellipsoid of height R.
  std::vector<std::array<double, 3>> planes = {{-1, 0.2, 0.3}, {-0.8, -0.5, 0.1}, {-1.5, 0, -1}};
  std::vector<Vec3> ms;
  for (auto& p : planes) ms.push_back(support_vector(p[0], p[1], p[2]));
  double R = 0.8;
  SupportEnvelope u(ms, R);
  Rng rng(12);
  for (int i = 0; i < 2000; ++i) {
    H2Point y = random_disc_point(rng, 3);
    Vec2 k = y.klein();
    double ubar = height_to_chart(R, k);
    for (auto& p : planes) ubar = std::max(ubar, p[0] + p[1] * k[0] + p[2] * k[1]);
    ASSERT_NEAR(u.chart_height(k), ubar, 1e-12);
    ASSERT_NEAR(u.value(y), chart_to_height(ubar, k), 1e-12);
    ASSERT_GE(u.value(y), 0);
    ASSERT_LE(u.value(y), R);
  }
}

TEST(Envelope, GradientMatchesDifferences) {
  SupportEnvelope u({support_vector(-1, 0.2, 0.3), support_vector(-0.8, -0.5, 0.1)}, 1.2);
  Rng rng(13);
  for (int i = 0; i < 500; ++i) {
    H2Point y = random_disc_point(rng, 2);
    Vec3 g;
    ASSERT_TRUE(u.gradient(y, g));
    Vec3 v = unit_normal(y, unit_tangent(y, H2Point::polar(3, 0.1)));
    double fd = (u.value(exp_map(y, v, 1e-6)) - u.value(exp_map(y, v, -1e-6))) / 2e-6;
    ASSERT_NEAR(minkowski(g, v), fd, 1e-6);
  }
}

TEST(Envelope, AuditPasses) {
  SupportEnvelope u({support_vector(-1, 0.2, 0.3), support_vector(-0.8, -0.5, 0.1)}, 1.2);
  Report r = cconvex_audit(u, 2000, 3);
  EXPECT_TRUE(r.pass) << r.to_json().dump();
}

TEST(Mesh, EdgeLengthsAndCovering) {
  auto mesh = small_mesh(0.1);
  ASSERT_TRUE(mesh->connected());
  EXPECT_LE(mesh->h, 0.1);
  for (std::size_t e = 0; e < mesh->edges.size(); ++e) {
    auto [a, b] = mesh->edges[e];
    ASSERT_NEAR(mesh->lengths[e], h2_distance(mesh->vertices[a], mesh->vertices[b]), 1e-12);
  }
  // Points of the inscribed disc are within h of a vertex.
  double inr = std::atanh(std::tanh(1.0) * std::cos(M_PI / 8));
  Rng rng(14);
  for (int i = 0; i < 2000; ++i) {
    H2Point x = random_disc_point(rng, inr);
    int v = mesh->nearest_vertex(x);
    ASSERT_LE(h2_distance(x, mesh->vertices[v]), mesh->h + 1e-12);
  }
}

TEST(Mesh, NearestVertexIsBruteForceMinimum) {
  auto mesh = small_mesh(0.15);
  Rng rng(15);
  for (int i = 0; i < 300; ++i) {
    H2Point x = random_disc_point(rng, 0.9);
    double best = 1e300;
    for (const auto& v : mesh->vertices) best = std::min(best, h2_distance(x, v));
    ASSERT_NEAR(h2_distance(x, mesh->vertices[mesh->nearest_vertex(x)]), best, 1e-14);
  }
}

TEST(Mesh, DisconnectedRejected) {
  auto mesh = std::make_shared<GeodesicMesh>();
  mesh->vertices = {H2Point(), H2Point::polar(1, 0)};
  mesh->offsets = {0, 0, 0};
  EXPECT_FALSE(mesh->connected());
  EXPECT_THROW(InducedDistanceField(constant_function(0), mesh), DisconnectedMesh);
}

TEST(InducedDistance, PseudoDistanceAxioms) {
  auto mesh = small_mesh(0.15);
  InducedDistanceField f(build_cone(-0.6), mesh);
  int V = static_cast<int>(mesh->vertices.size());
  Rng rng(16);
  for (int i = 0; i < 300; ++i) {
    int a = rng() % V, b = rng() % V, c = rng() % V;
    ASSERT_EQ(f.distance(a, a), 0);
    ASSERT_EQ(f.distance(a, b), f.distance(b, a));
    ASSERT_LE(f.distance(a, c), f.distance(a, b) + f.distance(b, c) + 1e-9);
  }
}

TEST(InducedDistance, FlatMatchesHyperbolic) {
  double h = 0.1;
  auto mesh = small_mesh(h);
  InducedDistanceField f(constant_function(0), mesh);
  int V = static_cast<int>(mesh->vertices.size());
  Rng rng(17);
  double worst = 0;
  for (int i = 0; i < 100; ++i) {
    int a = rng() % V, b = rng() % V;
    double dh = h2_distance(mesh->vertices[a], mesh->vertices[b]);
    double d = f.distance(a, b);
    ASSERT_GE(d, dh - 1e-12);
    ASSERT_LE(d, dh + 5 * h);
    if (dh > 0.3) worst = std::max(worst, (d - dh) / dh);
  }
  EXPECT_LT(worst, 1e-2);
}

TEST(InducedDistance, ConstantScalesExactly) {
  auto mesh = small_mesh(0.15);
  InducedDistanceField flat(constant_function(0), mesh), scaled(constant_function(M_PI / 6), mesh);
  int V = static_cast<int>(mesh->vertices.size());
  for (int a = 0; a < V; a += 7)
    for (int b = 0; b < V; b += 11)
      ASSERT_NEAR(scaled.distance(a, b), std::cos(M_PI / 6) * flat.distance(a, b), 1e-12 * (1 + flat.distance(a, b)));
}

TEST(InducedDistance, RefinementChangeIsFirstOrder) {
  auto coarse = small_mesh(0.2), fine = small_mesh(0.1);
  auto cone = build_cone(-0.6);
  InducedDistanceField fc(cone, coarse), ff(cone, fine);
  H2Point p = H2Point::polar(0.8, 0.2), q = H2Point::polar(0.8, M_PI + 0.2);
  double dc = fc.point_distance(p, q), df = ff.point_distance(p, q);
  double C = std::abs(dc - df) / 0.2;
  RecordProperty("refinement_constant", std::to_string(C));
  EXPECT_LT(C, 5.0);
  EXPECT_LE(df, dc + 1e-9 + 5 * 0.1);
}

TEST(LengthConvergence, ConstantSequences) {
  H2Polyline c({H2Point::polar(1, 0), H2Point::polar(1, 2)});
  double R = 1.0;
  std::vector<FunctionPtr> seq;
  for (int n = 1; n <= 64; ++n) seq.push_back(constant_function(R * (1 - 1.0 / n)));
  Report r = length_convergence_check(seq, *constant_function(R), c, 1e-1, R);
  const auto& diffs = r.detail["differences"];
  for (int n = 1; n <= 64; ++n)
    ASSERT_NEAR(diffs[n - 1].get<double>(), std::abs(std::cos(R * (1 - 1.0 / n)) - std::cos(R)) * c.length(), 1e-13);
  EXPECT_TRUE(r.pass);

  std::vector<FunctionPtr> same(5, constant_function(0.4));
  Report s = length_convergence_check(same, *constant_function(0.4), c, 1e-12, 0.4);
  EXPECT_TRUE(s.pass);
  EXPECT_EQ(s.value("last_difference"), 0);
}

TEST(LengthConvergence, BoundViolation) {
  H2Polyline c({H2Point::polar(1, 0), H2Point::polar(1, 2)});
  std::vector<FunctionPtr> seq{constant_function(0.5), constant_function(0.9)};
  EXPECT_THROW(length_convergence_check(seq, *constant_function(0.5), c, 1, 0.6), NotUniformlyBounded);
  EXPECT_THROW(length_convergence_check(seq, *constant_function(0.5), c, 1, M_PI / 2), NotUniformlyBounded);
}

TEST(SurfaceProperties, DistanceBounds) { expect_property("distance_bounds", {1}); }
TEST(SurfaceProperties, SpacelikeFuzz) { expect_property("spacelike_fuzz"); }
TEST(SurfaceProperties, PseudoDistance) { expect_property("pseudo_distance", {1}); }
TEST(SurfaceProperties, EnvelopeLocality) { expect_property("envelope_locality"); }
