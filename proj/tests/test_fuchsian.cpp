#include <gtest/gtest.h>

#include <complex>
#include <memory>

#include "adscurv/errors.hpp"
#include "adscurv/fuchsian.hpp"
#include "oracles.hpp"
#include "suite.hpp"

using namespace adscurv;

namespace {

using C = std::complex<double>;

C to_upper_half_plane(const H2Point& p) { return C(p.x2(), 1.0) / (p.x0() - p.x1()); }

Mobius random_element(Rng& rng) {
  double a = uniform(rng, -2, 2), b = uniform(rng, -2, 2), c = uniform(rng, -2, 2);
  double d = (1 + b * c) / (std::abs(a) < 0.1 ? 0.1 : a);
  if (std::abs(a) < 0.1) a = 0.1;
  return Mobius(a, b, c, d);
}

}  // namespace

TEST(Mobius, DeterminantNormalized) {
  Mobius m(2, 1, 1, 3);
  EXPECT_NEAR(m.det(), 1, 1e-15);
  EXPECT_THROW(Mobius(1, 2, 2, 1), OutOfRange);
}

TEST(Mobius, ActionMatchesUpperHalfPlane) {
  Rng rng(31);
  for (int i = 0; i < 1000; ++i) {
    Mobius m = random_element(rng);
    H2Point p = random_disc_point(rng, 2);
    C z = to_upper_half_plane(p);
    C w = (m.a() * z + m.b()) / (m.c() * z + m.d());
    ASSERT_LT(std::abs(to_upper_half_plane(m.apply(p)) - w), 1e-10 * (1 + std::abs(w)));
  }
}

TEST(Mobius, IsometryAndComposition) {
  Rng rng(32);
  for (int i = 0; i < 500; ++i) {
    Mobius m = random_element(rng), n = random_element(rng);
    H2Point p = random_disc_point(rng, 2), q = random_disc_point(rng, 2);
    ASSERT_NEAR(h2_distance(m.apply(p), m.apply(q)), h2_distance(p, q), 1e-9 * (1 + h2_distance(p, q)));
    H2Point a = (m * n).apply(p), b = m.apply(n.apply(p));
    ASSERT_LT(h2_distance(a, b), 1e-12 * a.x0());
    ASSERT_LT(h2_distance(m.inverse().apply(m.apply(p)), p), 1e-12 * m.apply(p).x0());
  }
}

TEST(TranslationLength, DiagonalAndConjugates) {
  double s = 1.7;
  Mobius diag(std::exp(s / 2), 0, 0, std::exp(-s / 2));
  EXPECT_NEAR(translation_length(diag), s, 1e-12);
  EXPECT_THROW(translation_length(Mobius()), NotHyperbolic);
  Rng rng(33);
  for (int i = 0; i < 200; ++i) {
    Mobius g = random_element(rng);
    ASSERT_NEAR(translation_length(g * diag * g.inverse()), s, 1e-12 * (1 + g.frobenius() * g.frobenius()));
  }
}

TEST(TranslationLength, EqualsMinimalDisplacement) {
  auto g = genus2_octagon_group();
  for (const Mobius& s : g->generators()) {
    double L = translation_length(s);
    double best = 1e300;
    for (int i = 0; i <= 400; ++i)
      for (int j = 0; j < 64; ++j) {
        H2Point x = H2Point::polar(2.0 * i / 400, 2 * M_PI * j / 64);
        best = std::min(best, h2_distance(x, s.apply(x)));
      }
    EXPECT_GE(best, L - 1e-10);
    EXPECT_LT(best - L, 1e-3);
  }
}

TEST(Octagon, AreaAnglesAndSides) {
  auto g = genus2_octagon_group();
  ASSERT_TRUE(g->has_polygon());
  EXPECT_EQ(g->genus(), 2);
  EXPECT_EQ(g->euler_characteristic(), -2);
  EXPECT_NEAR(g->area(), 4 * M_PI, 1e-10);
  const auto& P = g->polygon();
  ASSERT_EQ(P.size(), 8u);
  double angle_sum = 0;
  for (int k = 0; k < 8; ++k) {
    const H2Point &prev = P[(k + 7) % 8], &cur = P[k], &next = P[(k + 1) % 8];
    angle_sum += comparison_angle(h2_distance(cur, prev), h2_distance(cur, next), h2_distance(prev, next));
  }
  EXPECT_NEAR(angle_sum, 2 * M_PI, 1e-10);
}

TEST(Octagon, SideLengthByReconstruction) {
  auto g = genus2_octagon_group();
  // cosh R = cot^2(pi/8) for the regular octagon with interior angles pi/4.
  double cot = 1 / std::tan(M_PI / 8);
  double R = std::acosh(cot * cot);
  EXPECT_NEAR(g->circumradius(), R, 1e-12);
  for (int k = 0; k < 8; ++k) {
    double side = oracle::disc_distance(oracle::disc_polar(R, M_PI * k / 4), oracle::disc_polar(R, M_PI * (k + 1) / 4));
    EXPECT_NEAR(side, g->side_length(), 1e-10);
  }
}

TEST(Octagon, RelatorAndHyperbolicGenerators) {
  auto g = genus2_octagon_group();
  EXPECT_LT(g->relator_residual(), 1e-8);
  for (const auto& s : g->generators()) EXPECT_GT(s.abs_trace(), 2 + 1e-10);
  std::vector<Mobius> gens = g->generators();
  gens[0] = Mobius();
  EXPECT_THROW(FuchsianGroup(gens, 2, g->relator()), NotHyperbolic);
}

TEST(Octagon, SidePairingsGlueAdjacentTiles) {
  auto g = genus2_octagon_group();
  const auto& P = g->polygon();
  for (int j = 0; j < 8; ++j) {
    // The neighbouring tile shares exactly one side with the polygon, the one facing angle 2 pi j / 8.
    const Mobius& s = g->side_neighbor(j);
    std::vector<int> shared;
    for (int k = 0; k < 8; ++k)
      for (int m = 0; m < 8; ++m)
        if (h2_distance(s.apply(P[k]), P[m]) < 1e-9) shared.push_back(m);
    ASSERT_EQ(shared.size(), 2u) << j;
    H2Point mid = midpoint(P[shared[0]], P[shared[1]]);
    double facing = std::atan2(mid.x2(), mid.x1());
    EXPECT_NEAR(std::remainder(facing - 2 * M_PI * j / 8, 2 * M_PI), 0, 1e-9) << j;
    EXPECT_FALSE(g->in_polygon(s.apply(H2Point())));
    EXPECT_NEAR(h2_distance(H2Point(), s.apply(H2Point())), 2 * g->inradius(), 1e-9);
  }
}

TEST(Ball, CountsAndClosure) {
  auto g = genus2_octagon_group();
  EXPECT_EQ(g->ball(0).size(), 1u);
  EXPECT_EQ(g->ball(1).size(), 9u);
  EXPECT_EQ(g->ball(2).size(), 65u);
  EXPECT_EQ(g->ball(3).size(), 457u);
  EXPECT_THROW(g->ball(g->max_ball_radius() + 1), BallTooLarge);
  ElementSet set;
  for (const auto& m : g->ball(3)) set.insert(m);
  for (const auto& m : g->ball(3)) EXPECT_GE(set.find(m.inverse()), 0);
}

TEST(Ball, Deterministic) {
  auto a = genus2_octagon_group(), b = genus2_octagon_group();
  const auto &ba = a->ball(3), &bb = b->ball(3);
  ASSERT_EQ(ba.size(), bb.size());
  for (std::size_t i = 0; i < ba.size(); ++i) ASSERT_EQ(ba[i].so21(), bb[i].so21());
}

TEST(Systole, MatchesClosedForm) {
  // Shortest closed geodesic of the regular genus-2 octagon surface: cosh(L/2) = 1 + sqrt 2.
  auto g = genus2_octagon_group();
  double L = 2 * std::acosh(1 + std::sqrt(2.0));
  EXPECT_NEAR(g->systole(6), L, 1e-8);
  EXPECT_NEAR(L, 3.05714183896200, 1e-13);
}

TEST(Reduce, LandsInPolygon) {
  auto g = genus2_octagon_group();
  Rng rng(34);
  for (int i = 0; i < 500; ++i) {
    H2Point p = random_disc_point(rng, 4);
    Mobius s;
    H2Point r = g->reduce(p, &s);
    ASSERT_TRUE(g->in_polygon(r, 1e-9));
    ASSERT_LT(h2_distance(s.apply(p), r), 1e-8);
  }
}

TEST(Quotient, HyperbolicMatchesBruteForce) {
  auto g = genus2_octagon_group();
  HyperbolicQuotient q(g);
  Rng rng(35);
  for (int i = 0; i < 50; ++i) {
    H2Point x = random_polygon_point(*g, rng), y = random_polygon_point(*g, rng);
    double best = 1e300;
    for (const auto& s : g->ball(5)) best = std::min(best, h2_distance(x, s.apply(y)));
    ASSERT_NEAR(q.distance(x, y), best, 1e-10);
    ASSERT_NEAR(q.distance(x, y), q.distance(y, x), 1e-10);
  }
  EXPECT_EQ(q.distance(H2Point(), H2Point()), 0);
  HyperbolicQuotient half(g, 0.5);
  H2Point x = H2Point::polar(0.3, 1), y = H2Point::polar(0.9, -2);
  EXPECT_NEAR(half.distance(x, y), 0.5 * q.distance(x, y), 1e-14);
}

TEST(Quotient, FlatMeshDistanceMatchesHyperbolic) {
  auto g = genus2_octagon_group();
  double h = 0.15;
  auto mesh = std::make_shared<GeodesicMesh>(tiled_mesh(*g, 1, h, 6));
  FuchsianCConvex fc{constant_function(0), g};
  InducedDistanceField field(fc.u, mesh);
  HyperbolicQuotient q(g);
  Rng rng(36);
  int evaluated = 0;
  for (int i = 0; i < 20; ++i) {
    H2Point x = random_polygon_point(*g, rng), y = random_polygon_point(*g, rng);
    double d;
    try {
      d = quotient_distance(fc, field, x, y, 1, 1.0);
    } catch (const BallInsufficient&) {
      continue;
    }
    ++evaluated;
    ASSERT_GE(d, q.distance(x, y) - 1e-9);
    ASSERT_LE(d, q.distance(x, y) + 6 * h);
  }
  EXPECT_GE(evaluated, 5);
  H2Point x = H2Point::polar(0.2, 1.0);
  EXPECT_LE(quotient_distance(fc, field, x, x, 1, 1.0), 2 * h);
}

TEST(Invariance, ConstantPassesBumpFails) {
  auto g = genus2_octagon_group();
  Report c = invariance_check({constant_function(0.7), g}, 500, 1);
  EXPECT_TRUE(c.pass);
  EXPECT_EQ(c.value("sup_violation"), 0);
  auto bump = callback_function([](const H2Point& y) { return 0.5 * std::exp(-h2_distance(y, H2Point())); }, 0.5, "bump");
  Report b = invariance_check({bump, g}, 500, 1);
  EXPECT_FALSE(b.pass);
  EXPECT_GT(b.value("sup_violation"), 0.1);
}

TEST(Invariance, OrbitEnvelopeTruncation) {
  auto g = genus2_octagon_group();
  std::vector<OrbitSeed> seeds{{H2Point::polar(0.4, 0.3), 0.5}};
  double region = envelope_region(*g);
  auto complete = orbit_envelope_complete(*g, seeds, 1.2, region);
  Report full = invariance_check({complete, g}, 1000, 2);
  EXPECT_TRUE(full.pass) << full.to_json().dump();
  // Truncated envelopes agree with the complete one once the ball reaches every active translate.
  auto r3 = orbit_envelope(*g, seeds, 3, 1.2, region), r4 = orbit_envelope(*g, seeds, 4, 1.2, region);
  Rng rng(37);
  double gap = 0;
  for (int i = 0; i < 500; ++i) {
    H2Point x = random_polygon_point(*g, rng);
    gap = std::max(gap, std::abs(r3->value(x) - r4->value(x)));
    ASSERT_NEAR(r4->value(x), complete->value(x), 1e-12);
  }
  RecordProperty("truncation_gap_r3_r4", std::to_string(gap));
}

TEST(FuchsianProperties, TraceInvariance) { expect_property("trace_invariance"); }
TEST(FuchsianProperties, SystoleDiscreteness) { expect_property("systole_discreteness"); }
TEST(FuchsianProperties, QuotientDistance) { expect_property("quotient_distance", {1}); }
TEST(FuchsianProperties, BoundedHeight) { expect_property("bounded_height"); }
TEST(FuchsianProperties, EnvelopeInvariance) { expect_property("envelope_invariance", {1}); }
