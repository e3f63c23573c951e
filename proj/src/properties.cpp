#include <algorithm>
#include <cmath>
#include <limits>

#include "adscurv/ads3.hpp"
#include "adscurv/conemetric.hpp"
#include "adscurv/errors.hpp"
#include "adscurv/pipeline.hpp"
#include "adscurv/smoothing.hpp"

namespace adscurv {

using nlohmann::json;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Report make(const std::string& name, const std::string& anchor) {
  Report r;
  r.name = name;
  r.anchor = anchor;
  return r;
}

// Side lengths of a random nondegenerate triangle with corners in a disc of radius 3.
std::array<double, 3> random_sides(Rng& rng) {
  for (;;) {
    H2Point p = random_disc_point(rng, 3), q = random_disc_point(rng, 3), s = random_disc_point(rng, 3);
    double a = h2_distance(q, s), b = h2_distance(p, s), c = h2_distance(p, q);
    double per = a + b + c;
    if (std::min({a, b, c}) > 1e-3 && std::min({b + c - a, a + c - b, a + b - c}) > 1e-6 * per)
      return {a, b, c};
  }
}

Report cosine_law(std::uint64_t seed) {
  Report r = make("cosine_law", "comparison triangles satisfy the hyperbolic cosine law cyclically");
  Rng rng(seed);
  double worst = 0;
  for (int i = 0; i < 20000; ++i) {
    auto s = random_sides(rng);
    worst = std::max(worst, comparison_triangle(s[2], s[1], s[0]).cosine_residual());
  }
  r.values["max_residual"] = worst;
  r.tolerances["residual"] = 1e-10;
  r.pass = worst < 1e-10;
  return r;
}

Report area_excess(std::uint64_t seed) {
  Report r = make("area_excess", "hyperbolic triangles have angle sum below pi and area = -excess");
  Rng rng(seed);
  double worst = 0, min_area = kInf;
  for (int i = 0; i < 20000; ++i) {
    auto s = random_sides(rng);
    TriangleShape t = comparison_triangle(s[2], s[1], s[0]);
    double area = triangle_area(t);
    min_area = std::min(min_area, area);
    worst = std::max(worst, std::abs(area + t.excess()));
  }
  r.values["min_area"] = min_area;
  r.values["max_identity_error"] = worst;
  r.tolerances["identity"] = 1e-10;
  r.pass = min_area > 0 && worst < 1e-10;
  return r;
}

Report fkepsi(std::uint64_t seed) {
  Report r = make("fkepsi", "isosceles chord l with legs x <= eps and apex theta satisfies l <= sinh(eps) theta");
  Rng rng(seed);
  int violations = 0;
  double worst = -kInf;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    double eps = uniform(rng, 1e-4, 3.0);
    double x = eps * uniform01(rng);
    if (x <= 0) continue;
    double theta = M_PI * uniform01(rng);
    if (theta <= 0) continue;
    double gap = isosceles_chord(x, theta) - std::sinh(eps) * theta;
    worst = std::max(worst, gap);
    violations += gap > 1e-12;
  }
  r.values["samples"] = n;
  r.values["violations"] = violations;
  r.values["max_gap"] = worst;
  r.tolerances["gap"] = 1e-12;
  r.pass = violations == 0;
  return r;
}

Report dual_cosine_roundtrip(std::uint64_t seed) {
  Report r = make("dual_cosine_roundtrip", "sides recovered from the angles by the dual cosine law");
  Rng rng(seed);
  double worst = 0;
  for (int i = 0; i < 20000; ++i) {
    auto s = random_sides(rng);
    TriangleShape t = comparison_triangle(s[2], s[1], s[0]);
    if (std::min({t.alpha, t.beta, t.gamma}) < 1e-3) continue;
    worst = std::max({worst, std::abs(side_from_angles(t.alpha, t.beta, t.gamma) - t.a),
                      std::abs(side_from_angles(t.beta, t.gamma, t.alpha) - t.b),
                      std::abs(side_from_angles(t.gamma, t.alpha, t.beta) - t.c)});
  }
  r.values["max_side_error"] = worst;
  r.tolerances["side"] = 1e-9;
  r.pass = worst < 1e-9;
  return r;
}

Report h2_triangle_inequality(std::uint64_t seed) {
  Report r = make("h2_triangle_inequality", "h2_distance satisfies the triangle inequality");
  Rng rng(seed);
  double worst = -kInf;
  for (int i = 0; i < 20000; ++i) {
    H2Point p = random_disc_point(rng, 4), q = random_disc_point(rng, 4), s = random_disc_point(rng, 4);
    worst = std::max(worst, h2_distance(p, s) - h2_distance(p, q) - h2_distance(q, s));
  }
  r.values["max_violation"] = worst;
  r.tolerances["violation"] = 1e-12;
  r.pass = worst <= 1e-12;
  return r;
}

Report quadric_preservation(std::uint64_t seed) {
  Report r = make("quadric_preservation", "constructed points and cylinder images satisfy b(x,x) = -1");
  Rng rng(seed);
  double worst = 0;
  for (int i = 0; i < 20000; ++i) {
    H2Point x = random_disc_point(rng, 3);
    double t = uniform(rng, 0, M_PI / 2 - 1e-3);
    worst = std::max(worst, std::abs(cylinder_map(x, t).self_form() + 1));
    ChartPoint c{uniform(rng, -2, 2), uniform(rng, -1, 1), uniform(rng, -1, 1)};
    if (c.inside()) worst = std::max(worst, std::abs(chart_lift(c).self_form() + 1));
  }
  r.values["max_residual"] = worst;
  r.tolerances["residual"] = 1e-12;
  r.pass = worst < 1e-12;
  return r;
}

Report cylinder_metric(std::uint64_t seed) {
  Report r = make("cylinder_metric", "the cylinder map pulls the AdS metric back to cos^2(t) g_H2 - dt^2");
  Rng rng(seed);
  const double h = 1e-4;
  double worst = 0;
  for (int i = 0; i < 500; ++i) {
    double y1 = uniform(rng, -1.5, 1.5), y2 = uniform(rng, -1.5, 1.5), t = uniform(rng, 0.01, 1.4);
    auto map = [&](double a, double b, double s) { return cylinder_map(H2Point::from_spatial(a, b), s).coords(); };
    auto diff = [&](int k) {
      Vec4 p, m;
      if (k == 0) p = map(y1 + h, y2, t), m = map(y1 - h, y2, t);
      if (k == 1) p = map(y1, y2 + h, t), m = map(y1, y2 - h, t);
      if (k == 2) p = map(y1, y2, t + h), m = map(y1, y2, t - h);
      Vec4 d;
      for (int c = 0; c < 4; ++c) d[c] = (p[c] - m[c]) / (2 * h);
      return d;
    };
    Vec4 d[3] = {diff(0), diff(1), diff(2)};
    double w = 1 + y1 * y1 + y2 * y2, y[2] = {y1, y2};
    double c2 = std::cos(t) * std::cos(t);
    for (int a = 0; a < 3; ++a) {
      for (int b = a; b < 3; ++b) {
        double expect;
        if (a == 2 && b == 2) expect = -1;
        else if (b == 2) expect = 0;
        else expect = c2 * ((a == b ? 1.0 : 0.0) - y[a] * y[b] / w);
        worst = std::max(worst, std::abs(bilinear_form(d[a], d[b]) - expect));
      }
    }
  }
  r.values["max_error"] = worst;
  r.values["step"] = h;
  r.tolerances["error"] = 2e-6;
  r.pass = worst < 2e-6;
  return r;
}

// Random chart segment with both ends inside the hyperboloid.
std::pair<ChartPoint, ChartPoint> random_chart_segment(Rng& rng) {
  for (;;) {
    ChartPoint a{uniform(rng, -2, 2), uniform(rng, -2, 2), uniform(rng, -2, 2)};
    ChartPoint b{uniform(rng, -2, 2), uniform(rng, -2, 2), uniform(rng, -2, 2)};
    if (a.inside() && b.inside()) return {a, b};
  }
}

// Point of the line through a, b on the slice xbar1 = 0, if the line is not horizontal.
bool disc_crossing(const ChartPoint& a, const ChartPoint& b, double& radius2) {
  double d1 = b.xbar1 - a.xbar1;
  if (d1 == 0) return false;
  double s = -a.xbar1 / d1;
  double x2 = a.xbar2 + s * (b.xbar2 - a.xbar2), x3 = a.xbar3 + s * (b.xbar3 - a.xbar3);
  radius2 = x2 * x2 + x3 * x3;
  return true;
}

Report chart_lines(std::uint64_t seed) {
  Report r = make("chart_lines",
                  "chart lines are classified by their boundary intersections; time-like lines meet the disc");
  Rng rng(seed);
  int inconsistent = 0, timelike = 0, missed = 0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    auto [a, b] = random_chart_segment(rng);
    CausalType c = classify_chart_line(a, b);
    // Gram determinant of the homogeneous points (1, a), (1, b) in extended precision.
    using L = long double;
    L P[4] = {1, a.xbar1, a.xbar2, a.xbar3}, Q[4] = {1, b.xbar1, b.xbar2, b.xbar3};
    auto form = [](const L* x, const L* y) { return -x[0] * y[0] - x[1] * y[1] + x[2] * y[2] + x[3] * y[3]; };
    L pp = form(P, P), qq = form(Q, Q), pq = form(P, Q);
    L disc = pq * pq - pp * qq;
    // Threshold in the affine basis (1, a), (0, b - a).
    L d1 = b.xbar1 - a.xbar1, d2 = b.xbar2 - a.xbar2, d3 = b.xbar3 - a.xbar3;
    L A = -d1 * d1 + d2 * d2 + d3 * d3, B = pq - pp, C = pp;
    L tau = 1e-10L * (B * B + std::abs(A * C));
    CausalType expect = disc > tau ? CausalType::SpaceLike
                                   : (disc < -tau ? CausalType::TimeLike : CausalType::LightLike);
    inconsistent += c != expect;
    if (c == CausalType::TimeLike) {
      ++timelike;
      double r2;
      if (!disc_crossing(a, b, r2) || !(r2 < 1)) ++missed;
    }
  }
  r.values["lines"] = n;
  r.values["inconsistent"] = inconsistent;
  r.values["timelike"] = timelike;
  r.values["timelike_missing_disc"] = missed;
  r.tolerances["discriminant"] = 1e-10;
  r.pass = inconsistent == 0 && missed == 0 && timelike > 0;
  return r;
}

Report lightlike_lines(std::uint64_t seed) {
  Report r = make("lightlike_lines", "light-like chart lines avoiding the disc boundary meet the disc");
  Rng rng(seed);
  int misclassified = 0, missed = 0, n = 0;
  while (n < 5000) {
    double q1 = uniform(rng, -2, 2), phi = uniform(rng, 0, 2 * M_PI);
    if (std::abs(q1) < 1e-3) continue;
    double rr = std::sqrt(1 + q1 * q1);
    double q[3] = {q1, rr * std::cos(phi), rr * std::sin(phi)};
    // Tangent plane at q: -q1 d1 + q2 d2 + q3 d3 = 0; keep directions inside the cone.
    double d1 = 1, w = uniform(rng, -1, 1);
    double t2 = -q[2], t3 = q[1];  // horizontal tangent
    double n2 = q[1] * q1 / (rr * rr), n3 = q[2] * q1 / (rr * rr);  // lifts d1 = 1 into the plane
    double d[3] = {d1, n2 + w * t2 / rr, n3 + w * t3 / rr};
    double Q = -d[0] * d[0] + d[1] * d[1] + d[2] * d[2];
    if (!(Q < -1e-3)) continue;
    ++n;
    double s0 = uniform(rng, -0.5, -0.1), s1 = uniform(rng, 0.1, 0.5);
    ChartPoint a{q[0] + s0 * d[0], q[1] + s0 * d[1], q[2] + s0 * d[2]};
    ChartPoint b{q[0] + s1 * d[0], q[1] + s1 * d[1], q[2] + s1 * d[2]};
    misclassified += classify_chart_line(a, b) != CausalType::LightLike;
    double r2;
    if (!disc_crossing(a, b, r2) || !(r2 < 1)) ++missed;
  }
  r.values["lines"] = n;
  r.values["misclassified"] = misclassified;
  r.values["missing_disc"] = missed;
  r.pass = misclassified == 0 && missed == 0;
  return r;
}

Report height_roundtrip(std::uint64_t seed) {
  Report r = make("height_roundtrip", "chart_to_height inverts height_to_chart");
  Rng rng(seed);
  double worst = 0;
  for (int i = 0; i < 20000; ++i) {
    double u = uniform(rng, 0, M_PI / 2 - 1e-6);
    double rad = std::sqrt(uniform01(rng)) * 0.999, ang = uniform(rng, 0, 2 * M_PI);
    Vec2 x{rad * std::cos(ang), rad * std::sin(ang)};
    worst = std::max(worst, std::abs(chart_to_height(height_to_chart(u, x), x) - u));
  }
  r.values["max_error"] = worst;
  r.tolerances["error"] = 1e-12;
  r.pass = worst < 1e-12;
  return r;
}

// Envelope on a coarse octagon mesh shared by the surface and fuchsian checks.
struct EnvelopeSetup {
  GroupPtr group;
  FuchsianCConvex fc;
  std::shared_ptr<const GeodesicMesh> mesh;
  std::shared_ptr<InducedDistanceField> field;
  double K;
};

EnvelopeSetup envelope_setup(std::uint64_t seed, double h) {
  EnvelopeSetup s;
  s.group = genus2_octagon_group();
  s.fc = random_orbit_envelope(s.group, seed, envelope_region(*s.group));
  s.mesh = std::make_shared<GeodesicMesh>(GeodesicMesh::regular_polygon(8, s.group->circumradius(), h, 8));
  s.field = std::make_shared<InducedDistanceField>(s.fc.u, s.mesh);
  auto sampler = [&](Rng& rng) { return random_polygon_point(*s.group, rng); };
  s.K = spacelike_check(*s.fc.u, 2000, seed, sampler).value("min_ratio");
  return s;
}

Report distance_bounds(std::uint64_t seed) {
  Report r = make("distance_bounds", "K d_H2 - 5h <= d_u <= d_H2 on mesh pairs of an orbit envelope");
  EnvelopeSetup s = envelope_setup(seed, 0.1);
  auto pairs = sample_vertex_pairs(static_cast<int>(s.mesh->vertices.size()), 10, 20, seed);
  Report up = upper_bound_check(*s.field, pairs, 0.0);
  Report lo = lower_bound_check(*s.field, pairs, s.K, 5 * s.mesh->h);
  r.values["K"] = s.K;
  r.values["max_excess_over_dH"] = up.value("max_excess");
  r.values["min_lower_margin"] = lo.value("min_margin");
  r.values["pairs"] = static_cast<double>(pairs.size());
  r.tolerances["lower_slack"] = 5 * s.mesh->h;
  r.pass = up.pass && lo.pass && s.K > 0;
  return r;
}

Report spacelike_fuzz(std::uint64_t seed) {
  Report r = make("spacelike_fuzz", "curve lengths on random convex envelopes never leave the space-like regime");
  Rng rng(seed);
  int failures = 0, curves = 0;
  for (int k = 0; k < 40; ++k) {
    double R = uniform(rng, 0.2, 1.4);
    std::vector<Vec3> supports;
    int m = 1 + static_cast<int>(rng() % 6);
    for (int i = 0; i < m; ++i) {
      H2Point p = random_disc_point(rng, 2.0);
      supports.push_back(uniform(rng, 0.2, 2.0) * p.vec());
    }
    SupportEnvelope u(supports, R);
    for (int c = 0; c < 10; ++c) {
      std::vector<H2Point> pts;
      for (int i = 0; i < 4; ++i) pts.push_back(random_disc_point(rng, 2.5));
      ++curves;
      try {
        curve_length(u, H2Polyline(pts));
      } catch (const NonSpacelikeSegment&) {
        ++failures;
      }
    }
  }
  r.values["curves"] = curves;
  r.values["non_spacelike"] = failures;
  r.pass = failures == 0;
  return r;
}

Report pseudo_distance(std::uint64_t seed) {
  Report r = make("pseudo_distance", "mesh d_u is symmetric, vanishes on the diagonal and satisfies the triangle inequality");
  EnvelopeSetup s = envelope_setup(seed, 0.15);
  Rng rng(seed);
  int V = static_cast<int>(s.mesh->vertices.size());
  std::vector<int> ids;
  for (int i = 0; i < 8; ++i) ids.push_back(static_cast<int>(rng() % V));
  s.field->precompute(ids);
  double asym = 0, diag = 0, tri = -kInf;
  for (int a : ids) {
    diag = std::max(diag, std::abs(s.field->distance(a, a)));
    for (int b : ids) {
      asym = std::max(asym, std::abs(s.field->distance(a, b) - s.field->distance(b, a)));
      for (int c = 0; c < V; c += 7)
        tri = std::max(tri, s.field->distance(a, c) - s.field->distance(a, b) - s.field->distance(b, c));
    }
  }
  r.values["max_asymmetry"] = asym;
  r.values["max_diagonal"] = diag;
  r.values["max_triangle_violation"] = tri;
  r.tolerances["triangle"] = 1e-9;
  r.pass = asym == 0 && diag == 0 && tri <= 1e-9;
  return r;
}

Report envelope_locality(std::uint64_t seed) {
  Report r = make("envelope_locality",
                  "adding a support plane changes edge weights only where the plane is active, never above d_H2");
  Rng rng(seed);
  auto group = genus2_octagon_group();
  auto mesh = std::make_shared<GeodesicMesh>(GeodesicMesh::regular_polygon(8, group->circumradius(), 0.2, 4));
  auto cone = build_cone(-uniform(rng, 0.5, 1.5));
  H2Point p = random_disc_point(rng, 1.5);
  double scale = uniform(rng, 0.3, 0.8);
  SupportEnvelope plane({scale * p.vec()}, M_PI / 2 - 1e-3, "plane");
  FunctionPtr plane_ptr = std::make_shared<SupportEnvelope>(plane);
  FunctionPtr grown = chart_max(cone, plane_ptr);
  int changed_outside = 0, above = 0, changed = 0;
  for (std::size_t e = 0; e < mesh->edges.size(); ++e) {
    const H2Point& a = mesh->vertices[mesh->edges[e][0]];
    const H2Point& b = mesh->vertices[mesh->edges[e][1]];
    bool active = false;
    for (int k = 0; k <= 32 && !active; ++k) {
      H2Point x = lerp(a, b, k / 32.0);
      active = plane.value(x) <= cone->value(x) + 1e-9;
    }
    double w0 = segment_length_u(*cone, a, b), w1 = segment_length_u(*grown, a, b);
    changed += w0 != w1;
    if (!active && w0 != w1) ++changed_outside;
    if (w1 > mesh->lengths[e] + 1e-12) ++above;
  }
  r.values["edges"] = static_cast<double>(mesh->edges.size());
  r.values["changed"] = changed;
  r.values["changed_outside_region"] = changed_outside;
  r.values["above_dH"] = above;
  r.pass = changed_outside == 0 && above == 0;
  return r;
}

Report trace_invariance(std::uint64_t seed) {
  Report r = make("trace_invariance", "translation length is invariant under conjugation");
  Rng rng(seed);
  double worst = 0;
  for (int i = 0; i < 5000; ++i) {
    Mobius s = Mobius::translation(uniform(rng, 0, 2 * M_PI), uniform(rng, 0.1, 5));
    Mobius g = Mobius::translation(uniform(rng, 0, 2 * M_PI), uniform(rng, 0, 3)) *
               Mobius::rotation(uniform(rng, 0, 2 * M_PI));
    worst = std::max(worst, std::abs(translation_length(g * s * g.inverse()) - translation_length(s)));
  }
  r.values["max_difference"] = worst;
  r.tolerances["difference"] = 1e-12;
  r.pass = worst < 1e-12;
  return r;
}

Report systole_discreteness(std::uint64_t seed) {
  Report r = make("systole_discreteness", "every nontrivial element moves every point at least the systole");
  auto g = genus2_octagon_group();
  double sys = g->systole(3);
  const auto& ball = g->ball(3);
  Rng rng(seed);
  double worst = kInf;
  for (int i = 0; i < 200; ++i) {
    H2Point x = random_polygon_point(*g, rng);
    for (std::size_t k = 1; k < ball.size(); ++k) worst = std::min(worst, h2_distance(x, ball[k].apply(x)));
  }
  r.values["systole"] = sys;
  r.values["min_displacement"] = worst;
  r.tolerances["slack"] = 1e-10;
  r.pass = worst >= sys - 1e-10;
  return r;
}

Report quotient_properties(std::uint64_t seed) {
  Report r = make("quotient_distance", "quotient distance is monotone in the ball radius and symmetric");
  auto g = genus2_octagon_group();
  FuchsianCConvex fc{constant_function(0.0), g, 1e-8};
  auto mesh = std::make_shared<GeodesicMesh>(tiled_mesh(*g, 1, 0.15, 6));
  InducedDistanceField field(fc.u, mesh);
  Rng rng(seed);
  double nonmono = -kInf, asym = 0;
  int evaluated = 0, insufficient = 0;
  for (int i = 0; i < 6; ++i) {
    H2Point x = random_polygon_point(*g, rng), y = random_polygon_point(*g, rng);
    double prev = kInf;
    for (int rad = 1; rad <= 2; ++rad) {
      try {
        double d = quotient_distance(fc, field, x, y, rad, 1.0);
        nonmono = std::max(nonmono, d - prev);
        prev = d;
        ++evaluated;
        if (rad == 2) asym = std::max(asym, std::abs(d - quotient_distance(fc, field, y, x, rad, 1.0)));
      } catch (const BallInsufficient&) {
        ++insufficient;
      }
    }
  }
  r.values["evaluated"] = evaluated;
  r.values["ball_insufficient"] = insufficient;
  r.values["max_increase"] = nonmono;
  r.values["max_asymmetry"] = asym;
  r.tolerances["asymmetry"] = 1e-9;
  r.pass = evaluated > 0 && nonmono <= 0 && asym < 1e-9;
  return r;
}

Report bounded_height(std::uint64_t seed) {
  Report r = make("bounded_height", "a Fuchsian C-convex function stays below pi/2 - margin on the fundamental domain");
  auto g = genus2_octagon_group();
  FuchsianCConvex fc = random_orbit_envelope(g, seed, g->circumradius());
  Rng rng(seed);
  double sup = 0;
  for (int i = 0; i < 5000; ++i) sup = std::max(sup, fc.u->value(random_polygon_point(*g, rng)));
  r.values["sup_u"] = sup;
  r.values["margin"] = M_PI / 2 - sup;
  r.pass = sup < M_PI / 2 - 1e-3;
  return r;
}

Report envelope_invariance(std::uint64_t seed) {
  auto g = genus2_octagon_group();
  FuchsianCConvex fc = random_orbit_envelope(g, seed, envelope_region(*g));
  Report r = invariance_check(fc, 2000, seed);
  r.name = "envelope_invariance";
  return r;
}

std::vector<ConeSurface> generated_surfaces() {
  auto g = genus2_octagon_group();
  std::vector<ConeSurface> out;
  for (double scale : {1.0, std::cos(M_PI / 6), 0.5}) {
    ScaledHyperbolicSource src(g, scale);
    for (int levels = 0; levels <= 3; ++levels) out.push_back(build_cone_surface(triangulate_octagon(src, levels)));
  }
  return out;
}

Report triangle_identities(std::uint64_t) {
  Report r = make("triangle_identities", "every comparison triangle is thin and its area equals minus its excess");
  double max_excess = -kInf, worst = 0;
  std::size_t count = 0;
  for (const auto& cs : generated_surfaces()) {
    for (std::size_t t = 0; t < cs.excess.size(); ++t) {
      max_excess = std::max(max_excess, cs.excess[t]);
      worst = std::max(worst, std::abs(cs.area[t] + cs.excess[t]));
    }
    count += cs.excess.size();
  }
  r.values["triangles"] = static_cast<double>(count);
  r.values["max_excess"] = max_excess;
  r.values["max_area_error"] = worst;
  r.tolerances["area"] = 1e-10;
  r.pass = max_excess < 0 && worst < 1e-10;
  return r;
}

Report euler_identity(std::uint64_t) {
  Report r = make("euler_identity", "sum of excesses = sum of (cone angle - 2 pi) + 2 pi chi");
  double worst = 0;
  int surfaces = 0;
  for (const auto& cs : generated_surfaces()) {
    worst = std::max(worst, std::abs(cs.euler_identity_residual()));
    ++surfaces;
  }
  r.values["surfaces"] = surfaces;
  r.values["max_residual"] = worst;
  r.tolerances["residual"] = 1e-8;
  r.pass = worst < 1e-8;
  return r;
}

Report single_triangle_paths(std::uint64_t seed) {
  Report r = make("single_triangle_paths",
                  "on a single triangle, cone distances between boundary points equal the direct chord");
  Rng rng(seed);
  double worst = 0;
  int samples = 0;
  for (int trial = 0; trial < 20; ++trial) {
    std::array<double, 3> s;
    do {
      s = {uniform(rng, 0.05, 1.5), uniform(rng, 0.05, 1.5), uniform(rng, 0.05, 1.5)};
    } while (!(s[0] < s[1] + s[2] - 1e-3 && s[1] < s[0] + s[2] - 1e-3 && s[2] < s[0] + s[1] - 1e-3));
    MetricTriangulation mt;
    mt.num_vertices = 3;
    mt.triangles = {{0, 1, 2}};
    mt.build_edges_from_vertices();
    for (const auto& e : mt.edges) {
      int opposite = 3 - e[0] - e[1];
      mt.edge_length.push_back(s[opposite]);
    }
    auto cs = std::make_shared<const ConeSurface>(build_cone_surface(mt));
    ConeDistanceField cdf(cs, 3);
    auto P = place_triangle(s[2], s[1], s[0]);
    for (int a = 0; a < cdf.node_count(); ++a) {
      for (int b = a + 1; b < cdf.node_count(); ++b) {
        auto pos = [&](int n) {
          const auto& node = cdf.node(n);
          if (node.vertex >= 0) return P[node.vertex];
          const auto& ev = mt.edges[node.edge];
          return lerp(P[ev[0]], P[ev[1]], cdf.steiner_fraction(node.index));
        };
        worst = std::max(worst, std::abs(cdf.distance(a, b) - h2_distance(pos(a), pos(b))));
        ++samples;
      }
    }
  }
  r.values["pairs"] = samples;
  r.values["max_error"] = worst;
  r.tolerances["error"] = 1e-10;
  r.pass = worst < 1e-10;
  return r;
}

Report steiner_refinement(std::uint64_t seed) {
  Report r = make("steiner_refinement", "refining Steiner points k -> 2k+1 never lengthens a graph distance");
  auto g = genus2_octagon_group();
  ScaledHyperbolicSource src(g, std::cos(M_PI / 6));
  auto cs = std::make_shared<const ConeSurface>(build_cone_surface(triangulate_octagon(src, 2)));
  ConeDistanceField c1(cs, 1), c3(cs, 3);
  Rng rng(seed);
  double worst = -kInf;
  for (int i = 0; i < 10; ++i) {
    int a = static_cast<int>(rng() % c1.node_count());
    auto row1 = c1.graph_row(a);
    // A Steiner node at index i of k = 1 is index 2i of k = 3; vertices keep their ids.
    auto map = [&](int n) {
      const auto& node = c1.node(n);
      return node.vertex >= 0 ? c3.vertex_node(node.vertex) : c3.steiner_node(node.edge, 2 * node.index);
    };
    auto row3 = c3.graph_row(map(a));
    for (int b = 0; b < c1.node_count(); ++b) worst = std::max(worst, row3[map(b)] - row1[b]);
  }
  r.values["max_increase"] = worst;
  r.tolerances["increase"] = 1e-9;
  r.pass = worst <= 1e-9;
  return r;
}

Report distance_window(std::uint64_t seed) {
  auto g = genus2_octagon_group();
  ScaledHyperbolicSource src(g, std::cos(M_PI / 6));
  auto cs = std::make_shared<const ConeSurface>(build_cone_surface(triangulate_quotient(src, 0.4)));
  ConeDistanceField cdf(cs, 1);
  return distance_window_check(src, cdf, 0.4, 100, seed);
}

Report chord_gaps(std::uint64_t seed) {
  auto g = genus2_octagon_group();
  ScaledHyperbolicSource src(g, std::cos(M_PI / 6));
  auto cs = build_cone_surface(triangulate_quotient(src, 0.4));
  return chord_comparison_check(src, cs, 20, 100, seed);
}

Report determinism(std::uint64_t seed) {
  Report r = make("determinism", "identical inputs and seeds give byte-identical reports");
  auto g = genus2_octagon_group();
  ScaledHyperbolicSource src(g, std::cos(M_PI / 6));
  auto run = [&] {
    auto cs = std::make_shared<const ConeSurface>(build_cone_surface(triangulate_quotient(src, 0.4)));
    ConeDistanceField cdf(cs, 1);
    return distance_window_check(src, cdf, 0.4, 40, seed).to_json().dump() +
           chord_comparison_check(src, *cs, 5, 20, seed).to_json().dump();
  };
  std::string a = run(), b = run();
  r.values["bytes"] = static_cast<double>(a.size());
  r.detail["digest"] = fnv1a_hex(a);
  r.pass = a == b;
  return r;
}

Report homothety(std::uint64_t) {
  Report r = make("homothety", "scaling the metric by lambda multiplies curvature by 1/lambda");
  auto cone = build_cone(-1.0);
  auto sc = smooth_cone(*cone, 0.1);
  auto patch = CurvaturePatch::across_junction(H2Point(), 0.1, 41);
  CurvatureField base = induced_curvature(*sc, patch);
  double worst = 0;
  for (double lambda : {0.25, 0.5, 0.9}) {
    CurvatureField f = induced_curvature(*sc, patch, lambda);
    for (std::size_t i = 0; i < f.K.size(); ++i) worst = std::max(worst, std::abs(f.K[i] - base.K[i] / lambda));
  }
  r.values["max_error"] = worst;
  r.tolerances["error"] = 1e-6;
  r.pass = worst < 1e-6;
  return r;
}

Report smoothing_curvature(std::uint64_t) {
  Report r = make("smoothing_curvature",
                  "capped cones have curvature <= -1 across the junction, and < -1/0.9 after scaling by 0.9");
  auto cone = build_cone(-1.0);
  bool ok = true;
  json rows = json::array();
  double min_det = kInf;
  for (double rho : {0.2, 0.1, 0.05}) {
    auto sc = smooth_cone(*cone, rho);
    auto patch = CurvaturePatch::across_junction(H2Point(), rho, 41);
    CurvatureField f = induced_curvature(*sc, patch);
    CurvatureField g = strictify(sc, 0.9).curvature(patch);
    Report a = f.check(), b = g.check();
    ok = ok && a.pass && b.pass;
    min_det = std::min({min_det, f.min_det, g.min_det});
    rows.push_back({{"rho", rho}, {"max_K", f.max_K}, {"tol", f.tol_curv()}, {"scaled_max_K", g.max_K}});
  }
  r.values["min_det"] = min_det;
  r.detail["rows"] = rows;
  r.pass = ok && min_det > 0;
  return r;
}

Report cap_coincidence(std::uint64_t seed) {
  Report r = make("cap_coincidence", "capped cones equal the cone bitwise outside the cap");
  auto cone = build_cone(-1.0);
  Rng rng(seed);
  int mismatches = 0;
  for (double rho : {0.2, 0.1, 0.05}) {
    auto sc = smooth_cone(*cone, rho);
    for (int i = 0; i < 2000; ++i) {
      double d = uniform(rng, std::atanh(rho) + 1e-9, 3.0);
      H2Point x = H2Point::polar(d, uniform(rng, 0, 2 * M_PI));
      if (std::tanh(h2_distance(x, H2Point())) < rho) continue;
      mismatches += sc->value(x) != cone->value(x);
    }
  }
  r.values["mismatches"] = mismatches;
  r.pass = mismatches == 0;
  return r;
}

Report smoothed_distance_convergence(std::uint64_t seed) {
  Report r = make("smoothed_distance_convergence",
                  "distances of capped cones converge monotonically to the cone distances as rho -> 0");
  auto cone = build_cone(-1.0);
  auto mesh = std::make_shared<GeodesicMesh>(GeodesicMesh::regular_polygon(8, 1.2, 0.1, 6));
  InducedDistanceField base(cone, mesh);
  Rng rng(seed);
  std::vector<int> far;
  for (int v = 0; v < static_cast<int>(mesh->vertices.size()); ++v)
    if (std::tanh(h2_distance(mesh->vertices[v], H2Point())) > 0.3) far.push_back(v);
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < 4; ++i) {
    int a = far[rng() % far.size()];
    for (int k = 0; k < 10; ++k) pairs.push_back({a, far[rng() % far.size()]});
  }
  double slack = 1e-9;
  std::vector<double> diffs;
  for (double rho : {0.2, 0.1, 0.05}) {
    InducedDistanceField f(smooth_cone(*cone, rho), mesh);
    double worst = 0;
    for (auto [a, b] : pairs) worst = std::max(worst, std::abs(f.distance(a, b) - base.distance(a, b)));
    diffs.push_back(worst);
  }
  bool mono = diffs[1] <= diffs[0] + slack && diffs[2] <= diffs[1] + slack;
  r.detail["max_differences"] = diffs;
  r.values["last_difference"] = diffs.back();
  r.tolerances["monotone_slack"] = slack;
  r.pass = mono;
  return r;
}

}  // namespace

const std::vector<PropertyCheck>& property_suite() {
  static const std::vector<PropertyCheck> suite = {
      {"cosine_law", "hyp2", cosine_law},
      {"area_excess", "hyp2", area_excess},
      {"fkepsi", "hyp2", fkepsi},
      {"dual_cosine_roundtrip", "hyp2", dual_cosine_roundtrip},
      {"h2_triangle_inequality", "hyp2", h2_triangle_inequality},
      {"quadric_preservation", "ads3", quadric_preservation},
      {"cylinder_metric", "ads3", cylinder_metric},
      {"chart_lines", "ads3", chart_lines},
      {"lightlike_lines", "ads3", lightlike_lines},
      {"height_roundtrip", "ads3", height_roundtrip},
      {"distance_bounds", "surface", distance_bounds},
      {"spacelike_fuzz", "surface", spacelike_fuzz},
      {"pseudo_distance", "surface", pseudo_distance},
      {"envelope_locality", "surface", envelope_locality},
      {"trace_invariance", "fuchsian", trace_invariance},
      {"systole_discreteness", "fuchsian", systole_discreteness},
      {"quotient_distance", "fuchsian", quotient_properties},
      {"bounded_height", "fuchsian", bounded_height},
      {"envelope_invariance", "fuchsian", envelope_invariance},
      {"triangle_identities", "conemetric", triangle_identities},
      {"euler_identity", "conemetric", euler_identity},
      {"single_triangle_paths", "conemetric", single_triangle_paths},
      {"steiner_refinement", "conemetric", steiner_refinement},
      {"chord_gaps", "conemetric", chord_gaps},
      {"distance_window", "conemetric", distance_window},
      {"determinism", "conemetric", determinism},
      {"homothety", "smoothing", homothety},
      {"smoothing_curvature", "smoothing", smoothing_curvature},
      {"cap_coincidence", "smoothing", cap_coincidence},
      {"smoothed_distance_convergence", "smoothing", smoothed_distance_convergence},
  };
  return suite;
}

}  // namespace adscurv
