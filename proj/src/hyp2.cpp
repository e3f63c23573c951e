#include "adscurv/hyp2.hpp"

#include <algorithm>
#include <cmath>

#include "adscurv/errors.hpp"

namespace adscurv {

H2Point H2Point::from_spatial(double x1, double x2) {
  return H2Point(Vec3{std::sqrt(1.0 + x1 * x1 + x2 * x2), x1, x2});
}

H2Point H2Point::from_vector(const Vec3& v) {
  double q = -minkowski(v, v);
  if (!(q > 0)) throw OutOfRange("vector is not time-like");
  double s = (v.x0 < 0 ? -1.0 : 1.0) / std::sqrt(q);
  return from_spatial(v.x1 * s, v.x2 * s);
}

H2Point H2Point::from_klein(const Vec2& k) {
  double r2 = k[0] * k[0] + k[1] * k[1];
  if (!(r2 < 1)) throw OutOfRange("Klein point outside the unit disc");
  double x0 = 1.0 / std::sqrt(1.0 - r2);
  return from_spatial(k[0] * x0, k[1] * x0);
}

H2Point H2Point::from_poincare(const Vec2& p) {
  double r2 = p[0] * p[0] + p[1] * p[1];
  if (!(r2 < 1)) throw OutOfRange("Poincare point outside the unit disc");
  double f = 2.0 / (1.0 - r2);
  return from_spatial(p[0] * f, p[1] * f);
}

H2Point H2Point::polar(double r, double angle) {
  double s = std::sinh(r);
  return from_spatial(s * std::cos(angle), s * std::sin(angle));
}

double h2_distance(const H2Point& p, const H2Point& q) {
  double c = -minkowski(p.vec(), q.vec());
  if (c > 2.0) return std::acosh(c);
  Vec3 w = p.vec() - q.vec();
  double n2 = std::max(0.0, minkowski(w, w));
  return 2.0 * std::asinh(0.5 * std::sqrt(n2));
}

Vec3 unit_tangent(const H2Point& p, const H2Point& q) {
  Vec3 w = q.vec() - p.vec();
  Vec3 t = w - p.vec() * (0.5 * minkowski(w, w));
  double n = std::sqrt(std::max(0.0, minkowski(t, t)));
  if (n == 0) throw CoincidentPoints("tangent between coincident points");
  return t * (1.0 / n);
}

Vec3 unit_normal(const H2Point& p, const Vec3& t) {
  Vec3 n = mcross(p.vec(), t);
  n = n * (1.0 / std::sqrt(minkowski(n, n)));
  if (det3(p.vec(), t, n) < 0) n = -n;
  return n;
}

H2Point exp_map(const H2Point& p, const Vec3& unit_dir, double s) {
  return H2Point::from_vector(p.vec() * std::cosh(s) + unit_dir * std::sinh(s));
}

H2Point lerp(const H2Point& p, const H2Point& q, double s) {
  double d = h2_distance(p, q);
  if (d < 1e-300) return p;
  Vec3 v = p.vec() * std::sinh((1 - s) * d) + q.vec() * std::sinh(s * d);
  return H2Point::from_vector(v);
}

H2Point midpoint(const H2Point& p, const H2Point& q) {
  return H2Point::from_vector(p.vec() + q.vec());
}

double orientation(const H2Point& a, const H2Point& b, const H2Point& c) {
  return det3(a.vec(), b.vec(), c.vec());
}

double segment_distance(const H2Point& x, const H2Point& a, const H2Point& b) {
  double da = h2_distance(x, a), db = h2_distance(x, b);
  if (h2_distance(a, b) < 1e-14) return da;
  Vec3 n = mcross(a.vec(), b.vec());
  double nn = minkowski(n, n);
  double xn = minkowski(x.vec(), n);
  Vec3 f = x.vec() - n * (xn / nn);
  // Coefficients of the foot in the basis (a, b).
  double aa = -1, bb = -1, ab = minkowski(a.vec(), b.vec());
  double fa = minkowski(f, a.vec()), fb = minkowski(f, b.vec());
  double det = aa * bb - ab * ab;
  double alpha = (fa * bb - fb * ab) / det;
  double beta = (aa * fb - ab * fa) / det;
  if (alpha >= 0 && beta >= 0) {
    return std::asinh(std::abs(xn) / std::sqrt(nn));
  }
  return std::min(da, db);
}

namespace {
double cross2(const Vec2& o, const Vec2& a, const Vec2& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}
int sgn(double v, double tol) { return v > tol ? 1 : (v < -tol ? -1 : 0); }
}  // namespace

bool segments_cross(const H2Point& a, const H2Point& b, const H2Point& c,
                    const H2Point& d, double tol) {
  Vec2 ka = a.klein(), kb = b.klein(), kc = c.klein(), kd = d.klein();
  int s1 = sgn(cross2(ka, kb, kc), tol), s2 = sgn(cross2(ka, kb, kd), tol);
  int s3 = sgn(cross2(kc, kd, ka), tol), s4 = sgn(cross2(kc, kd, kb), tol);
  return s1 * s2 < 0 && s3 * s4 < 0;
}

H2Polyline::H2Polyline(std::vector<H2Point> pts) : pts_(std::move(pts)) {
  for (std::size_t i = 0; i + 1 < pts_.size(); ++i) {
    double len = h2_distance(pts_[i], pts_[i + 1]);
    if (len < 1e-15) throw CoincidentPoints("consecutive polyline points coincide");
    lengths_.push_back(len);
    tangents_.push_back(unit_tangent(pts_[i], pts_[i + 1]));
  }
}

double H2Polyline::length() const {
  double s = 0;
  for (double l : lengths_) s += l;
  return s;
}

H2Point H2Polyline::at(std::size_t i, double s) const {
  return exp_map(pts_[i], tangents_[i], s);
}

Vec3 H2Polyline::velocity(std::size_t i, double s) const {
  return pts_[i].vec() * std::sinh(s) + tangents_[i] * std::cosh(s);
}

double TriangleShape::cosine_residual() const {
  auto res = [](double opp, double s1, double s2, double ang) {
    return std::abs(std::cos(ang) * std::sinh(s1) * std::sinh(s2) -
                    (std::cosh(s1) * std::cosh(s2) - std::cosh(opp)));
  };
  return std::max({res(a, b, c, alpha), res(b, a, c, beta), res(c, a, b, gamma)});
}

namespace {

// Half-angle form of the cosine law; accurate for thin and tiny triangles.
double half_angle(double opp, double s1, double s2) {
  double s = 0.5 * (opp + s1 + s2);
  double num = std::sinh(std::max(0.0, s - s1)) * std::sinh(std::max(0.0, s - s2));
  double den = std::sinh(s) * std::sinh(std::max(0.0, s - opp));
  return 2.0 * std::atan2(std::sqrt(num), std::sqrt(den));
}

void check_triangle(double a, double b, double c, bool strict) {
  double per = a + b + c;
  double slack = std::min({b + c - a, a + c - b, a + b - c});
  if (!(std::isfinite(per))) throw DegenerateTriangle("non-finite side");
  if (strict) {
    if (std::min({a, b, c}) < 1e-12 || slack < 1e-12 * per)
      throw DegenerateTriangle("triangle inequality not strict");
  } else if (slack < -1e-12 * per) {
    throw DegenerateTriangle("triangle inequality violated");
  }
}

}  // namespace

TriangleShape comparison_triangle(double d01, double d02, double d12) {
  TriangleShape t;
  t.a = d12;
  t.b = d02;
  t.c = d01;
  check_triangle(t.a, t.b, t.c, true);
  t.alpha = half_angle(t.a, t.b, t.c);
  t.beta = half_angle(t.b, t.a, t.c);
  t.gamma = half_angle(t.c, t.a, t.b);
  return t;
}

double triangle_area(const TriangleShape& t) { return M_PI - t.angle_sum(); }

double isosceles_chord(double x, double theta) {
  return 2.0 * std::asinh(std::sinh(x) * std::sin(0.5 * theta));
}

double comparison_angle(double d_xy, double d_xz, double d_yz) {
  if (!(d_xy > 0) || !(d_xz > 0) || d_yz < 0)
    throw DegenerateTriangle("comparison angle needs positive adjacent sides");
  check_triangle(d_yz, d_xy, d_xz, false);
  return half_angle(d_yz, d_xy, d_xz);
}

double side_from_angles(double alpha, double beta, double gamma) {
  double ch = (std::cos(alpha) + std::cos(beta) * std::cos(gamma)) /
              (std::sin(beta) * std::sin(gamma));
  return std::acosh(std::max(1.0, ch));
}

std::array<H2Point, 3> place_triangle(double d01, double d02, double d12) {
  double alpha = comparison_angle(d01, d02, d12);
  return {H2Point(), H2Point::polar(d01, 0.0), H2Point::polar(d02, alpha)};
}

H2Point third_point(const H2Point& a, const H2Point& b, double da, double db,
                    double side) {
  double dab = h2_distance(a, b);
  double alpha = comparison_angle(dab, da, db);
  Vec3 t = unit_tangent(a, b);
  Vec3 n = unit_normal(a, t);
  if (side < 0) n = -n;
  return exp_map(a, t * std::cos(alpha) + n * std::sin(alpha), da);
}

}  // namespace adscurv
