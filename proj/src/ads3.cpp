#include "adscurv/ads3.hpp"

#include <algorithm>
#include <cmath>

#include "adscurv/errors.hpp"

namespace adscurv {

double bilinear_form(const Vec4& x, const Vec4& y) {
  return -x[0] * y[0] - x[1] * y[1] + x[2] * y[2] + x[3] * y[3];
}

const char* to_string(CausalType c) {
  switch (c) {
    case CausalType::SpaceLike: return "SpaceLike";
    case CausalType::TimeLike: return "TimeLike";
    case CausalType::LightLike: return "LightLike";
  }
  return "?";
}

ProjectivePoint4::ProjectivePoint4(const Vec4& x) : x_(x) {
  double q = bilinear_form(x, x);
  double s = 1.0;
  if (q < 0) s = 1.0 / std::sqrt(-q);
  if (x[0] < 0) s = -s;
  for (double& c : x_) c *= s;
}

ChartPoint affine_chart(const ProjectivePoint4& p) {
  const Vec4& x = p.coords();
  double m = std::max({std::abs(x[0]), std::abs(x[1]), std::abs(x[2]), std::abs(x[3])});
  if (!(std::abs(x[0]) > 1e-12 * m)) throw ChartMiss("point lies on the plane x0 = 0");
  return {x[1] / x[0], x[2] / x[0], x[3] / x[0]};
}

ProjectivePoint4 chart_lift(const ChartPoint& c) {
  if (!c.inside()) throw ChartMiss("chart point outside the hyperboloid interior");
  return ProjectivePoint4(Vec4{1.0, c.xbar1, c.xbar2, c.xbar3});
}

CausalType classify_vector(const ProjectivePoint4& p, const Vec4& v) {
  double nv = 0, np = 0;
  for (int i = 0; i < 4; ++i) {
    nv += v[i] * v[i];
    np += p[i] * p[i];
  }
  if (std::abs(bilinear_form(p.coords(), v)) > 1e-10 * std::sqrt(nv * np))
    throw NotTangent("vector is not tangent to the quadric");
  double q = bilinear_form(v, v);
  double tau = 1e-10 * nv;
  if (q > tau) return CausalType::SpaceLike;
  if (q < -tau) return CausalType::TimeLike;
  return CausalType::LightLike;
}

// Gram determinant of the plane spanned by (1, a) and (0, b - a): the line meets the
// boundary quadric in the roots of A s^2 + 2 B s + C. Using the direction rather than
// the second point avoids cancellation when both points sit near the boundary.
double chart_line_discriminant(const ChartPoint& a, const ChartPoint& b) {
  double d1 = b.xbar1 - a.xbar1, d2 = b.xbar2 - a.xbar2, d3 = b.xbar3 - a.xbar3;
  double A = -d1 * d1 + d2 * d2 + d3 * d3;
  double B = -a.xbar1 * d1 + a.xbar2 * d2 + a.xbar3 * d3;
  double C = a.quadric() - 1;
  return B * B - A * C;
}

CausalType classify_chart_line(const ChartPoint& a, const ChartPoint& b) {
  double d1 = b.xbar1 - a.xbar1, d2 = b.xbar2 - a.xbar2, d3 = b.xbar3 - a.xbar3;
  double scale = 1.0 + std::max({std::abs(a.xbar1), std::abs(a.xbar2), std::abs(a.xbar3),
                                 std::abs(b.xbar1), std::abs(b.xbar2), std::abs(b.xbar3)});
  if (std::sqrt(d1 * d1 + d2 * d2 + d3 * d3) <= 1e-14 * scale)
    throw CoincidentPoints("chart line needs two distinct points");
  double A = -d1 * d1 + d2 * d2 + d3 * d3;
  double B = -a.xbar1 * d1 + a.xbar2 * d2 + a.xbar3 * d3;
  double C = a.quadric() - 1;
  double disc = B * B - A * C;
  double tau = 1e-10 * (B * B + std::abs(A * C));
  if (disc > tau) return CausalType::SpaceLike;
  if (disc < -tau) return CausalType::TimeLike;
  return CausalType::LightLike;
}

Vec4 embed_slice(const H2Point& x) { return {x.x0(), 0.0, x.x1(), x.x2()}; }

ProjectivePoint4 cylinder_map(const H2Point& x, double t) {
  if (!(t >= 0 && t < M_PI / 2)) throw OutOfRange("cylinder time outside [0, pi/2)");
  double c = std::cos(t), s = std::sin(t);
  return ProjectivePoint4(Vec4{c * x.x0(), -s, c * x.x1(), c * x.x2()});
}

double height_to_chart(double u_val, const Vec2& xbar) {
  double r2 = xbar[0] * xbar[0] + xbar[1] * xbar[1];
  return -std::tan(u_val) * std::sqrt(std::max(0.0, 1.0 - r2));
}

double chart_to_height(double ubar, const Vec2& xbar) {
  double r2 = xbar[0] * xbar[0] + xbar[1] * xbar[1];
  return std::atan(-ubar / std::sqrt(1.0 - r2));
}

}  // namespace adscurv
