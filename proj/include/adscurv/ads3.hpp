#pragma once

#include <array>

#include "adscurv/hyp2.hpp"

namespace adscurv {

using Vec4 = std::array<double, 4>;

// Signature (2,2): -x0 y0 - x1 y1 + x2 y2 + x3 y3.
double bilinear_form(const Vec4& x, const Vec4& y);

enum class CausalType { SpaceLike, TimeLike, LightLike };
const char* to_string(CausalType c);

// Chart coordinates; xbar1 is the vertical (time-like) axis, 𝔻 is xbar1 = 0.
struct ChartPoint {
  double xbar1 = 0, xbar2 = 0, xbar3 = 0;
  double quadric() const { return -xbar1 * xbar1 + xbar2 * xbar2 + xbar3 * xbar3; }
  bool inside() const { return quadric() < 1.0; }
};

class ProjectivePoint4 {
 public:
  // Rescaled to b(x,x) = -1 when the vector is time-like; sign fixed so x0 > 0.
  explicit ProjectivePoint4(const Vec4& x);

  const Vec4& coords() const { return x_; }
  double operator[](int i) const { return x_[i]; }
  double self_form() const { return bilinear_form(x_, x_); }

 private:
  Vec4 x_;
};

ChartPoint affine_chart(const ProjectivePoint4& p);
// Inverse of the chart for interior points.
ProjectivePoint4 chart_lift(const ChartPoint& c);

CausalType classify_vector(const ProjectivePoint4& p, const Vec4& v);
CausalType classify_chart_line(const ChartPoint& a, const ChartPoint& b);
// Scale-free discriminant used by the classifier: positive means two boundary points.
double chart_line_discriminant(const ChartPoint& a, const ChartPoint& b);

// Embeds x in the slice x1 = 0 and flows for time t along the vertical geodesic.
ProjectivePoint4 cylinder_map(const H2Point& x, double t);
Vec4 embed_slice(const H2Point& x);

double height_to_chart(double u_val, const Vec2& xbar);
double chart_to_height(double ubar, const Vec2& xbar);

}  // namespace adscurv
