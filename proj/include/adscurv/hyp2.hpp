#pragma once

#include <array>
#include <cmath>
#include <vector>

namespace adscurv {

// Vector of Minkowski 3-space with the form -x0 y0 + x1 y1 + x2 y2.
struct Vec3 {
  double x0 = 0, x1 = 0, x2 = 0;

  Vec3() = default;
  Vec3(double a, double b, double c) : x0(a), x1(b), x2(c) {}

  Vec3 operator+(const Vec3& o) const { return {x0 + o.x0, x1 + o.x1, x2 + o.x2}; }
  Vec3 operator-(const Vec3& o) const { return {x0 - o.x0, x1 - o.x1, x2 - o.x2}; }
  Vec3 operator*(double s) const { return {x0 * s, x1 * s, x2 * s}; }
  Vec3 operator-() const { return {-x0, -x1, -x2}; }
  Vec3& operator+=(const Vec3& o) {
    x0 += o.x0; x1 += o.x1; x2 += o.x2;
    return *this;
  }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

inline double minkowski(const Vec3& a, const Vec3& b) {
  return -a.x0 * b.x0 + a.x1 * b.x1 + a.x2 * b.x2;
}

// Minkowski cross product: orthogonal to both arguments for the form above.
inline Vec3 mcross(const Vec3& a, const Vec3& b) {
  return {-(a.x1 * b.x2 - a.x2 * b.x1), a.x2 * b.x0 - a.x0 * b.x2,
          a.x0 * b.x1 - a.x1 * b.x0};
}

inline double det3(const Vec3& a, const Vec3& b, const Vec3& c) {
  return a.x0 * (b.x1 * c.x2 - b.x2 * c.x1) - a.x1 * (b.x0 * c.x2 - b.x2 * c.x0) +
         a.x2 * (b.x0 * c.x1 - b.x1 * c.x0);
}

using Vec2 = std::array<double, 2>;

class H2Point {
 public:
  H2Point() : v_{1, 0, 0} {}

  // x0 is always recomputed from the spatial part.
  static H2Point from_spatial(double x1, double x2);
  // Rescales a future (or past) time-like vector onto the upper sheet.
  static H2Point from_vector(const Vec3& v);
  static H2Point from_klein(const Vec2& k);
  static H2Point from_poincare(const Vec2& p);
  // Point at distance r from the origin in direction angle.
  static H2Point polar(double r, double angle);

  double x0() const { return v_.x0; }
  double x1() const { return v_.x1; }
  double x2() const { return v_.x2; }
  const Vec3& vec() const { return v_; }

  Vec2 klein() const { return {v_.x1 / v_.x0, v_.x2 / v_.x0}; }
  Vec2 poincare() const { return {v_.x1 / (1 + v_.x0), v_.x2 / (1 + v_.x0)}; }
  double norm_residual() const { return minkowski(v_, v_) + 1.0; }

 private:
  explicit H2Point(const Vec3& v) : v_(v) {}
  Vec3 v_;
};

double h2_distance(const H2Point& p, const H2Point& q);

// Unit tangent at p pointing toward q; p and q must differ.
Vec3 unit_tangent(const H2Point& p, const H2Point& q);
// Unit tangent at p orthogonal to the unit tangent t (orientation: det(p,t,n) > 0).
Vec3 unit_normal(const H2Point& p, const Vec3& t);
H2Point exp_map(const H2Point& p, const Vec3& unit_dir, double s);
// Point at fraction s of the geodesic segment from p to q.
H2Point lerp(const H2Point& p, const H2Point& q, double s);
H2Point midpoint(const H2Point& p, const H2Point& q);

// Sign of the orientation of the triangle (a,b,c); agrees with Klein coordinates.
double orientation(const H2Point& a, const H2Point& b, const H2Point& c);

// Distance from x to the closed geodesic segment [a,b].
double segment_distance(const H2Point& x, const H2Point& a, const H2Point& b);

// True when the open segments [a,b] and [c,d] cross (Klein model test).
bool segments_cross(const H2Point& a, const H2Point& b, const H2Point& c,
                    const H2Point& d, double tol = 1e-12);

class H2Polyline {
 public:
  H2Polyline() = default;
  explicit H2Polyline(std::vector<H2Point> pts);

  const std::vector<H2Point>& points() const { return pts_; }
  std::size_t segments() const { return pts_.empty() ? 0 : pts_.size() - 1; }
  double segment_length(std::size_t i) const { return lengths_[i]; }
  double length() const;
  // Constant-speed point along segment i at arclength s from its start.
  H2Point at(std::size_t i, double s) const;
  // Unit velocity at arclength s along segment i.
  Vec3 velocity(std::size_t i, double s) const;

 private:
  std::vector<H2Point> pts_;
  std::vector<double> lengths_;
  std::vector<Vec3> tangents_;
};

// Side a is opposite alpha, b opposite beta, c opposite gamma.
struct TriangleShape {
  double a = 0, b = 0, c = 0;
  double alpha = 0, beta = 0, gamma = 0;

  double angle_sum() const { return alpha + beta + gamma; }
  double excess() const { return alpha + beta + gamma - M_PI; }
  double cosine_residual() const;
};

// Vertices x0,x1,x2 with the given pairwise distances; alpha sits at x0.
TriangleShape comparison_triangle(double d01, double d02, double d12);
double triangle_area(const TriangleShape& t);
double isosceles_chord(double x, double theta);
// Angle at x of the comparison triangle; tolerates the collinear limit.
double comparison_angle(double d_xy, double d_xz, double d_yz);
// Side opposite alpha recovered from the three angles.
double side_from_angles(double alpha, double beta, double gamma);

// Explicit placement: x0 at the origin, x1 on the positive x1-axis, x2 above.
std::array<H2Point, 3> place_triangle(double d01, double d02, double d12);
// Point at distances (da, db) from a and b, on the side with orientation sign `side`.
H2Point third_point(const H2Point& a, const H2Point& b, double da, double db,
                    double side);

}  // namespace adscurv
