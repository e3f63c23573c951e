#pragma once

#include <memory>
#include <string>
#include <vector>

#include "adscurv/hyp2.hpp"
#include "adscurv/report.hpp"
#include "adscurv/surface.hpp"

namespace adscurv {

enum class CapKind { Bump, Hyperbola };

// Rotational chart profile about a center: ubar = f(r) with r the chart radius
// measured in the frame that puts the center at the origin (r = tanh of the distance).
class ConeFunction : public CConvexFunction {
 public:
  // Cone over the boundary circle with apex height h0 <= 0 over `center`.
  ConeFunction(double apex_height, const H2Point& center);
  // Same cone with the apex neighbourhood r < rho replaced by a convex cap.
  ConeFunction(const ConeFunction& cone, double rho, CapKind cap);

  double value(const H2Point& y) const override;
  bool gradient(const H2Point& y, Vec3& g) const override;
  double bound() const override;
  std::string describe() const override;

  double apex_height() const { return h0_; }
  const H2Point& center() const { return center_; }
  double rho() const { return rho_; }
  bool smoothed() const { return rho_ > 0; }
  CapKind cap() const { return cap_; }

  // Chart profile f(r) and its slope.
  double profile(double r) const;
  double profile_slope(double r) const;
  double profile_curvature(double r) const;
  // Height and its derivative as functions of the distance to the center.
  double radial_value(double d) const;
  double radial_slope(double d) const;
  long double radial_value_ld(long double d) const;
  long double radial_slope_ld(long double d) const;
  // Apex cone angle of the unsmoothed cone, 2 pi sqrt(1 + h0^2).
  double apex_angle() const;

 private:
  template <class T> T profile_t(T r) const;
  template <class T> T slope_t(T r) const;
  template <class T> T radial_value_t(T d) const;
  template <class T> T radial_slope_t(T d) const;

  double h0_;
  H2Point center_;
  double rho_ = 0;
  CapKind cap_ = CapKind::Bump;
  long double f0_ = 0, cap_slope_ = 0, cap_a_ = 0;
};

using ConePtr = std::shared_ptr<const ConeFunction>;

// ApexOutsideCylinder unless h0 <= 0 is finite and the center lies in the open disc.
ConePtr build_cone(double apex_height, const Vec2& klein_center = {0, 0});
// RhoTooLarge unless 0 < rho < 1.
ConePtr smooth_cone(const ConeFunction& cone, double rho, CapKind cap = CapKind::Bump);

// circumference / radius of the induced circle of hyperbolic radius `radius` about the center.
double circle_ratio(const CConvexFunction& u, const H2Point& center, double radius,
                    int segments = 256);

struct CurvaturePatch {
  enum class Kind { Polar, Poincare };
  Kind kind = Kind::Polar;
  // Polar: s = distance to center, t = angle. Poincare: (s, t) are disc coordinates.
  H2Point center;
  double s0 = 0, s1 = 1, t0 = 0, t1 = 1;
  int ns = 41, nt = 41;

  // Distance band [dj - w, dj + w] about the chart radius rho, angles of the same step.
  static CurvaturePatch across_junction(const H2Point& center, double rho, int n);
  static CurvaturePatch poincare(double x0, double x1, double y0, double y1, int n);
};

struct CurvatureField {
  CurvaturePatch patch;
  std::vector<double> s, t;  // grid coordinates
  std::vector<double> E, F, G, K;  // row-major, index i * nt + j (i along s)
  double step = 0;
  double scale = 1;  // factor applied to the quadratic form
  double max_K = 0, min_K = 0, min_det = 0;

  double tol_curv() const { return 10 * step * step; }
  // Report: PASS iff max K <= -1/scale + tol_curv.
  Report check(const std::string& name = "curvature") const;
  std::string to_csv() const;
};

// Brioschi curvature of scale * (cos^2 u g_H - du^2) on the patch, sixth-order stencils.
CurvatureField induced_curvature(const CConvexFunction& u, const CurvaturePatch& patch,
                                 double scale = 1.0);

// The induced metric multiplied by lambda in (0,1): curvature K/lambda, distances sqrt(lambda) d.
class ScaledMetric {
 public:
  ScaledMetric(FunctionPtr u, double lambda);
  double lambda() const { return lambda_; }
  const CConvexFunction& function() const { return *u_; }
  FunctionPtr function_ptr() const { return u_; }
  double distance_factor() const;
  double scale_distance(double d_u) const { return distance_factor() * d_u; }
  CurvatureField curvature(const CurvaturePatch& patch) const;

 private:
  FunctionPtr u_;
  double lambda_;
};

ScaledMetric strictify(FunctionPtr u, double lambda);

}  // namespace adscurv
