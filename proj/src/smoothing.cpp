#include "adscurv/smoothing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>

#include "adscurv/errors.hpp"
#include "adscurv/parallel.hpp"

namespace adscurv {

namespace {

template <class T>
using Gauss = boost::math::quadrature::gauss<T, 100>;

template <class T>
T bump(T t) {
  if (t <= -1 || t >= 1) return 0;
  return std::exp(-1 / (1 - t * t));
}

template <class T>
T bump_integral(T s) {
  if (s <= 0) return 0;
  return Gauss<T>::integrate([](T t) { return bump(t); }, T(0), std::min(s, T(1)));
}

template <class T>
T bump_moment(T s) {
  if (s <= 0) return 0;
  return Gauss<T>::integrate([s](T t) { return (s - t) * bump(t); }, T(0), std::min(s, T(1)));
}

template <class T>
T bump_mass() {
  static const T z = bump_integral(T(1));
  return z;
}

// Lorentz boost taking the origin to c; its second and third columns are an
// orthonormal tangent frame at c.
void tangent_frame(const H2Point& c, Vec3& e1, Vec3& e2) {
  double c0 = c.x0(), c1 = c.x1(), c2 = c.x2();
  double k = 1.0 / (1.0 + c0);
  e1 = {c1, 1 + c1 * c1 * k, c1 * c2 * k};
  e2 = {c2, c1 * c2 * k, 1 + c2 * c2 * k};
}

Vec3 boost_apply(const H2Point& c, const Vec3& v) {
  Vec3 e1, e2;
  tangent_frame(c, e1, e2);
  return c.vec() * v.x0 + e1 * v.x1 + e2 * v.x2;
}

}  // namespace

ConeFunction::ConeFunction(double apex_height, const H2Point& center)
    : h0_(apex_height), center_(center) {
  if (!std::isfinite(h0_) || h0_ > 0) throw ApexOutsideCylinder("apex height must be finite and <= 0");
}

ConeFunction::ConeFunction(const ConeFunction& cone, double rho, CapKind cap)
    : h0_(cone.h0_), center_(cone.center_), rho_(rho), cap_(cap) {
  if (!(rho > 0)) throw OutOfRange("cap radius must be positive");
  if (!(rho < 1)) throw RhoTooLarge("cap radius must stay inside the unit disc");
  const long double m = -h0_, r = rho_;
  if (cap_ == CapKind::Bump) {
    f0_ = h0_ + m * r - m * r * bump_moment(1.0L) / bump_mass<long double>();
  } else {
    cap_a_ = rho_;
    cap_slope_ = m * std::sqrt(r * r + r * r) / r;
    f0_ = h0_ + m * r - cap_slope_ * (std::sqrt(r * r + r * r) - r);
  }
}

template <class T>
T ConeFunction::profile_t(T r) const {
  const T m = -T(h0_);
  if (!smoothed() || r >= T(rho_)) return T(h0_) + m * r;
  if (cap_ == CapKind::Bump) return f0_ + m * T(rho_) * bump_moment(r / T(rho_)) / bump_mass<T>();
  return f0_ + cap_slope_ * (std::sqrt(r * r + cap_a_ * cap_a_) - cap_a_);
}

template <class T>
T ConeFunction::slope_t(T r) const {
  const T m = -T(h0_);
  if (!smoothed() || r >= T(rho_)) return m;
  if (cap_ == CapKind::Bump) return m * bump_integral(r / T(rho_)) / bump_mass<T>();
  return cap_slope_ * r / std::sqrt(r * r + cap_a_ * cap_a_);
}

template <class T>
T ConeFunction::radial_value_t(T d) const {
  if (!smoothed() || std::tanh(d) >= T(rho_)) return std::atan(-T(h0_) * std::exp(-d));
  return std::atan(-profile_t(std::tanh(d)) * std::cosh(d));
}

template <class T>
T ConeFunction::radial_slope_t(T d) const {
  if (!smoothed() || std::tanh(d) >= T(rho_)) {
    T q = -T(h0_) * std::exp(-d);
    return -q / (1 + q * q);
  }
  T r = std::tanh(d), ch = std::cosh(d);
  T f = profile_t(r);
  T q = -f * ch;
  T dq = -slope_t(r) / ch - f * std::sinh(d);
  return dq / (1 + q * q);
}

double ConeFunction::profile(double r) const { return profile_t(r); }
double ConeFunction::profile_slope(double r) const { return slope_t(r); }

double ConeFunction::profile_curvature(double r) const {
  if (!smoothed() || r >= rho_) return 0;
  if (cap_ == CapKind::Bump) return -h0_ * bump(r / rho_) / (bump_mass<double>() * rho_);
  double q = r * r + cap_a_ * cap_a_;
  return cap_slope_ * cap_a_ * cap_a_ / (q * std::sqrt(q));
}

double ConeFunction::radial_value(double d) const { return radial_value_t(d); }
double ConeFunction::radial_slope(double d) const { return radial_slope_t(d); }
long double ConeFunction::radial_value_ld(long double d) const { return radial_value_t(d); }
long double ConeFunction::radial_slope_ld(long double d) const { return radial_slope_t(d); }

double ConeFunction::value(const H2Point& y) const { return radial_value(h2_distance(y, center_)); }

bool ConeFunction::gradient(const H2Point& y, Vec3& g) const {
  double d = h2_distance(y, center_);
  if (d < 1e-9) {
    if (!smoothed()) return false;
    g = Vec3{0, 0, 0};
    return true;
  }
  g = unit_tangent(y, center_) * (-radial_slope(d));
  return true;
}

double ConeFunction::bound() const { return std::atan(-profile(0.0)); }

std::string ConeFunction::describe() const {
  std::ostringstream os;
  os.precision(17);
  os << (smoothed() ? "smoothed-cone:" : "cone:") << h0_;
  if (smoothed()) os << ",rho=" << rho_ << (cap_ == CapKind::Bump ? ",bump" : ",hyperbola");
  return os.str();
}

double ConeFunction::apex_angle() const { return 2 * M_PI * std::sqrt(1 + h0_ * h0_); }

ConePtr build_cone(double apex_height, const Vec2& klein_center) {
  if (!(klein_center[0] * klein_center[0] + klein_center[1] * klein_center[1] < 1))
    throw ApexOutsideCylinder("apex must sit over the open disc");
  return std::make_shared<ConeFunction>(apex_height, H2Point::from_klein(klein_center));
}

ConePtr smooth_cone(const ConeFunction& cone, double rho, CapKind cap) {
  return std::make_shared<ConeFunction>(cone, rho, cap);
}

double circle_ratio(const CConvexFunction& u, const H2Point& center, double radius, int segments) {
  Vec3 e1, e2;
  tangent_frame(center, e1, e2);
  std::vector<H2Point> pts;
  for (int k = 0; k <= segments; ++k) {
    double phi = 2 * M_PI * k / segments;
    pts.push_back(H2Point::from_vector(center.vec() * std::cosh(radius) +
                                       (e1 * std::cos(phi) + e2 * std::sin(phi)) * std::sinh(radius)));
  }
  double circ = curve_length(u, H2Polyline(pts));
  double rad = segment_length_u(u, center, pts.front());
  return circ / rad;
}

CurvaturePatch CurvaturePatch::across_junction(const H2Point& center, double rho, int n) {
  CurvaturePatch p;
  p.kind = Kind::Polar;
  p.center = center;
  double dj = std::atanh(rho), w = 0.25 * dj;
  double step = 2 * w / (n - 1);
  p.s0 = dj - w;
  p.s1 = dj + w;
  p.ns = n;
  p.nt = 5;
  p.t0 = -2 * step;
  p.t1 = 2 * step;
  return p;
}

CurvaturePatch CurvaturePatch::poincare(double x0, double x1, double y0, double y1, int n) {
  CurvaturePatch p;
  p.kind = Kind::Poincare;
  p.s0 = x0;
  p.s1 = x1;
  p.t0 = y0;
  p.t1 = y1;
  p.ns = p.nt = n;
  return p;
}

namespace {

constexpr int kMargin = 3;
using LD = long double;
constexpr LD kD1[7] = {-1.0L / 60, 3.0L / 20, -3.0L / 4, 0, 3.0L / 4, -3.0L / 20, 1.0L / 60};
constexpr LD kD2[7] = {1.0L / 90, -3.0L / 20, 3.0L / 2, -49.0L / 18, 3.0L / 2, -3.0L / 20, 1.0L / 90};

// Point, coordinate tangents, and the hyperbolic metric coefficients in closed form.
struct Frame {
  Vec3 y, ys, yt;
  LD hE = 1, hF = 0, hG = 1;
};

Frame patch_frame(const CurvaturePatch& p, double s, double t) {
  Frame f;
  if (p.kind == CurvaturePatch::Kind::Polar) {
    Vec3 e1, e2;
    tangent_frame(p.center, e1, e2);
    Vec3 dir = e1 * std::cos(t) + e2 * std::sin(t);
    Vec3 perp = e1 * (-std::sin(t)) + e2 * std::cos(t);
    f.y = p.center.vec() * std::cosh(s) + dir * std::sinh(s);
    f.ys = p.center.vec() * std::sinh(s) + dir * std::cosh(s);
    f.yt = perp * std::sinh(s);
    f.hG = std::sinh(LD(s)) * std::sinh(LD(s));
  } else {
    double r2 = s * s + t * t, D = 1 - r2;
    if (!(D > 0)) throw OutOfRange("Poincare patch leaves the disc");
    Vec3 y{(1 + r2) / D, 2 * s / D, 2 * t / D};
    Vec3 ys{4 * s / (D * D), 2 / D + 4 * s * s / (D * D), 4 * s * t / (D * D)};
    Vec3 yt{4 * t / (D * D), 4 * s * t / (D * D), 2 / D + 4 * t * t / (D * D)};
    f.y = boost_apply(p.center, y);
    f.ys = boost_apply(p.center, ys);
    f.yt = boost_apply(p.center, yt);
    LD Dl = 1 - (LD(s) * s + LD(t) * t);
    f.hE = f.hG = 4 / (Dl * Dl);
  }
  return f;
}

double derivative(const CConvexFunction& u, const H2Point& y, const Vec3& g, bool has_g,
                  const Vec3& dir) {
  if (has_g) return minkowski(g, dir);
  double n = std::sqrt(minkowski(dir, dir));
  return n * u.directional(y, dir * (1.0 / n));
}

}  // namespace

CurvatureField induced_curvature(const CConvexFunction& u, const CurvaturePatch& patch,
                                 double scale) {
  if (patch.ns < 2 || patch.nt < 2) throw OutOfRange("curvature patch needs at least 2x2 points");
  CurvatureField cf;
  cf.patch = patch;
  cf.scale = scale;
  const int ns = patch.ns, nt = patch.nt;
  const LD ds = (LD(patch.s1) - patch.s0) / (ns - 1), dt = (LD(patch.t1) - patch.t0) / (nt - 1);
  cf.step = static_cast<double>(std::max(ds, dt));
  for (int i = 0; i < ns; ++i) cf.s.push_back(static_cast<double>(patch.s0 + i * ds));
  for (int j = 0; j < nt; ++j) cf.t.push_back(static_cast<double>(patch.t0 + j * dt));

  // Rotational profiles about the patch center use the exact radial coordinate.
  const auto* radial = dynamic_cast<const ConeFunction*>(&u);
  if (radial && (patch.kind != CurvaturePatch::Kind::Polar ||
                 h2_distance(radial->center(), patch.center) != 0 || patch.s0 - kMargin * ds <= 0))
    radial = nullptr;
  const int ms = ns + 2 * kMargin, mt = nt + 2 * kMargin;
  std::vector<LD> E(ms * mt), F(ms * mt), G(ms * mt);
  parallel_for(static_cast<std::size_t>(ms), [&](std::size_t ii) {
    int i = static_cast<int>(ii);
    LD sl = patch.s0 + (i - kMargin) * ds;
    double s = static_cast<double>(sl);
    for (int j = 0; j < mt; ++j) {
      double t = static_cast<double>(patch.t0 + (j - kMargin) * dt);
      Frame f = patch_frame(patch, s, t);
      LD uv, us, ut;
      if (radial) {
        uv = radial->radial_value_ld(sl);
        us = radial->radial_slope_ld(sl);
        ut = 0;
        f.hG = std::sinh(sl) * std::sinh(sl);
      } else {
        H2Point y = H2Point::from_vector(f.y);
        uv = u.value(y);
        Vec3 g;
        bool has_g = u.gradient(y, g);
        us = derivative(u, y, g, has_g, f.ys);
        ut = derivative(u, y, g, has_g, f.yt);
      }
      LD c2 = std::cos(uv) * std::cos(uv);
      E[i * mt + j] = scale * (c2 * f.hE - us * us);
      F[i * mt + j] = scale * (c2 * f.hF - us * ut);
      G[i * mt + j] = scale * (c2 * f.hG - ut * ut);
    }
  });
  for (int k = 0; k < ms * mt; ++k) {
    if (!(E[k] > 0) || !(E[k] * G[k] - F[k] * F[k] > 0))
      throw DegenerateMetric("induced metric is not positive definite on the patch");
  }

  auto at = [mt](const std::vector<LD>& A, int i, int j) { return A[i * mt + j]; };
  auto d_s = [&](const std::vector<LD>& A, int i, int j) {
    LD v = 0;
    for (int k = 0; k < 7; ++k) v += kD1[k] * at(A, i + k - 3, j);
    return v / ds;
  };
  auto d_t = [&](const std::vector<LD>& A, int i, int j) {
    LD v = 0;
    for (int k = 0; k < 7; ++k) v += kD1[k] * at(A, i, j + k - 3);
    return v / dt;
  };
  auto d_ss = [&](const std::vector<LD>& A, int i, int j) {
    LD v = 0;
    for (int k = 0; k < 7; ++k) v += kD2[k] * at(A, i + k - 3, j);
    return v / (ds * ds);
  };
  auto d_tt = [&](const std::vector<LD>& A, int i, int j) {
    LD v = 0;
    for (int k = 0; k < 7; ++k) v += kD2[k] * at(A, i, j + k - 3);
    return v / (dt * dt);
  };
  auto d_st = [&](const std::vector<LD>& A, int i, int j) {
    LD v = 0;
    for (int a = 0; a < 7; ++a)
      for (int b = 0; b < 7; ++b) v += kD1[a] * kD1[b] * at(A, i + a - 3, j + b - 3);
    return v / (ds * dt);
  };

  cf.E.resize(ns * nt);
  cf.F.resize(ns * nt);
  cf.G.resize(ns * nt);
  cf.K.resize(ns * nt);
  for (int i = 0; i < ns; ++i) {
    for (int j = 0; j < nt; ++j) {
      int I = i + kMargin, J = j + kMargin;
      LD e = at(E, I, J), f = at(F, I, J), g = at(G, I, J);
      LD Es = d_s(E, I, J), Et = d_t(E, I, J), Ett = d_tt(E, I, J);
      LD Fs = d_s(F, I, J), Ft = d_t(F, I, J), Fst = d_st(F, I, J);
      LD Gs = d_s(G, I, J), Gt = d_t(G, I, J), Gss = d_ss(G, I, J);
      LD a11 = -0.5 * Ett + Fst - 0.5 * Gss, a12 = 0.5 * Es, a13 = Fs - 0.5 * Et;
      LD a21 = Ft - 0.5 * Gs, a31 = 0.5 * Gt;
      LD det1 = a11 * (e * g - f * f) - a12 * (a21 * g - f * a31) + a13 * (a21 * f - e * a31);
      LD b12 = 0.5 * Et, b13 = 0.5 * Gs;
      LD det2 = -b12 * (b12 * g - f * b13) + b13 * (b12 * f - e * b13);
      LD w = e * g - f * f;
      int k = i * nt + j;
      cf.E[k] = static_cast<double>(e);
      cf.F[k] = static_cast<double>(f);
      cf.G[k] = static_cast<double>(g);
      cf.K[k] = static_cast<double>((det1 - det2) / (w * w));
    }
  }
  cf.max_K = *std::max_element(cf.K.begin(), cf.K.end());
  cf.min_K = *std::min_element(cf.K.begin(), cf.K.end());
  cf.min_det = std::numeric_limits<double>::infinity();
  for (int k = 0; k < ns * nt; ++k) cf.min_det = std::min(cf.min_det, cf.E[k] * cf.G[k] - cf.F[k] * cf.F[k]);
  return cf;
}

Report CurvatureField::check(const std::string& name) const {
  Report r;
  r.name = name;
  r.anchor = "the smoothed surfaces have induced curvature at most -1, strictly below after rescaling";
  r.values["max_K"] = max_K;
  r.values["min_K"] = min_K;
  r.values["min_det"] = min_det;
  r.values["grid_step"] = step;
  r.values["scale"] = scale;
  r.values["bound"] = -1.0 / scale;
  r.tolerances["tol_curv"] = tol_curv();
  r.detail["patch"] = {{"kind", patch.kind == CurvaturePatch::Kind::Polar ? "polar" : "poincare"},
                       {"s", {patch.s0, patch.s1}},
                       {"t", {patch.t0, patch.t1}},
                       {"n", {patch.ns, patch.nt}}};
  r.pass = max_K <= -1.0 / scale + tol_curv();
  return r;
}

std::string CurvatureField::to_csv() const {
  std::ostringstream os;
  os.precision(17);
  os << "s,t,E,F,G,K\n";
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = 0; j < t.size(); ++j) {
      std::size_t k = i * t.size() + j;
      os << s[i] << ',' << t[j] << ',' << E[k] << ',' << F[k] << ',' << G[k] << ',' << K[k] << '\n';
    }
  return os.str();
}

ScaledMetric::ScaledMetric(FunctionPtr u, double lambda) : u_(std::move(u)), lambda_(lambda) {
  if (!(lambda > 0 && lambda < 1)) throw BadLambda("scaling factor must lie in (0,1)");
}

double ScaledMetric::distance_factor() const { return std::sqrt(lambda_); }

CurvatureField ScaledMetric::curvature(const CurvaturePatch& patch) const {
  return induced_curvature(*u_, patch, lambda_);
}

ScaledMetric strictify(FunctionPtr u, double lambda) { return ScaledMetric(std::move(u), lambda); }

}  // namespace adscurv
