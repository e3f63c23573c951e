#include "adscurv/surface.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss.hpp>

#include "adscurv/ads3.hpp"
#include "adscurv/errors.hpp"

namespace adscurv {

H2Point random_disc_point(Rng& rng, double radius) {
  double r = std::acosh(1.0 + uniform01(rng) * (std::cosh(radius) - 1.0));
  return H2Point::polar(r, uniform(rng, 0.0, 2 * M_PI));
}

bool CConvexFunction::gradient(const H2Point&, Vec3&) const { return false; }

double CConvexFunction::chart_height(const Vec2& xbar) const {
  return height_to_chart(value(H2Point::from_klein(xbar)), xbar);
}

double CConvexFunction::directional(const H2Point& y, const Vec3& v, double h) const {
  Vec3 g;
  if (gradient(y, g)) return minkowski(g, v);
  auto at = [&](double s) {
    return value(H2Point::from_vector(y.vec() * std::cosh(s) + v * std::sinh(s)));
  };
  double f0 = value(y), fp = at(h), fm = at(-h);
  double fwd = (fp - f0) / h, bwd = (f0 - fm) / h;
  if (std::abs(fwd - bwd) <= 1e-3 * std::max(1.0, std::abs(fwd) + std::abs(bwd)))
    return 0.5 * (fp - fm) / h;
  // A kink sits inside the stencil: use the one-sided formula on the clean side.
  double fp2 = at(2 * h), fm2 = at(-2 * h);
  double fwd_jump = std::abs((fp2 - fp) / h - fwd);
  double bwd_jump = std::abs((fm - fm2) / h - bwd);
  if (fwd_jump <= bwd_jump) return (-3 * f0 + 4 * fp - fp2) / (2 * h);
  return (3 * f0 - 4 * fm + fm2) / (2 * h);
}

namespace {

class ConstantFunction : public CConvexFunction {
 public:
  explicit ConstantFunction(double R) : R_(R) {}
  double value(const H2Point&) const override { return R_; }
  bool gradient(const H2Point&, Vec3& g) const override {
    g = Vec3{};
    return true;
  }
  double bound() const override { return R_; }
  std::string describe() const override { return "const:" + std::to_string(R_); }

 private:
  double R_;
};

class CallbackFunction : public CConvexFunction {
 public:
  CallbackFunction(std::function<double(const H2Point&)> f, double R, std::string name)
      : f_(std::move(f)), R_(R), name_(std::move(name)) {}
  double value(const H2Point& y) const override { return f_(y); }
  double bound() const override { return R_; }
  std::string describe() const override { return name_; }

 private:
  std::function<double(const H2Point&)> f_;
  double R_;
  std::string name_;
};

class ChartMax : public CConvexFunction {
 public:
  ChartMax(FunctionPtr a, FunctionPtr b) : a_(std::move(a)), b_(std::move(b)) {}
  double value(const H2Point& y) const override { return std::min(a_->value(y), b_->value(y)); }
  bool gradient(const H2Point& y, Vec3& g) const override {
    return a_->value(y) <= b_->value(y) ? a_->gradient(y, g) : b_->gradient(y, g);
  }
  double bound() const override { return std::min(a_->bound(), b_->bound()); }
  std::string describe() const override {
    return "max(" + a_->describe() + "," + b_->describe() + ")";
  }

 private:
  FunctionPtr a_, b_;
};

const std::vector<std::pair<double, double>>& gauss_nodes() {
  static const std::vector<std::pair<double, double>> nodes = [] {
    using G = boost::math::quadrature::gauss<double, 10>;
    std::vector<std::pair<double, double>> out;
    const auto& x = G::abscissa();
    const auto& w = G::weights();
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i] == 0) {
        out.emplace_back(0.0, w[i]);
      } else {
        out.emplace_back(-x[i], w[i]);
        out.emplace_back(x[i], w[i]);
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }();
  return nodes;
}

Vec3 frame_vector(const H2Point& y) {
  Vec3 e{0, 1, 0};
  Vec3 t = e + y.vec() * minkowski(e, y.vec());
  return t * (1.0 / std::sqrt(minkowski(t, t)));
}

}  // namespace

FunctionPtr constant_function(double R) {
  if (!(R >= 0 && R < M_PI / 2)) throw OutOfRange("constant height outside [0, pi/2)");
  return std::make_shared<ConstantFunction>(R);
}

FunctionPtr callback_function(std::function<double(const H2Point&)> f, double R,
                              std::string name) {
  return std::make_shared<CallbackFunction>(std::move(f), R, std::move(name));
}

FunctionPtr chart_max(FunctionPtr a, FunctionPtr b) {
  return std::make_shared<ChartMax>(std::move(a), std::move(b));
}

Vec3 support_vector(double a0, double a1, double a2) {
  Vec3 m{-a0, a1, a2};
  if (!(m.x0 > std::hypot(a1, a2))) throw OutOfRange("plane is not negative on the closed disc");
  return m;
}

SupportEnvelope::SupportEnvelope(std::vector<Vec3> supports, double R, std::string name)
    : m_(std::move(supports)), R_(R), tanR_(std::tan(R)), name_(std::move(name)) {
  if (!(R >= 0 && R < M_PI / 2)) throw OutOfRange("envelope bound outside [0, pi/2)");
  for (const Vec3& m : m_) {
    if (!(minkowski(m, m) < 0 && m.x0 > 0))
      throw OutOfRange("support vector must be future time-like");
  }
}

int SupportEnvelope::active(const H2Point& y, double& best) const {
  best = tanR_;
  int arg = -1;
  for (std::size_t i = 0; i < m_.size(); ++i) {
    double q = -minkowski(m_[i], y.vec());
    if (q < best) {
      best = q;
      arg = static_cast<int>(i);
    }
  }
  return arg;
}

double SupportEnvelope::value(const H2Point& y) const {
  double q;
  int i = active(y, q);
  return i < 0 ? R_ : std::atan(q);
}

bool SupportEnvelope::gradient(const H2Point& y, Vec3& g) const {
  double q;
  int i = active(y, q);
  if (i < 0) {
    g = Vec3{};
    return true;
  }
  const Vec3& m = m_[i];
  Vec3 mt = m + y.vec() * minkowski(m, y.vec());
  g = mt * (-1.0 / (1.0 + q * q));
  return true;
}

double segment_length_u(const CConvexFunction& u, const H2Point& a, const H2Point& b,
                        const QuadratureOptions& q) {
  double L = h2_distance(a, b);
  if (L == 0) return 0;
  Vec3 t = unit_tangent(a, b);
  int panels = std::max(1, static_cast<int>(std::ceil(L / q.panel_length)));
  double hp = L / panels;
  double total = 0;
  for (int p = 0; p < panels; ++p) {
    double mid = (p + 0.5) * hp;
    double acc = 0;
    for (const auto& [x, w] : gauss_nodes()) {
      double s = mid + 0.5 * hp * x;
      double ch = std::cosh(s), sh = std::sinh(s);
      H2Point y = H2Point::from_vector(a.vec() * ch + t * sh);
      Vec3 v = a.vec() * sh + t * ch;
      double uv = u.value(y);
      double du = u.directional(y, v, q.fd_step);
      double c = std::cos(uv);
      double f = c * c - du * du;
      if (f < -1e-10) throw NonSpacelikeSegment("integrand negative along segment");
      acc += w * std::sqrt(std::max(0.0, f));
    }
    total += 0.5 * hp * acc;
  }
  return total;
}

double curve_length(const CConvexFunction& u, const H2Polyline& c, const QuadratureOptions& q) {
  double total = 0;
  const auto& pts = c.points();
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) total += segment_length_u(u, pts[i], pts[i + 1], q);
  return total;
}

Report spacelike_check(const CConvexFunction& u, int samples, std::uint64_t seed,
                       const PointSampler& sampler) {
  Rng rng(seed);
  double min_ratio = std::numeric_limits<double>::infinity();
  H2Point witness;
  for (int i = 0; i < samples; ++i) {
    H2Point y = sampler ? sampler(rng) : random_disc_point(rng, 2.5);
    double uv = u.value(y);
    Vec3 g;
    double grad2;
    if (u.gradient(y, g)) {
      grad2 = std::max(0.0, minkowski(g, g));
    } else {
      Vec3 e1 = frame_vector(y);
      Vec3 e2 = unit_normal(y, e1);
      double p1 = u.directional(y, e1), p2 = u.directional(y, e2);
      grad2 = p1 * p1 + p2 * p2;
    }
    double c = std::cos(uv);
    double r2 = c * c - grad2;
    double ratio = r2 >= 0 ? std::sqrt(r2) : -std::sqrt(-r2);
    if (ratio < min_ratio) {
      min_ratio = ratio;
      witness = y;
    }
  }
  Report r;
  r.name = "spacelike";
  r.anchor = "C-convex graphs are space-like: inf |v|_u / |v|_H2 > 0";
  r.pass = min_ratio > 0;
  r.values["min_ratio"] = min_ratio;
  r.values["samples"] = samples;
  r.detail["witness_klein"] = witness.klein();
  return r;
}

Report cconvex_audit(const CConvexFunction& u, int samples, std::uint64_t seed) {
  Rng rng(seed);
  auto disc = [&]() {
    double r = 0.999 * std::sqrt(uniform01(rng)), a = uniform(rng, 0, 2 * M_PI);
    return Vec2{r * std::cos(a), r * std::sin(a)};
  };
  double R = u.bound();
  double worst_bound = 0, worst_convex = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < samples; ++i) {
    Vec2 a = disc(), b = disc();
    double ua = u.value(H2Point::from_klein(a));
    worst_bound = std::max({worst_bound, -ua, ua - R});
    Vec2 m{0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])};
    double gap = u.chart_height(m) - 0.5 * (u.chart_height(a) + u.chart_height(b));
    worst_convex = std::max(worst_convex, gap);
  }
  double worst_edge = 0;
  bool decaying = true;
  for (int k = 0; k < 16; ++k) {
    double ang = 2 * M_PI * k / 16;
    double prev = std::numeric_limits<double>::infinity();
    for (double r : {0.9, 0.99, 0.999, 0.9999, 1 - 1e-6, 1 - 1e-9, 1 - 1e-12}) {
      double v = std::abs(u.chart_height({r * std::cos(ang), r * std::sin(ang)}));
      if (v > prev + 1e-12) decaying = false;
      prev = v;
    }
    worst_edge = std::max(worst_edge, prev);
  }
  Report r;
  r.name = "cconvex";
  r.anchor = "0 <= u <= R, chart graph convex, chart graph vanishes on the boundary circle";
  r.values["bound_violation"] = worst_bound;
  r.values["midpoint_gap"] = worst_convex;
  r.values["boundary_height"] = worst_edge;
  r.tolerances["bound"] = 1e-12;
  r.tolerances["midpoint"] = 1e-10;
  r.tolerances["boundary"] = 1e-3;
  r.pass = worst_bound <= 1e-12 && worst_convex <= 1e-10 && worst_edge <= 1e-3 && decaying;
  return r;
}

Report length_convergence_check(const std::vector<FunctionPtr>& u_seq, const CConvexFunction& u_limit,
                                const H2Polyline& c, double threshold, double R,
                                const QuadratureOptions& q) {
  if (!(R < M_PI / 2)) throw NotUniformlyBounded("common bound must be below pi/2");
  for (std::size_t n = 0; n < u_seq.size(); ++n) {
    for (std::size_t i = 0; i < c.segments(); ++i) {
      for (int k = 0; k <= 16; ++k) {
        double v = u_seq[n]->value(c.at(i, c.segment_length(i) * k / 16.0));
        if (v > R + 1e-12)
          throw NotUniformlyBounded("sequence element " + std::to_string(n + 1) + " exceeds R");
      }
    }
  }
  double limit = curve_length(u_limit, c, q);
  std::vector<double> diffs;
  for (const auto& un : u_seq) diffs.push_back(std::abs(curve_length(*un, c, q) - limit));
  bool monotone = true;
  std::size_t tail = diffs.size() - diffs.size() / 4;
  for (std::size_t i = std::max<std::size_t>(tail, 1); i < diffs.size(); ++i)
    if (diffs[i] > diffs[i - 1] + 1e-15 * limit) monotone = false;
  Report r;
  r.name = "length_convergence";
  r.anchor = "L_{u_n}(c) -> L_u(c) for uniformly bounded u_n -> u";
  r.values["limit_length"] = limit;
  r.values["last_difference"] = diffs.empty() ? 0 : diffs.back();
  r.values["terms"] = static_cast<double>(diffs.size());
  r.tolerances["threshold"] = threshold;
  r.detail["differences"] = diffs;
  r.pass = !diffs.empty() && diffs.back() < threshold && monotone;
  return r;
}

}  // namespace adscurv
