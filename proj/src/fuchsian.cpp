#include "adscurv/fuchsian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "adscurv/errors.hpp"

namespace adscurv {

namespace {

// Hyperboloid point <-> symmetric matrix [[x0+x1, x2], [x2, x0-x1]], acted on by A P A^T.
std::array<double, 9> so21_of(const std::array<double, 4>& m) {
  const double a = m[0], b = m[1], c = m[2], d = m[3];
  auto image = [&](double p00, double p01, double p11) {
    double q00 = a * a * p00 + 2 * a * b * p01 + b * b * p11;
    double q01 = a * c * p00 + (a * d + b * c) * p01 + b * d * p11;
    double q11 = c * c * p00 + 2 * c * d * p01 + d * d * p11;
    return Vec3{0.5 * (q00 + q11), 0.5 * (q00 - q11), q01};
  };
  Vec3 c0 = image(1, 0, 1), c1 = image(1, 0, -1), c2 = image(0, 1, 0);
  return {c0.x0, c1.x0, c2.x0, c0.x1, c1.x1, c2.x1, c0.x2, c1.x2, c2.x2};
}

const H2Point& base_point() {
  static const H2Point p = H2Point::polar(0.3, 0.7);
  return p;
}

}  // namespace

Mobius::Mobius(double a, double b, double c, double d) {
  double det = a * d - b * c;
  if (!(det > 0)) throw OutOfRange("Mobius matrix needs positive determinant");
  double s = 1.0 / std::sqrt(det);
  m_ = {a * s, b * s, c * s, d * s};
  so_ = so21_of(m_);
  abs_trace_ = std::abs(m_[0] + m_[3]);
}

Mobius Mobius::translation(double angle, double length) {
  double e = std::exp(0.5 * length);
  return rotation(angle) * Mobius(e, 0, 0, 1.0 / e) * rotation(-angle);
}

Mobius Mobius::rotation(double angle) {
  double c = std::cos(0.5 * angle), s = std::sin(0.5 * angle);
  return Mobius(c, -s, s, c);
}

Mobius Mobius::operator*(const Mobius& o) const {
  const auto& p = m_;
  const auto& q = o.m_;
  return Mobius(p[0] * q[0] + p[1] * q[2], p[0] * q[1] + p[1] * q[3],
                p[2] * q[0] + p[3] * q[2], p[2] * q[1] + p[3] * q[3]);
}

Mobius Mobius::inverse() const { return Mobius(m_[3], -m_[1], -m_[2], m_[0]); }

Vec3 Mobius::apply(const Vec3& v) const {
  const auto& s = so_;
  return {s[0] * v.x0 + s[1] * v.x1 + s[2] * v.x2, s[3] * v.x0 + s[4] * v.x1 + s[5] * v.x2,
          s[6] * v.x0 + s[7] * v.x1 + s[8] * v.x2};
}

H2Point Mobius::apply(const H2Point& p) const {
  Vec3 v = apply(p.vec());
  return H2Point::from_spatial(v.x1, v.x2);
}

double Mobius::frobenius() const {
  return std::sqrt(m_[0] * m_[0] + m_[1] * m_[1] + m_[2] * m_[2] + m_[3] * m_[3]);
}

double Mobius::sign_distance(const Mobius& o) const {
  double plus = 0, minus = 0;
  for (int i = 0; i < 4; ++i) {
    plus += (m_[i] - o.m_[i]) * (m_[i] - o.m_[i]);
    minus += (m_[i] + o.m_[i]) * (m_[i] + o.m_[i]);
  }
  return std::sqrt(std::min(plus, minus));
}

double translation_length(const Mobius& sigma) {
  double t = sigma.abs_trace();
  if (!(t > 2.0 + 1e-10)) throw NotHyperbolic("element is not hyperbolic");
  return 2.0 * std::acosh(0.5 * t);
}

ElementSet::ElementSet(double rel_tol) : tol_(rel_tol) {}

namespace {
constexpr long long kAngleBuckets = 400;
}

std::array<long long, 2> ElementSet::key(const Mobius& m) const {
  H2Point q = m.apply(base_point());
  double r = std::log(q.x0());
  double ang = std::atan2(q.x2(), q.x1()) + M_PI;
  long long ak = static_cast<long long>(std::floor(ang / (2 * M_PI) * kAngleBuckets));
  return {static_cast<long long>(std::floor(r * 100)), ((ak % kAngleBuckets) + kAngleBuckets) % kAngleBuckets};
}

int ElementSet::find(const Mobius& m) const {
  auto k = key(m);
  double scale = m.frobenius();
  for (long long dr = -1; dr <= 1; ++dr) {
    for (long long da = -1; da <= 1; ++da) {
      std::array<long long, 2> kk{k[0] + dr, ((k[1] + da) % kAngleBuckets + kAngleBuckets) % kAngleBuckets};
      auto it = buckets_.find(kk);
      if (it == buckets_.end()) continue;
      for (int idx : it->second)
        if (items_[idx].sign_distance(m) < tol_ * scale) return idx;
    }
  }
  return -1;
}

int ElementSet::insert(const Mobius& m, bool* inserted) {
  int idx = find(m);
  if (inserted) *inserted = idx < 0;
  if (idx >= 0) return idx;
  items_.push_back(m);
  buckets_[key(m)].push_back(static_cast<int>(items_.size()) - 1);
  return static_cast<int>(items_.size()) - 1;
}

FuchsianGroup::FuchsianGroup(std::vector<Mobius> generators, int genus, std::vector<int> relator,
                             int max_ball_radius)
    : gens_(std::move(generators)), genus_(genus), relator_(std::move(relator)),
      max_radius_(max_ball_radius) {
  if (gens_.empty()) throw InputError("group needs generators");
  for (const auto& g : gens_)
    if (!(g.abs_trace() > 2.0 + 1e-10)) throw NotHyperbolic("generator is not hyperbolic");
  for (int l : relator_)
    if (l == 0 || std::abs(l) > static_cast<int>(gens_.size()))
      throw InputError("relator letter out of range");
}

Mobius FuchsianGroup::word(const std::vector<int>& letters) const {
  Mobius w;
  for (int l : letters) {
    const Mobius& g = gens_[std::abs(l) - 1];
    w = w * (l > 0 ? g : g.inverse());
  }
  return w;
}

double FuchsianGroup::relator_residual() const {
  return word(relator_).sign_distance(Mobius());
}

const std::vector<Mobius>& FuchsianGroup::ball(int radius) const {
  if (radius < 0) throw OutOfRange("negative ball radius");
  if (radius > max_radius_) throw BallTooLarge("ball radius exceeds the configured cap");
  std::lock_guard<std::mutex> lock(mutex_);
  auto it = balls_.find(radius);
  if (it != balls_.end()) return it->second;

  const int n = static_cast<int>(gens_.size());
  std::vector<Mobius> letters;
  for (int k = 0; k < n; ++k) letters.push_back(gens_[k]);
  for (int k = 0; k < n; ++k) letters.push_back(gens_[k].inverse());
  auto inverse_letter = [n](int l) { return l < n ? l + n : l - n; };

  ElementSet set;
  set.insert(Mobius());
  std::vector<std::pair<int, int>> frontier{{0, -1}};  // element index, last letter
  for (int level = 1; level <= radius; ++level) {
    std::vector<std::pair<int, int>> next;
    for (auto [idx, last] : frontier) {
      for (int l = 0; l < 2 * n; ++l) {
        if (last >= 0 && l == inverse_letter(last)) continue;
        bool inserted = false;
        Mobius cand = set.elements()[idx] * letters[l];
        int j = set.insert(cand, &inserted);
        if (inserted) next.push_back({j, l});
      }
    }
    frontier = std::move(next);
  }
  return balls_.emplace(radius, set.elements()).first->second;
}

double FuchsianGroup::systole(int radius) const {
  const auto& b = ball(radius);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < b.size(); ++i) best = std::min(best, translation_length(b[i]));
  return best;
}

void FuchsianGroup::set_polygon(std::vector<H2Point> corners, std::vector<Mobius> neighbors) {
  if (corners.size() != neighbors.size() || corners.size() < 3)
    throw InputError("polygon needs one neighbor element per side");
  polygon_ = std::move(corners);
  neighbors_ = std::move(neighbors);
  H2Point o;
  circumradius_ = 0;
  inradius_ = std::numeric_limits<double>::infinity();
  const std::size_t n = polygon_.size();
  for (std::size_t k = 0; k < n; ++k) {
    circumradius_ = std::max(circumradius_, h2_distance(o, polygon_[k]));
    inradius_ = std::min(inradius_, segment_distance(o, polygon_[(k + n - 1) % n], polygon_[k]));
  }
}

double FuchsianGroup::side_length() const {
  return h2_distance(polygon_.back(), polygon_.front());
}

double FuchsianGroup::area() const {
  double a = 0;
  H2Point o;
  const std::size_t n = polygon_.size();
  for (std::size_t k = 0; k < n; ++k) {
    const H2Point& p = polygon_[(k + n - 1) % n];
    const H2Point& q = polygon_[k];
    a += triangle_area(comparison_triangle(h2_distance(o, p), h2_distance(o, q), h2_distance(p, q)));
  }
  return a;
}

bool FuchsianGroup::in_polygon(const H2Point& p, double tol) const {
  if (!has_polygon()) throw InputError("group has no fundamental polygon");
  H2Point o;
  double d0 = h2_distance(p, o);
  for (const auto& nb : neighbors_)
    if (h2_distance(p, nb.apply(o)) < d0 - tol) return false;
  return true;
}

H2Point FuchsianGroup::reduce(const H2Point& p, Mobius* sigma) const {
  if (!has_polygon()) throw InputError("group has no fundamental polygon");
  H2Point o, cur = p;
  Mobius acc;
  for (int iter = 0; iter < 10000; ++iter) {
    double d0 = h2_distance(cur, o);
    int best = -1;
    double best_d = d0 - 1e-14;
    for (std::size_t j = 0; j < neighbors_.size(); ++j) {
      double dj = h2_distance(cur, neighbors_[j].apply(o));
      if (dj < best_d) {
        best_d = dj;
        best = static_cast<int>(j);
      }
    }
    if (best < 0) {
      if (sigma) *sigma = acc;
      return cur;
    }
    Mobius step = neighbors_[best].inverse();
    cur = step.apply(cur);
    acc = step * acc;
  }
  throw OutOfRange("reduction into the polygon did not terminate");
}

std::vector<Mobius> FuchsianGroup::elements_within(double radius) const {
  if (!has_polygon()) throw InputError("group has no fundamental polygon");
  H2Point o;
  const double reach = radius + circumradius_ + 1e-9;
  ElementSet set;
  set.insert(Mobius());
  std::queue<int> queue;
  queue.push(0);
  while (!queue.empty()) {
    int idx = queue.front();
    queue.pop();
    for (const auto& nb : neighbors_) {
      Mobius cand = set.elements()[idx] * nb;
      if (h2_distance(o, cand.apply(o)) > reach) continue;
      bool inserted = false;
      int j = set.insert(cand, &inserted);
      if (inserted) queue.push(j);
    }
  }
  std::vector<std::pair<double, int>> order;
  for (std::size_t i = 0; i < set.elements().size(); ++i) {
    double d = h2_distance(o, set.elements()[i].apply(o));
    if (d <= radius) order.push_back({d, static_cast<int>(i)});
  }
  std::sort(order.begin(), order.end());
  std::vector<Mobius> out;
  out.reserve(order.size());
  for (auto& [d, i] : order) out.push_back(set.elements()[i]);
  return out;
}

GroupPtr genus2_octagon_group() {
  static const GroupPtr group = [] {
    const double inradius = std::acosh(1.0 + std::sqrt(2.0));
    const double circum = std::acosh(3.0 + 2.0 * std::sqrt(2.0));
    std::vector<Mobius> gens;
    for (int k = 0; k < 4; ++k) gens.push_back(Mobius::translation(k * M_PI / 4, 2 * inradius));
    auto g = std::make_shared<FuchsianGroup>(gens, 2, std::vector<int>{1, -2, 3, -4, -1, 2, -3, 4});
    std::vector<H2Point> corners;
    std::vector<Mobius> neighbors;
    for (int k = 0; k < 8; ++k) {
      corners.push_back(H2Point::polar(circum, (2 * k + 1) * M_PI / 8));
      neighbors.push_back(k < 4 ? gens[k] : gens[k - 4].inverse());
    }
    g->set_polygon(std::move(corners), std::move(neighbors));
    return g;
  }();
  return group;
}

HyperbolicQuotient::HyperbolicQuotient(GroupPtr group, double scale)
    : group_(std::move(group)), scale_(scale) {
  H2Point o;
  elements_ = group_->elements_within(4 * group_->circumradius());
  for (const auto& e : elements_) shift_.push_back(h2_distance(o, e.apply(o)));
}

double HyperbolicQuotient::distance(const H2Point& x, const H2Point& y) const {
  H2Point o;
  H2Point xr = group_->reduce(x), yr = group_->reduce(y);
  double dx = h2_distance(o, xr), dy = h2_distance(o, yr);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < elements_.size(); ++i) {
    if (shift_[i] - dx - dy > best) break;
    best = std::min(best, h2_distance(xr, elements_[i].apply(yr)));
  }
  return scale_ * best;
}

namespace {

FunctionPtr envelope_from(const std::vector<Mobius>& elements, const std::vector<OrbitSeed>& seeds,
                          double R, double region_radius, const std::string& name) {
  H2Point o;
  std::vector<Vec3> supports;
  const double tr = std::tan(R);
  for (const auto& s : seeds) {
    if (!(s.scale > 0)) throw OutOfRange("orbit seed scale must be positive");
    if (tr / s.scale <= 1.0) continue;
    double reach = region_radius + std::acosh(tr / s.scale);
    for (const auto& e : elements) {
      H2Point q = e.apply(s.point);
      if (h2_distance(o, q) < reach) supports.push_back(q.vec() * s.scale);
    }
  }
  return std::make_shared<SupportEnvelope>(std::move(supports), R, name);
}

}  // namespace

FunctionPtr orbit_envelope(const FuchsianGroup& g, const std::vector<OrbitSeed>& seeds,
                           int ball_radius, double R, double region_radius) {
  return envelope_from(g.ball(ball_radius), seeds, R, region_radius,
                       "orbit-envelope:r=" + std::to_string(ball_radius));
}

FunctionPtr orbit_envelope_complete(const FuchsianGroup& g, const std::vector<OrbitSeed>& seeds,
                                    double R, double region_radius) {
  H2Point o;
  double reach = 0;
  for (const auto& s : seeds) {
    double tr = std::tan(R) / s.scale;
    if (tr > 1) reach = std::max(reach, std::acosh(tr) + h2_distance(o, s.point));
  }
  return envelope_from(g.elements_within(region_radius + reach), seeds, R, region_radius,
                       "orbit-envelope");
}

H2Point random_polygon_point(const FuchsianGroup& g, Rng& rng) {
  for (;;) {
    H2Point p = random_disc_point(rng, g.circumradius());
    if (g.in_polygon(p)) return p;
  }
}

FuchsianCConvex random_orbit_envelope(GroupPtr g, std::uint64_t seed, double region_radius) {
  Rng rng(seed);
  double R = uniform(rng, 0.7, 1.2);
  int count = 1 + static_cast<int>(rng() % 2);
  std::vector<OrbitSeed> seeds;
  for (int i = 0; i < count; ++i) {
    H2Point p = random_polygon_point(*g, rng);
    double scale = std::max(0.25, std::tan(R) * uniform(rng, 0.3, 0.8));
    seeds.push_back({p, scale});
  }
  FuchsianCConvex fc;
  fc.u = orbit_envelope_complete(*g, seeds, R, region_radius);
  fc.group = std::move(g);
  return fc;
}

Report invariance_check(const FuchsianCConvex& fc, int samples, std::uint64_t seed) {
  Report r;
  r.name = "invariance";
  r.anchor = "a Fuchsian C-convex function satisfies u o s = u for every group element";
  Rng rng(seed);
  const auto& gens = fc.group->generators();
  double sup = 0, sup_u = 0;
  nlohmann::json witness;
  for (int i = 0; i < samples; ++i) {
    H2Point x = fc.group->has_polygon() ? random_polygon_point(*fc.group, rng)
                                        : random_disc_point(rng, 2.0);
    double ux = fc.u->value(x);
    sup_u = std::max(sup_u, ux);
    for (std::size_t k = 0; k < gens.size(); ++k) {
      for (int sgn = 0; sgn < 2; ++sgn) {
        Mobius s = sgn ? gens[k].inverse() : gens[k];
        double v = std::abs(ux - fc.u->value(s.apply(x)));
        if (v > sup) {
          sup = v;
          witness = {{"point", {x.x0(), x.x1(), x.x2()}},
                     {"generator", sgn ? -static_cast<int>(k + 1) : static_cast<int>(k + 1)}};
        }
      }
    }
  }
  r.values["sup_violation"] = sup;
  r.values["sup_u"] = sup_u;
  r.values["margin_to_half_pi"] = M_PI / 2 - sup_u;
  r.tolerances["invariance"] = fc.tolerance;
  r.detail["samples"] = samples;
  r.detail["seed"] = seed;
  r.detail["witness"] = witness;
  r.pass = sup < fc.tolerance;
  return r;
}

GeodesicMesh tiled_mesh(const FuchsianGroup& g, int ball_radius, double h, double neighbor_factor) {
  if (!g.has_polygon()) throw InputError("group has no fundamental polygon");
  H2Point o;
  const auto& poly = g.polygon();
  const std::size_t n = poly.size();
  std::vector<std::array<H2Point, 3>> seeds;
  for (const auto& s : g.ball(ball_radius)) {
    H2Point c = s.apply(o);
    for (std::size_t k = 0; k < n; ++k)
      seeds.push_back({c, s.apply(poly[k]), s.apply(poly[(k + 1) % n])});
  }
  return GeodesicMesh::from_triangles(seeds, h, neighbor_factor);
}

double quotient_distance(const FuchsianCConvex& fc, const InducedDistanceField& field,
                         const H2Point& x, const H2Point& y, int ball_radius, double K) {
  const FuchsianGroup& g = *fc.group;
  const auto& ball = g.ball(ball_radius);
  std::vector<double> row = field.point_row(x);
  double best = std::numeric_limits<double>::infinity();
  double uncovered = std::numeric_limits<double>::infinity();
  for (const auto& s : ball) {
    H2Point z = s.apply(y);
    try {
      best = std::min(best, field.point_to_row(row, z));
    } catch (const OutOfRange&) {
      uncovered = std::min(uncovered, K * h2_distance(x, z));
    }
  }
  if (!std::isfinite(best)) throw BallInsufficient("no translate of y is covered by the mesh");
  if (!(uncovered > best))
    throw BallInsufficient("an uncovered translate could beat the current minimum");
  if (g.has_polygon()) {
    ElementSet index;
    for (const auto& s : ball) index.insert(s);
    const auto& poly = g.polygon();
    const std::size_t n = poly.size();
    double boundary = std::numeric_limits<double>::infinity();
    for (const auto& s : ball) {
      for (std::size_t j = 0; j < n; ++j) {
        if (index.find(s * g.side_neighbor(static_cast<int>(j))) >= 0) continue;
        boundary = std::min(boundary, segment_distance(x, s.apply(poly[(j + n - 1) % n]),
                                                       s.apply(poly[j])));
      }
    }
    if (!(K * boundary > best))
      throw BallInsufficient("omitted translates are not provably farther at this radius");
  }
  return best;
}

}  // namespace adscurv
