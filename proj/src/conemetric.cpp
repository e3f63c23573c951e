#include "adscurv/conemetric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <queue>
#include <sstream>
#include <unordered_map>

#include "adscurv/errors.hpp"
#include "adscurv/parallel.hpp"

namespace adscurv {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

int side_of(const MetricTriangulation& mt, int t, int e) {
  for (int j = 0; j < 3; ++j)
    if (mt.triangle_edges[t][j] == e) return j;
  return -1;
}

double side_len(const MetricTriangulation& mt, int t, int j) {
  return mt.edge_length[mt.triangle_edges[t][j]];
}

// Unit tangent angle at p between directions to a and b.
double angle_at(const H2Point& p, const H2Point& a, const H2Point& b) {
  Vec3 ta = unit_tangent(p, a), tb = unit_tangent(p, b);
  return std::acos(std::clamp(minkowski(ta, tb), -1.0, 1.0));
}

// Distance between the points at distances a, b along two rays meeting at angle theta.
double sas_distance(double a, double b, double theta) {
  double h = std::sinh(0.5 * (a - b));
  double s = std::sin(0.5 * theta);
  double v = h * h + std::sinh(a) * std::sinh(b) * s * s;
  return 2 * std::asinh(std::sqrt(std::max(0.0, v)));
}

}  // namespace

// ---------------------------------------------------------------- triangulation

int MetricTriangulation::euler_characteristic() const {
  return num_vertices - static_cast<int>(edges.size()) + static_cast<int>(triangles.size());
}

bool MetricTriangulation::closed() const {
  std::vector<int> uses(edges.size(), 0);
  for (const auto& te : triangle_edges)
    for (int e : te)
      if (e >= 0 && e < static_cast<int>(uses.size())) ++uses[e];
  return std::all_of(uses.begin(), uses.end(), [](int u) { return u == 2; });
}

void MetricTriangulation::build_edges_from_vertices() {
  edges.clear();
  triangle_edges.assign(triangles.size(), {-1, -1, -1});
  edge_sign.assign(triangles.size(), {1, 1, 1});
  std::map<std::pair<int, int>, int> index;
  for (std::size_t t = 0; t < triangles.size(); ++t) {
    for (int j = 0; j < 3; ++j) {
      int a = triangles[t][(j + 1) % 3], b = triangles[t][(j + 2) % 3];
      if (a == b) throw InputError("triangle " + std::to_string(t) + " has a loop side");
      auto key = std::minmax(a, b);
      auto it = index.find(key);
      int e;
      if (it == index.end()) {
        e = static_cast<int>(edges.size());
        index.emplace(key, e);
        edges.push_back({key.first, key.second});
      } else {
        e = it->second;
      }
      triangle_edges[t][j] = e;
      edge_sign[t][j] = (edges[e][0] == a) ? 1 : -1;
    }
  }
}

void MetricTriangulation::validate() const {
  int T = static_cast<int>(triangles.size());
  int E = static_cast<int>(edges.size());
  if (num_vertices <= 0 || T == 0) throw InputError("empty triangulation");
  if (static_cast<int>(triangle_edges.size()) != T || static_cast<int>(edge_sign.size()) != T)
    throw InputError("triangle edge tables do not match the triangle count");
  if (static_cast<int>(edge_length.size()) != E)
    throw InputError("edge length table does not match the edge count");
  for (int e = 0; e < E; ++e) {
    for (int v : edges[e])
      if (v < 0 || v >= num_vertices) throw InputError("edge " + std::to_string(e) + " has a bad vertex");
    if (!(edge_length[e] > 0) || !std::isfinite(edge_length[e]))
      throw InputError("edge " + std::to_string(e) + " has a non-positive length");
  }
  for (int t = 0; t < T; ++t) {
    for (int j = 0; j < 3; ++j) {
      int v = triangles[t][j];
      if (v < 0 || v >= num_vertices) throw InputError("triangle " + std::to_string(t) + " has a bad vertex");
      int e = triangle_edges[t][j];
      if (e < 0 || e >= E) throw InputError("triangle " + std::to_string(t) + " has a bad edge");
      int a = triangles[t][(j + 1) % 3], b = triangles[t][(j + 2) % 3];
      int s = edge_sign[t][j];
      bool ok = (s == 1 && edges[e][0] == a && edges[e][1] == b) ||
                (s == -1 && edges[e][0] == b && edges[e][1] == a);
      if (!ok) throw InputError("triangle " + std::to_string(t) + " side " + std::to_string(j) +
                                " disagrees with its edge");
    }
  }
  for (int t = 0; t < T; ++t) {
    double a = side_len(*this, t, 0), b = side_len(*this, t, 1), c = side_len(*this, t, 2);
    if (!(a < b + c && b < a + c && c < a + b))
      throw BadTriangle(t, "triangle " + std::to_string(t) + " violates the strict triangle inequality");
  }
  if (closed()) {
    if (2 * E != 3 * T) throw InputError("closed surface needs 2|E| = 3|T|");
    if (euler_characteristic() != 2 - 2 * genus)
      throw InputError("Euler characteristic " + std::to_string(euler_characteristic()) +
                       " does not match genus " + std::to_string(genus));
  }
}

// ---------------------------------------------------------------- cone surface

double ConeSurface::total_excess() const { return std::accumulate(excess.begin(), excess.end(), 0.0); }

double ConeSurface::euler_identity_residual() const {
  double defect = 0;
  for (std::size_t v = 0; v < cone_angle.size(); ++v)
    if (interior[v]) defect += cone_angle[v] - 2 * M_PI;
  return total_excess() - defect - 2 * M_PI * euler_characteristic();
}

ConeSurface build_cone_surface(const MetricTriangulation& mt) {
  mt.validate();
  ConeSurface cs;
  cs.mt = mt;
  std::size_t T = mt.triangles.size();
  cs.shapes.resize(T);
  cs.corner_angles.resize(T);
  cs.excess.resize(T);
  cs.area.resize(T);
  cs.cone_angle.assign(mt.num_vertices, 0.0);
  cs.interior.assign(mt.num_vertices, true);
  for (std::size_t t = 0; t < T; ++t) {
    TriangleShape s;
    try {
      s = comparison_triangle(side_len(mt, t, 2), side_len(mt, t, 1), side_len(mt, t, 0));
    } catch (const DegenerateTriangle& e) {
      throw BadTriangle(static_cast<int>(t), e.what());
    }
    cs.shapes[t] = s;
    cs.corner_angles[t] = {s.alpha, s.beta, s.gamma};
    cs.excess[t] = s.excess();
    cs.area[t] = triangle_area(s);
    for (int k = 0; k < 3; ++k) cs.cone_angle[mt.triangles[t][k]] += cs.corner_angles[t][k];
  }
  std::vector<int> uses(mt.edges.size(), 0);
  for (const auto& te : mt.triangle_edges)
    for (int e : te) ++uses[e];
  for (std::size_t e = 0; e < uses.size(); ++e)
    if (uses[e] != 2) cs.interior[mt.edges[e][0]] = cs.interior[mt.edges[e][1]] = false;
  return cs;
}

Report cone_angle_check(const ConeSurface& cs) {
  Report r;
  r.name = "cone_angles";
  r.anchor = "every interior vertex of the comparison surface has cone angle at least 2 pi";
  double worst = kInf;
  int witness = -1, interior = 0;
  for (std::size_t v = 0; v < cs.cone_angle.size(); ++v) {
    if (!cs.interior[v]) continue;
    ++interior;
    if (cs.cone_angle[v] < worst) {
      worst = cs.cone_angle[v];
      witness = static_cast<int>(v);
    }
  }
  r.values["min_cone_angle"] = interior ? worst : 2 * M_PI;
  r.values["min_margin"] = interior ? worst - 2 * M_PI : 0.0;
  r.values["interior_vertices"] = interior;
  r.tolerances["margin"] = 1e-8;
  r.pass = interior == 0 || worst >= 2 * M_PI - 1e-8;
  r.detail["witness_vertex"] = witness;
  return r;
}

Report excess_budget(const ConeSurface& cs) {
  Report r;
  r.name = "excess_budget";
  r.anchor = "total angle excess of the comparison triangles is at least 2 pi chi";
  int chi = cs.euler_characteristic();
  double total = cs.total_excess();
  bool closed = cs.mt.closed();
  r.values["total_excess"] = total;
  r.values["euler_characteristic"] = chi;
  r.values["bound"] = 2 * M_PI * chi;
  r.values["margin"] = total - 2 * M_PI * chi;
  r.values["identity_residual"] = std::abs(cs.euler_identity_residual());
  r.tolerances["margin"] = 1e-8;
  r.pass = closed && total >= 2 * M_PI * chi - 1e-8;
  r.detail["closed"] = closed;
  return r;
}

Report angle_gap_check(double alpha_source, const TriangleShape& shape, int corner,
                       double source_excess) {
  if (corner < 0 || corner > 2) throw OutOfRange("corner must be 0, 1 or 2");
  double comp = corner == 0 ? shape.alpha : corner == 1 ? shape.beta : shape.gamma;
  double gap = comp - alpha_source;
  double bound = -triangle_area(shape) - source_excess;
  Report r;
  r.name = "angle_gap";
  r.anchor = "comparison angle minus source angle is at most -area(comparison) - source excess";
  r.values["gap"] = gap;
  r.values["bound"] = bound;
  r.values["margin"] = bound - gap;
  r.tolerances["margin"] = 1e-8;
  r.pass = gap <= bound + 1e-8;
  return r;
}

// ---------------------------------------------------------------- sources

H2Point SourceMetric::along(const H2Point& a, const H2Point& b, double s) const {
  double total = local_distance(a, b);
  if (s <= 0) return a;
  if (s >= total) return b;
  double lo = 0, hi = 1;
  for (int it = 0; it < 60; ++it) {
    double mid = 0.5 * (lo + hi);
    (local_distance(a, lerp(a, b, mid)) < s ? lo : hi) = mid;
  }
  return lerp(a, b, 0.5 * (lo + hi));
}

double SourceMetric::angle(const H2Point& o, const H2Point& x, const H2Point& y) const {
  double eps = std::min(local_distance(o, x), local_distance(o, y));
  auto at = [&](double t) {
    H2Point a = along(o, x, t), b = along(o, y, t);
    return comparison_angle(t, t, local_distance(a, b));
  };
  double t = eps / 4;
  double a1 = at(t), a2 = at(t / 2), a3 = at(t / 4);
  double r1 = (4 * a2 - a1) / 3, r2 = (4 * a3 - a2) / 3;
  return (16 * r2 - r1) / 15;
}

double SourceMetric::injectivity_estimate() const {
  return 0.5 * group().systole(3) * std::min(1.0, lower_ratio());
}

ScaledHyperbolicSource::ScaledHyperbolicSource(GroupPtr group, double scale)
    : group_(std::move(group)), scale_(scale), quotient_(group_, scale) {
  if (!(scale > 0) || scale > 1) throw OutOfRange("source scale must lie in (0, 1]");
}

double ScaledHyperbolicSource::local_distance(const H2Point& x, const H2Point& y) const {
  return scale_ * h2_distance(x, y);
}

double ScaledHyperbolicSource::distance(const H2Point& x, const H2Point& y) const {
  return quotient_.distance(x, y);
}

std::string ScaledHyperbolicSource::describe() const {
  std::ostringstream os;
  os.precision(17);
  os << "scaled_hyperbolic(" << scale_ << ")";
  return os.str();
}

H2Point ScaledHyperbolicSource::along(const H2Point& a, const H2Point& b, double s) const {
  if (s <= 0) return a;
  return exp_map(a, unit_tangent(a, b), s / scale_);
}

double ScaledHyperbolicSource::angle(const H2Point& o, const H2Point& x, const H2Point& y) const {
  return angle_at(o, x, y);
}

InducedSource::InducedSource(FuchsianCConvex fc, std::shared_ptr<const InducedDistanceField> field,
                             double K, int ball_radius)
    : fc_(std::move(fc)), field_(std::move(field)), K_(K), ball_radius_(ball_radius) {
  if (!(K > 0 && K <= 1)) throw OutOfRange("lower ratio must lie in (0, 1]");
}

double InducedSource::local_distance(const H2Point& x, const H2Point& y) const {
  return field_->point_distance(x, y);
}

double InducedSource::distance(const H2Point& x, const H2Point& y) const {
  return quotient_distance(fc_, *field_, x, y, ball_radius_, K_);
}

double InducedSource::tolerance() const { return 5 * field_->mesh().h; }

std::string InducedSource::describe() const { return "induced(" + fc_.u->describe() + ")"; }

// ---------------------------------------------------------------- chord comparison

Report chord_comparison_check(const SourceMetric& source, const ConeSurface& cs, int triangles,
                              int pairs_per_triangle, std::uint64_t seed) {
  const auto& mt = cs.mt;
  if (mt.triangle_lifts.size() != mt.triangles.size())
    throw InputError("chord comparison needs lifted triangles");
  Rng rng(seed);
  double eps = mt.epsilon;
  double tol = 1e-9 + 4 * source.tolerance();
  double min_gap = kInf, max_gap = -kInf, worst_over = -kInf;
  int samples = 0, witness = -1;
  int T = static_cast<int>(mt.triangles.size());
  for (int n = 0; n < triangles; ++n) {
    int t = static_cast<int>(rng() % T);
    int c = static_cast<int>(rng() % 3);
    const auto& L = mt.triangle_lifts[t];
    const H2Point &O = L[c], &X = L[(c + 1) % 3], &Y = L[(c + 2) % 3];
    double ox = source.local_distance(O, X), oy = source.local_distance(O, Y);
    double src_excess = source.angle(L[0], L[1], L[2]) + source.angle(L[1], L[2], L[0]) +
                        source.angle(L[2], L[0], L[1]) - M_PI;
    double bound = -src_excess * std::sinh(eps);
    double theta = cs.corner_angles[t][c];
    for (int p = 0; p < pairs_per_triangle; ++p) {
      double a = uniform(rng, 0, ox), b = uniform(rng, 0, oy);
      double dcomp = sas_distance(a, b, theta);
      double dsrc = source.local_distance(source.along(O, X, a), source.along(O, Y, b));
      double gap = dcomp - dsrc;
      min_gap = std::min(min_gap, gap);
      max_gap = std::max(max_gap, gap);
      if (gap - bound > worst_over) {
        worst_over = gap - bound;
        witness = t;
      }
      ++samples;
    }
  }
  Report r;
  r.name = "chord_comparison";
  r.anchor = "chords of the comparison triangle exceed source chords by at most -excess sinh(eps)";
  r.values["min_gap"] = min_gap;
  r.values["max_gap"] = max_gap;
  r.values["max_excess_over_bound"] = worst_over;
  r.values["samples"] = samples;
  r.values["epsilon"] = eps;
  r.tolerances["gap"] = tol;
  r.pass = samples > 0 && min_gap >= -tol && worst_over <= tol;
  r.detail["witness_triangle"] = witness;
  return r;
}

// ---------------------------------------------------------------- octagon triangulation

namespace {

struct ParityDsu {
  std::vector<int> parent, parity;
  explicit ParityDsu(int n) : parent(n), parity(n, 0) { std::iota(parent.begin(), parent.end(), 0); }
  std::pair<int, int> find(int x) {
    int p = 0, r = x;
    while (parent[r] != r) {
      p ^= parity[r];
      r = parent[r];
    }
    // path compression with parity
    int cur = x, cp = p;
    while (parent[cur] != cur) {
      int next = parent[cur], np = cp ^ parity[cur];
      parent[cur] = r;
      parity[cur] = cp;
      cur = next;
      cp = np;
    }
    return {r, p};
  }
  void unite(int a, int b, int rel) {
    auto [ra, pa] = find(a);
    auto [rb, pb] = find(b);
    if (ra == rb) return;
    parent[rb] = ra;
    parity[rb] = pa ^ pb ^ rel;
  }
};

struct PointIndex {
  double cell = 1e-6;
  std::unordered_map<long long, std::vector<int>> buckets;
  const std::vector<H2Point>* pts = nullptr;

  long long key(long long i, long long j) const { return i * 4000037LL + j; }
  void insert(int id) {
    Vec2 p = (*pts)[id].poincare();
    buckets[key(std::llround(p[0] / cell), std::llround(p[1] / cell))].push_back(id);
  }
  int find(const H2Point& q, double tol = 1e-9) const {
    Vec2 p = q.poincare();
    long long i0 = std::llround(p[0] / cell), j0 = std::llround(p[1] / cell);
    for (long long di = -1; di <= 1; ++di)
      for (long long dj = -1; dj <= 1; ++dj) {
        auto it = buckets.find(key(i0 + di, j0 + dj));
        if (it == buckets.end()) continue;
        for (int id : it->second) {
          Vec2 r = (*pts)[id].poincare();
          if (std::hypot(r[0] - p[0], r[1] - p[1]) < tol) return id;
        }
      }
    return -1;
  }
};

struct LiftedMesh {
  std::vector<H2Point> pts;
  std::vector<std::array<int, 3>> tris;
};

LiftedMesh octagon_fan(const FuchsianGroup& g) {
  LiftedMesh m;
  m.pts.push_back(H2Point());
  for (const auto& c : g.polygon()) m.pts.push_back(c);
  int n = static_cast<int>(g.polygon().size());
  for (int k = 0; k < n; ++k) m.tris.push_back({0, 1 + k, 1 + (k + 1) % n});
  return m;
}

LiftedMesh subdivide(const LiftedMesh& in) {
  LiftedMesh out;
  out.pts = in.pts;
  std::map<std::pair<int, int>, int> mids;
  auto mid = [&](int a, int b) {
    auto key = std::minmax(a, b);
    auto it = mids.find(key);
    if (it != mids.end()) return it->second;
    int id = static_cast<int>(out.pts.size());
    out.pts.push_back(midpoint(in.pts[a], in.pts[b]));
    mids.emplace(key, id);
    return id;
  };
  for (const auto& t : in.tris) {
    int a = t[0], b = t[1], c = t[2];
    int ab = mid(a, b), bc = mid(b, c), ca = mid(c, a);
    out.tris.push_back({a, ab, ca});
    out.tris.push_back({ab, b, bc});
    out.tris.push_back({ca, bc, c});
    out.tris.push_back({ab, bc, ca});
  }
  return out;
}

double max_side(const LiftedMesh& m) {
  double best = 0;
  for (const auto& t : m.tris)
    for (int j = 0; j < 3; ++j) best = std::max(best, h2_distance(m.pts[t[j]], m.pts[t[(j + 1) % 3]]));
  return best;
}

MetricTriangulation identify(const SourceMetric& source, const LiftedMesh& m) {
  const FuchsianGroup& g = source.group();
  int P = static_cast<int>(m.pts.size());
  PointIndex index;
  index.pts = &m.pts;
  for (int i = 0; i < P; ++i) index.insert(i);

  int n = static_cast<int>(g.polygon().size());
  // image[i][j]: index of side_neighbor(j) applied to point i, when it lands on a lifted point
  std::vector<std::vector<int>> image(P, std::vector<int>(n, -1));
  ParityDsu vdsu(P);
  for (int i = 0; i < P; ++i) {
    if (!(m.pts[i].x0() > 1 + 1e-9 && g.in_polygon(m.pts[i], 1e-9))) continue;
    for (int j = 0; j < n; ++j) {
      H2Point q = g.side_neighbor(j).apply(m.pts[i]);
      if (!g.in_polygon(q, 1e-9)) continue;
      int id = index.find(q);
      if (id < 0) continue;
      image[i][j] = id;
      vdsu.unite(i, id, 0);
    }
  }

  std::map<std::pair<int, int>, int> lifted_edge;
  std::vector<std::array<int, 2>> ledges;
  for (const auto& t : m.tris)
    for (int j = 0; j < 3; ++j) {
      int a = t[(j + 1) % 3], b = t[(j + 2) % 3];
      auto key = std::minmax(a, b);
      if (!lifted_edge.count(key)) {
        lifted_edge.emplace(key, static_cast<int>(ledges.size()));
        ledges.push_back({a, b});
      }
    }
  int LE = static_cast<int>(ledges.size());
  ParityDsu edsu(LE);
  for (int e = 0; e < LE; ++e) {
    int a = ledges[e][0], b = ledges[e][1];
    for (int j = 0; j < n; ++j) {
      int ia = image[a][j], ib = image[b][j];
      if (ia < 0 || ib < 0) continue;
      auto it = lifted_edge.find(std::minmax(ia, ib));
      if (it == lifted_edge.end()) continue;
      int f = it->second;
      int rel = (ledges[f][0] == ia) ? 0 : 1;
      edsu.unite(e, f, rel);
    }
  }

  MetricTriangulation mt;
  mt.genus = g.genus();
  std::vector<int> vid(P, -1);
  for (int i = 0; i < P; ++i) {
    int r = vdsu.find(i).first;
    if (vid[r] < 0) {
      vid[r] = mt.num_vertices++;
      mt.vertex_lifts.push_back(m.pts[r]);
    }
    vid[i] = vid[r];
  }
  std::vector<int> eid(LE, -1);
  for (int e = 0; e < LE; ++e) {
    int r = edsu.find(e).first;
    if (eid[r] < 0) {
      eid[r] = static_cast<int>(mt.edges.size());
      mt.edges.push_back({vid[ledges[r][0]], vid[ledges[r][1]]});
      mt.edge_lifts.push_back({m.pts[ledges[r][0]], m.pts[ledges[r][1]]});
      mt.edge_length.push_back(source.local_distance(m.pts[ledges[r][0]], m.pts[ledges[r][1]]));
    }
    eid[e] = eid[r];
  }
  for (const auto& t : m.tris) {
    std::array<int, 3> tv{}, te{}, ts{};
    for (int j = 0; j < 3; ++j) {
      tv[j] = vid[t[j]];
      int a = t[(j + 1) % 3], b = t[(j + 2) % 3];
      int e = lifted_edge.at(std::minmax(a, b));
      int local = (ledges[e][0] == a) ? 1 : -1;
      int parity = edsu.find(e).second;
      te[j] = eid[e];
      ts[j] = parity ? -local : local;
    }
    mt.triangles.push_back(tv);
    mt.triangle_edges.push_back(te);
    mt.edge_sign.push_back(ts);
    mt.triangle_lifts.push_back({m.pts[t[0]], m.pts[t[1]], m.pts[t[2]]});
  }
  return mt;
}

double upper_ratio(const SourceMetric& source) {
  if (auto* s = dynamic_cast<const ScaledHyperbolicSource*>(&source)) return s->scale();
  return 1.0;
}

}  // namespace

MetricTriangulation triangulate_octagon(const SourceMetric& source, int levels) {
  const FuchsianGroup& g = source.group();
  if (!g.has_polygon()) throw InputError("group has no fundamental polygon");
  if (levels < 0 || levels > 7) throw OutOfRange("subdivision levels must lie in [0, 7]");
  LiftedMesh m = octagon_fan(g);
  for (int l = 0; l < levels; ++l) m = subdivide(m);
  MetricTriangulation mt = identify(source, m);
  mt.epsilon = upper_ratio(source) * max_side(m);
  mt.validate();
  return mt;
}

MetricTriangulation triangulate_quotient(const SourceMetric& source, double epsilon) {
  const FuchsianGroup& g = source.group();
  if (!g.has_polygon()) throw InputError("group has no fundamental polygon");
  if (!(epsilon > 0)) throw OutOfRange("epsilon must be positive");
  double inj = source.injectivity_estimate();
  if (epsilon >= inj)
    throw EpsilonTooLarge("epsilon " + std::to_string(epsilon) + " is not below the injectivity estimate " +
                          std::to_string(inj));
  double ratio = upper_ratio(source);
  LiftedMesh m = octagon_fan(g);
  int levels = 0;
  while (ratio * max_side(m) >= epsilon) {
    if (++levels > 7) throw OutOfRange("epsilon needs more than 7 subdivision levels");
    m = subdivide(m);
  }
  MetricTriangulation mt = identify(source, m);
  mt.epsilon = epsilon;
  mt.validate();
  return mt;
}

Report diameter_audit(const SourceMetric& source, const MetricTriangulation& mt) {
  Report r;
  r.name = "diameter_audit";
  r.anchor = "every triangle of the triangulation has source diameter below epsilon";
  if (mt.triangle_lifts.size() != mt.triangles.size())
    throw InputError("diameter audit needs lifted triangles");
  std::vector<double> diam(mt.triangles.size());
  parallel_for(diam.size(), [&](std::size_t t) {
    const auto& P = mt.triangle_lifts[t];
    diam[t] = std::max({source.local_distance(P[0], P[1]), source.local_distance(P[1], P[2]),
                        source.local_distance(P[2], P[0])});
  });
  auto it = std::max_element(diam.begin(), diam.end());
  double worst = it == diam.end() ? 0.0 : *it;
  r.values["max_diameter"] = worst;
  r.values["epsilon"] = mt.epsilon;
  r.values["triangles"] = static_cast<double>(diam.size());
  r.tolerances["source"] = source.tolerance();
  r.pass = worst < mt.epsilon + source.tolerance();
  if (it != diam.end()) r.detail["worst_triangle"] = it - diam.begin();
  return r;
}

// ---------------------------------------------------------------- funnel

namespace {

// Bends of the shortest path through ports (port 0 and the last port are the endpoints),
// as (port index, 0 for left / 1 for right).
std::vector<std::pair<int, int>> funnel_bends(const std::vector<std::array<H2Point, 2>>& ports) {
  std::vector<std::array<Vec2, 2>> k;
  for (const auto& p : ports) k.push_back({p[0].klein(), p[1].klein()});
  auto area2 = [](const Vec2& a, const Vec2& b, const Vec2& c) {
    double ax = b[0] - a[0], ay = b[1] - a[1], bx = c[0] - a[0], by = c[1] - a[1];
    return bx * ay - ax * by;
  };
  auto same = [](const Vec2& a, const Vec2& b) { return a[0] == b[0] && a[1] == b[1]; };

  std::vector<std::pair<int, int>> bends;
  auto add = [&](int i, int side) {
    if (i <= 0 || i >= static_cast<int>(k.size()) - 1) return;
    if (!bends.empty() && same(k[bends.back().first][bends.back().second], k[i][side])) return;
    bends.push_back({i, side});
  };
  Vec2 apex = k[0][0], left = k[0][0], right = k[0][1];
  int apex_i = 0, left_i = 0, right_i = 0;
  int n = static_cast<int>(k.size());
  for (int i = 1; i < n; ++i) {
    const Vec2& pl = k[i][0];
    const Vec2& pr = k[i][1];
    if (area2(apex, right, pr) <= 0) {
      if (same(apex, right) || area2(apex, left, pr) > 0) {
        right = pr;
        right_i = i;
      } else {
        add(left_i, 0);
        apex = left;
        apex_i = left_i;
        right = left = apex;
        right_i = left_i = apex_i;
        i = apex_i;
        continue;
      }
    }
    if (area2(apex, left, pl) >= 0) {
      if (same(apex, left) || area2(apex, right, pl) < 0) {
        left = pl;
        left_i = i;
      } else {
        add(right_i, 1);
        apex = right;
        apex_i = right_i;
        right = left = apex;
        right_i = left_i = apex_i;
        i = apex_i;
        continue;
      }
    }
  }
  return bends;
}

}  // namespace

std::vector<H2Point> funnel_path(const H2Point& s, const std::vector<std::array<H2Point, 2>>& portals,
                                 const H2Point& t) {
  std::vector<std::array<H2Point, 2>> ports{{s, s}};
  ports.insert(ports.end(), portals.begin(), portals.end());
  ports.push_back({t, t});
  std::vector<H2Point> path{s};
  for (auto [p, side] : funnel_bends(ports)) path.push_back(ports[p][side]);
  path.push_back(t);
  return path;
}

// ---------------------------------------------------------------- cone distances

ConeDistanceField::ConeDistanceField(ConeSurfacePtr cs, int steiner_per_edge)
    : cs_(std::move(cs)), k_(steiner_per_edge) {
  if (k_ < 0) throw OutOfRange("steiner_per_edge must be non-negative");
  const auto& mt = cs_->mt;
  int V = mt.num_vertices, E = static_cast<int>(mt.edges.size()), T = static_cast<int>(mt.triangles.size());
  for (int v = 0; v < V; ++v) nodes_.push_back({v, -1, 0});
  for (int e = 0; e < E; ++e)
    for (int i = 1; i <= k_; ++i) nodes_.push_back({-1, e, i});

  edge_sides_.assign(E, {{{-1, -1}, {-1, -1}}});
  for (int t = 0; t < T; ++t)
    for (int j = 0; j < 3; ++j) {
      auto& s = edge_sides_[mt.triangle_edges[t][j]];
      (s[0][0] < 0 ? s[0] : s[1]) = {t, j};
    }

  // ccw fans of corners about interior vertices
  fans_.assign(V, {});
  fan_start_.assign(V, {});
  std::vector<std::array<bool, 3>> seen(T, {false, false, false});
  for (int t = 0; t < T; ++t)
    for (int k = 0; k < 3; ++k) {
      int v = mt.triangles[t][k];
      if (seen[t][k] || !cs_->interior[v] || !fans_[v].empty()) continue;
      int ct = t, ck = k;
      double acc = 0;
      for (int guard = 0; guard < 4 * T; ++guard) {
        seen[ct][ck] = true;
        fans_[v].push_back({ct, ck});
        fan_start_[v].push_back(acc);
        acc += cs_->corner_angles[ct][ck];
        int e = mt.triangle_edges[ct][(ck + 1) % 3];
        const auto& s = edge_sides_[e];
        auto other = (s[0][0] == ct && s[0][1] == (ck + 1) % 3) ? s[1] : s[0];
        ct = other[0];
        ck = (other[1] + 1) % 3;
        if (ct == t && ck == k) break;
      }
    }

  std::vector<std::vector<std::pair<int, int>>> out(nodes_.size());
  std::vector<std::tuple<int, int, double, Arc>> arcs;
  auto push = [&](int a, int b, double w, Arc info) {
    arcs.emplace_back(a, b, w, info);
    Arc rev = info;
    std::swap(rev.tri_from, rev.tri_to);
    std::swap(rev.corner_from, rev.corner_to);
    arcs.emplace_back(b, a, w, rev);
  };

  // along edges
  for (int e = 0; e < E; ++e) {
    double piece = mt.edge_length[e] / (k_ + 1);
    int prev = mt.edges[e][0];
    for (int i = 1; i <= k_ + 1; ++i) {
      int cur = i <= k_ ? steiner_node(e, i) : mt.edges[e][1];
      Arc info;
      info.on_edge = e;
      push(prev, cur, piece, info);
      prev = cur;
    }
  }

  struct Slot {
    int node;
    int corner;  // corner index for vertices, -1 for Steiner points
    int side;    // side for Steiner points
    H2Point pos;
  };
  auto slots_of = [&](int t, const std::array<H2Point, 3>& P) {
    std::vector<Slot> s;
    for (int c = 0; c < 3; ++c) s.push_back({mt.triangles[t][c], c, -1, P[c]});
    for (int j = 0; j < 3; ++j) {
      int e = mt.triangle_edges[t][j];
      for (int i = 1; i <= k_; ++i) {
        double f = steiner_fraction(i);
        if (mt.edge_sign[t][j] < 0) f = 1 - f;
        s.push_back({steiner_node(e, i), -1, j, lerp(P[(j + 1) % 3], P[(j + 2) % 3], f)});
      }
    }
    return s;
  };
  auto on_side = [](const Slot& s, int j) { return s.corner >= 0 ? s.corner != j : s.side == j; };

  // chords inside one triangle
  for (int t = 0; t < T; ++t) {
    auto P = place(t);
    auto S = slots_of(t, P);
    for (std::size_t a = 0; a < S.size(); ++a)
      for (std::size_t b = a + 1; b < S.size(); ++b) {
        bool share = false;
        for (int j = 0; j < 3; ++j) share = share || (on_side(S[a], j) && on_side(S[b], j));
        if (share) continue;
        Arc info;
        info.tri_from = info.tri_to = t;
        info.corner_from = static_cast<std::int8_t>(S[a].corner);
        info.corner_to = static_cast<std::int8_t>(S[b].corner);
        push(S[a].node, S[b].node, h2_distance(S[a].pos, S[b].pos), info);
      }
  }

  // chords through two triangles sharing an edge
  for (int e = 0; e < E; ++e) {
    auto [t1, j1] = edge_sides_[e][0];
    auto [t2, j2] = edge_sides_[e][1];
    if (t1 < 0 || t2 < 0 || t1 == t2) continue;
    auto P1 = place(t1);
    std::array<H2Point, 3> P2;
    P2[(j2 + 1) % 3] = P1[(j1 + 2) % 3];
    P2[(j2 + 2) % 3] = P1[(j1 + 1) % 3];
    P2[j2] = third_point(P2[(j2 + 1) % 3], P2[(j2 + 2) % 3], side_len(mt, t2, (j2 + 2) % 3),
                         side_len(mt, t2, (j2 + 1) % 3), 1.0);
    auto S1 = slots_of(t1, P1), S2 = slots_of(t2, P2);
    const H2Point &E0 = P1[(j1 + 1) % 3], &E1 = P1[(j1 + 2) % 3];
    for (const auto& a : S1) {
      if (on_side(a, j1)) continue;
      for (const auto& b : S2) {
        if (on_side(b, j2)) continue;
        if (!segments_cross(a.pos, b.pos, E0, E1)) continue;
        Arc info;
        info.tri_from = t1;
        info.tri_to = t2;
        info.cross = e;
        info.corner_from = static_cast<std::int8_t>(a.corner);
        info.corner_to = static_cast<std::int8_t>(b.corner);
        push(a.node, b.node, h2_distance(a.pos, b.pos), info);
      }
    }
  }

  std::stable_sort(arcs.begin(), arcs.end(),
                   [](const auto& x, const auto& y) { return std::get<0>(x) < std::get<0>(y); });
  offsets_.assign(nodes_.size() + 1, 0);
  for (const auto& a : arcs) ++offsets_[std::get<0>(a) + 1];
  for (std::size_t i = 0; i < nodes_.size(); ++i) offsets_[i + 1] += offsets_[i];
  arc_target_.reserve(arcs.size());
  for (const auto& a : arcs) {
    arc_source_.push_back(std::get<0>(a));
    arc_target_.push_back(std::get<1>(a));
    arc_weight_.push_back(std::get<2>(a));
    arc_info_.push_back(std::get<3>(a));
  }
}

int ConeDistanceField::steiner_node(int e, int i) const {
  return cs_->mt.num_vertices + e * k_ + (i - 1);
}

std::array<H2Point, 3> ConeDistanceField::place(int t) const {
  const auto& mt = cs_->mt;
  return place_triangle(side_len(mt, t, 2), side_len(mt, t, 1), side_len(mt, t, 0));
}

void ConeDistanceField::dijkstra(int source, std::vector<double>& dist, std::vector<int>& pred) const {
  dist.assign(nodes_.size(), kInf);
  pred.assign(nodes_.size(), -1);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
  dist[source] = 0;
  pq.push({0, source});
  while (!pq.empty()) {
    auto [d, u] = pq.top();
    pq.pop();
    if (d > dist[u]) continue;
    for (int a = offsets_[u]; a < offsets_[u + 1]; ++a) {
      int w = arc_target_[a];
      double nd = d + arc_weight_[a];
      if (nd < dist[w]) {
        dist[w] = nd;
        pred[w] = a;
        pq.push({nd, w});
      }
    }
  }
}

std::vector<double> ConeDistanceField::graph_row(int source) const {
  std::vector<double> dist;
  std::vector<int> pred;
  dijkstra(source, dist, pred);
  return dist;
}

double ConeDistanceField::graph_distance(int a, int b) const {
  if (a == b) return 0;
  return graph_row(std::min(a, b))[std::max(a, b)];
}

H2Point ConeDistanceField::node_position(int node, int tri, int corner,
                                         const std::array<H2Point, 3>& P) const {
  const auto& mt = cs_->mt;
  const Node& n = nodes_[node];
  if (n.vertex >= 0) {
    if (corner >= 0) return P[corner];
    for (int c = 0; c < 3; ++c)
      if (mt.triangles[tri][c] == n.vertex) return P[c];
    throw InputError("vertex not in triangle");
  }
  int j = side_of(mt, tri, n.edge);
  if (j < 0) throw InputError("Steiner point not in triangle");
  double f = steiner_fraction(n.index);
  if (mt.edge_sign[tri][j] < 0) f = 1 - f;
  return lerp(P[(j + 1) % 3], P[(j + 2) % 3], f);
}

namespace {

struct SleeveStep {
  int tri;
  int cross;  // edge crossed to enter, -1 for the first triangle
};

}  // namespace

double ConeDistanceField::sleeve_length(const std::vector<int>& path, int a, int b) const {
  const auto& mt = cs_->mt;
  if (path.empty()) return 0;

  // Corner of triangle t holding vertex v (first match).
  auto corner_of = [&](int t, int v) {
    for (int c = 0; c < 3; ++c)
      if (mt.triangles[t][c] == v) return c;
    return -1;
  };
  auto other_side = [&](int e, int t) {
    const auto& s = edge_sides_[e];
    return (s[0][0] == t) ? s[1] : s[0];
  };
  auto fan_pos = [&](int v, int t, int k) {
    const auto& f = fans_[v];
    for (std::size_t i = 0; i < f.size(); ++i)
      if (f[i].tri == t && f[i].k == k) return static_cast<int>(i);
    return -1;
  };
  // Fan angle of the direction at vertex v (corner k of t) toward the point q placed in P.
  auto fan_angle_point = [&](int v, int t, int k, const std::array<H2Point, 3>& P, const H2Point& q) {
    int pos = fan_pos(v, t, k);
    if (pos < 0) return std::nan("");
    double off = angle_at(P[k], P[(k + 1) % 3], q);
    return fan_start_[v][pos] + std::min(off, cs_->corner_angles[t][k]);
  };
  auto fan_angle_edge = [&](int v, int e) {
    const auto& f = fans_[v];
    for (std::size_t i = 0; i < f.size(); ++i)
      if (mt.triangle_edges[f[i].tri][(f[i].k + 2) % 3] == e) return fan_start_[v][i];
    return std::nan("");
  };
  // Direction at vertex node u of the arc's far end, as a fan angle.
  auto arc_angle_at = [&](int arc, bool at_start) {
    const Arc& in = arc_info_[arc];
    int u = at_start ? arc_source_[arc] : arc_target_[arc];
    int other = at_start ? arc_target_[arc] : arc_source_[arc];
    if (in.on_edge >= 0) return fan_angle_edge(u, in.on_edge);
    int t = at_start ? in.tri_from : in.tri_to;
    int k = at_start ? in.corner_from : in.corner_to;
    int t_other = at_start ? in.tri_to : in.tri_from;
    int k_other = at_start ? in.corner_to : in.corner_from;
    auto P = place(t);
    if (t_other == t) return fan_angle_point(u, t, k, P, node_position(other, t, k_other, P));
    int j = side_of(mt, t, in.cross);
    auto [t2, j2] = other_side(in.cross, t);
    std::array<H2Point, 3> Q;
    Q[(j2 + 1) % 3] = P[(j + 2) % 3];
    Q[(j2 + 2) % 3] = P[(j + 1) % 3];
    Q[j2] = third_point(Q[(j2 + 1) % 3], Q[(j2 + 2) % 3], side_len(mt, t2, (j2 + 2) % 3),
                        side_len(mt, t2, (j2 + 1) % 3), 1.0);
    return fan_angle_point(u, t, k, P, node_position(other, t2, k_other, Q));
  };

  double total = 0;
  std::vector<SleeveStep> sleeve;
  int s_node = a, s_corner = -1;
  int cur = -1, cur_corner = -1;

  auto push_step = [&](int t, int e) {
    std::size_t n = sleeve.size();
    if (n >= 2 && sleeve[n - 1].cross == e && sleeve[n - 2].tri == t) {
      sleeve.pop_back();
    } else {
      sleeve.push_back({t, e});
    }
  };

  auto finish = [&](int t_node, int t_corner) {
    // drop leading and trailing triangles whose portal already holds the endpoint
    auto holds = [&](int node, int corner, int t, int e, int& new_corner, int t_next) {
      const Node& n = nodes_[node];
      if (n.vertex < 0) {
        new_corner = -1;
        return n.edge == e;
      }
      int j = side_of(mt, t, e);
      int c = corner >= 0 ? corner : corner_of(t, n.vertex);
      if (j < 0 || (c != (j + 1) % 3 && c != (j + 2) % 3)) return false;
      int j2 = side_of(mt, t_next, e);
      new_corner = (c == (j + 1) % 3) ? (j2 + 2) % 3 : (j2 + 1) % 3;
      return true;
    };
    // corner of the next (or previous) triangle across edge e matching corner c of t
    auto across = [&](int t, int c, int e, int t2) {
      int j = side_of(mt, t, e), j2 = side_of(mt, t2, e);
      if (j < 0 || j2 < 0 || (c != (j + 1) % 3 && c != (j + 2) % 3)) return -1;
      return (c == (j + 1) % 3) ? (j2 + 2) % 3 : (j2 + 1) % 3;
    };
    double len = kInf;
    for (int iter = 0; iter < 400; ++iter) {
      std::size_t lo = 0, hi = sleeve.size();
      int sc = s_corner, tc = t_corner;
      while (hi - lo >= 2) {
        int nc;
        if (!holds(s_node, sc, sleeve[lo].tri, sleeve[lo + 1].cross, nc, sleeve[lo + 1].tri)) break;
        sc = nc;
        ++lo;
      }
      while (hi - lo >= 2) {
        int nc;
        if (!holds(t_node, tc, sleeve[hi - 1].tri, sleeve[hi - 1].cross, nc, sleeve[hi - 2].tri)) break;
        tc = nc;
        --hi;
      }
      std::vector<std::array<H2Point, 3>> placed(sleeve.size());
      placed[lo] = place(sleeve[lo].tri);
      std::vector<std::array<H2Point, 2>> ports;
      H2Point S = node_position(s_node, sleeve[lo].tri, sc, placed[lo]);
      ports.push_back({S, S});
      for (std::size_t i = lo + 1; i < hi; ++i) {
        int prev = sleeve[i - 1].tri, t = sleeve[i].tri, e = sleeve[i].cross;
        int j = side_of(mt, prev, e), j2 = side_of(mt, t, e);
        if (j < 0 || j2 < 0) return kInf;
        const auto& P = placed[i - 1];
        ports.push_back({P[(j + 2) % 3], P[(j + 1) % 3]});
        auto& Q = placed[i];
        Q[(j2 + 1) % 3] = P[(j + 2) % 3];
        Q[(j2 + 2) % 3] = P[(j + 1) % 3];
        Q[j2] = third_point(Q[(j2 + 1) % 3], Q[(j2 + 2) % 3], side_len(mt, t, (j2 + 2) % 3),
                            side_len(mt, t, (j2 + 1) % 3), 1.0);
      }
      H2Point T = node_position(t_node, sleeve[hi - 1].tri, tc, placed[hi - 1]);
      ports.push_back({T, T});
      auto bends = funnel_bends(ports);
      std::vector<H2Point> pts{S};
      for (auto [p, side] : bends) pts.push_back(ports[p][side]);
      pts.push_back(T);
      len = 0;
      for (std::size_t i = 1; i < pts.size(); ++i) len += h2_distance(pts[i - 1], pts[i]);

      bool flipped = false;
      for (std::size_t bi = 0; bi < bends.size() && !flipped; ++bi) {
        auto [p, side] = bends[bi];
        std::size_t i = lo + p;
        int j = side_of(mt, sleeve[i - 1].tri, sleeve[i].cross);
        int c = side == 0 ? (j + 2) % 3 : (j + 1) % 3;
        int v = mt.triangles[sleeve[i - 1].tri][c];
        if (!cs_->interior[v]) continue;
        std::size_t a = i - 1;
        int ca = c;
        while (a > lo) {
          int nc = across(sleeve[a].tri, ca, sleeve[a].cross, sleeve[a - 1].tri);
          if (nc < 0) break;
          ca = nc;
          --a;
        }
        std::size_t b = i;
        int cb = across(sleeve[i - 1].tri, c, sleeve[i].cross, sleeve[i].tri);
        while (b + 1 < hi) {
          int nc = across(sleeve[b].tri, cb, sleeve[b + 1].cross, sleeve[b + 1].tri);
          if (nc < 0) break;
          cb = nc;
          ++b;
        }
        double W = 0;
        {
          int cc = ca;
          for (std::size_t x = a; x <= b; ++x) {
            W += cs_->corner_angles[sleeve[x].tri][cc];
            if (x < b) cc = across(sleeve[x].tri, cc, sleeve[x + 1].cross, sleeve[x + 1].tri);
          }
        }
        int ja = side_of(mt, sleeve[a].tri, sleeve[a + 1].cross);
        int jb = side_of(mt, sleeve[b].tri, sleeve[b].cross);
        const H2Point& V = placed[i - 1][c];
        if (h2_distance(V, pts[bi]) < 1e-12 || h2_distance(V, pts[bi + 2]) < 1e-12) continue;
        double a1 = angle_at(V, placed[a][ja], pts[bi]);
        double a2 = angle_at(V, placed[b][jb], pts[bi + 2]);
        double other = cs_->cone_angle[v] - (W - a1 - a2);
        if (!(other < M_PI - 1e-9)) continue;
        int dir = (ja == (ca + 1) % 3) ? -1 : 1;  // opposite of the run's rotation
        int ct = sleeve[a].tri, ck = ca;
        std::vector<SleeveStep> steps;
        std::size_t limit = fans_[v].size() + 1;
        while (!(ct == sleeve[b].tri && ck == cb) && steps.size() < limit) {
          int e = mt.triangle_edges[ct][dir > 0 ? (ck + 1) % 3 : (ck + 2) % 3];
          auto [t2, j2] = other_side(e, ct);
          ct = t2;
          ck = dir > 0 ? (j2 + 1) % 3 : (j2 + 2) % 3;
          steps.push_back({ct, e});
        }
        if (!(ct == sleeve[b].tri && ck == cb)) continue;
        std::vector<SleeveStep> next(sleeve.begin(), sleeve.begin() + a + 1);
        auto append = [&](const SleeveStep& st) {
          std::size_t n = next.size();
          if (n >= 2 && next[n - 1].cross == st.cross && next[n - 2].tri == st.tri) next.pop_back();
          else next.push_back(st);
        };
        for (const auto& st : steps) append(st);
        for (std::size_t x = b + 1; x < sleeve.size(); ++x) append(sleeve[x]);
        sleeve = std::move(next);
        flipped = true;
      }
      if (!flipped) break;
    }
    return len;
  };

  // triangle and corner at which an arc leaves its start node
  auto arc_entry = [&](int arc, int& t, int& k) {
    const Arc& in = arc_info_[arc];
    if (in.on_edge < 0) {
      t = in.tri_from;
      k = in.corner_from;
      return;
    }
    t = edge_sides_[in.on_edge][0][0];
    int u = arc_source_[arc];
    k = nodes_[u].vertex >= 0 ? corner_of(t, nodes_[u].vertex) : -1;
  };

  // start
  arc_entry(path[0], cur, cur_corner);
  s_corner = cur_corner;
  sleeve.push_back({cur, -1});

  for (std::size_t i = 0; i < path.size(); ++i) {
    int arc = path[i];
    const Arc& in = arc_info_[arc];
    int u = arc_source_[arc];
    if (i > 0) {
      const Node& un = nodes_[u];
      int t_next, k_next;
      arc_entry(arc, t_next, k_next);
      bool needs_move;
      if (in.on_edge >= 0) {
        needs_move = side_of(mt, cur, in.on_edge) < 0;
      } else {
        needs_move = !(t_next == cur && (un.vertex < 0 || k_next == cur_corner || k_next < 0));
      }
      if (needs_move) {
        if (un.vertex < 0) {
          auto [t2, j2] = other_side(un.edge, cur);
          if (in.on_edge < 0 && t2 != t_next) return kInf;
          push_step(t2, un.edge);
          cur = t2;
          cur_corner = -1;
        } else {
          int v = un.vertex;
          double phi_in = arc_angle_at(path[i - 1], false);
          double phi_out = arc_angle_at(arc, true);
          double theta = cs_->cone_angle[v];
          bool moved = false;
          if (cs_->interior[v] && std::isfinite(phi_in) && std::isfinite(phi_out) && cur_corner >= 0) {
            double ccw = std::fmod(phi_out - phi_in + 2 * theta, theta);
            int dir = ccw <= theta - ccw ? 1 : -1;
            {
              int ct = cur, ck = cur_corner;
              std::vector<SleeveStep> steps;
              auto reached = [&](int t, int k) {
                if (in.on_edge >= 0)
                  return mt.triangle_edges[t][(k + 1) % 3] == in.on_edge ||
                         mt.triangle_edges[t][(k + 2) % 3] == in.on_edge;
                return t == t_next && k == k_next;
              };
              std::size_t limit = fans_[v].size() + 1;
              while (!reached(ct, ck) && steps.size() < limit) {
                int e = mt.triangle_edges[ct][dir > 0 ? (ck + 1) % 3 : (ck + 2) % 3];
                auto [t2, j2] = other_side(e, ct);
                ct = t2;
                ck = dir > 0 ? (j2 + 1) % 3 : (j2 + 2) % 3;
                steps.push_back({ct, e});
              }
              if (reached(ct, ck)) {
                for (const auto& st : steps) push_step(st.tri, st.cross);
                cur = ct;
                cur_corner = ck;
                moved = true;
              }
            }
          }
          if (!moved) {
            total += finish(u, cur_corner);
            sleeve.clear();
            s_node = u;
            cur = t_next;
            cur_corner = k_next;
            s_corner = cur_corner;
            sleeve.push_back({cur, -1});
          }
        }
      }
    }
    // traverse the arc
    int w = arc_target_[arc];
    if (in.on_edge >= 0) {
      int wv = nodes_[w].vertex;
      if (wv >= 0) {
        int j = side_of(mt, cur, in.on_edge);
        int c1 = (j + 1) % 3, c2 = (j + 2) % 3;
        // moving toward the far end of the edge in its own orientation?
        const Node& un = nodes_[u];
        const auto& ev = mt.edges[in.on_edge];
        bool forward = ev[0] != ev[1] ? wv == ev[1] : (un.vertex < 0 ? un.index == k_ : true);
        bool side_forward = mt.edge_sign[cur][j] > 0;
        cur_corner = (forward == side_forward) ? c2 : c1;
      } else {
        cur_corner = -1;
      }
    } else {
      if (in.tri_to != in.tri_from) push_step(in.tri_to, in.cross);
      cur = sleeve.back().tri;
      if (cur != in.tri_to) {
        cur = in.tri_to;  // backtrack reduced past this arc's triangle
        sleeve.push_back({cur, in.cross});
      }
      cur_corner = in.corner_to;
    }
  }
  total += finish(b, cur_corner);
  return total;
}

double ConeDistanceField::candidates_length(int s, int t, const std::vector<double>& dist,
                                            const std::vector<int>& pred) const {
  // Paths entering t through different neighbours can lie in different homotopy classes.
  std::vector<std::pair<double, int>> via;
  for (int q = offsets_[t]; q < offsets_[t + 1]; ++q) {
    int x = arc_target_[q];
    if (std::isfinite(dist[x])) via.push_back({dist[x] + arc_weight_[q], x});
  }
  std::sort(via.begin(), via.end());
  double cutoff = dist[t] * (1 + kCandidateSlack);
  while (!via.empty() && via.back().first > cutoff) via.pop_back();
  // Distinct tree branches (ancestor at half the distance) first, then the remaining neighbours.
  std::vector<int> order, branches;
  std::vector<bool> taken(via.size(), false);
  for (std::size_t i = 0; i < via.size(); ++i) {
    int m = via[i].second;
    while (m != s && dist[m] > 0.5 * dist[t]) m = arc_source_[pred[m]];
    if (std::find(branches.begin(), branches.end(), m) != branches.end()) continue;
    branches.push_back(m);
    order.push_back(via[i].second);
    taken[i] = true;
  }
  for (std::size_t i = 0; i < via.size(); ++i)
    if (!taken[i] && std::find(order.begin(), order.end(), via[i].second) == order.end())
      order.push_back(via[i].second);
  if (static_cast<int>(order.size()) > kCandidates) order.resize(kCandidates);

  double best = kInf;
  for (int x : order) {
    int last = -1;
    double w = kInf;
    for (int q = offsets_[x]; q < offsets_[x + 1]; ++q)
      if (arc_target_[q] == t && arc_weight_[q] < w) {
        w = arc_weight_[q];
        last = q;
      }
    if (last < 0) continue;
    std::vector<int> path{last};
    for (int n = x; n != s; n = arc_source_[pred[n]]) path.push_back(pred[n]);
    std::reverse(path.begin(), path.end());
    best = std::min(best, sleeve_length(path, s, t));
  }
  return best;
}

double ConeDistanceField::straightened(int a, int b) const {
  if (a == b) return 0;
  int s = std::min(a, b), t = std::max(a, b);
  std::vector<double> dist;
  std::vector<int> pred;
  dijkstra(s, dist, pred);
  if (!std::isfinite(dist[t])) return kInf;
  return candidates_length(s, t, dist, pred);
}

double ConeDistanceField::distance(int a, int b) const {
  if (a == b) return 0;
  int s = std::min(a, b), t = std::max(a, b);
  std::vector<double> dist;
  std::vector<int> pred;
  dijkstra(s, dist, pred);
  if (!std::isfinite(dist[t])) return kInf;
  return std::min(dist[t], candidates_length(s, t, dist, pred));
}

H2Point node_lift(const ConeDistanceField& cdf, int node) {
  const auto& mt = cdf.surface().mt;
  const auto& n = cdf.node(node);
  if (n.vertex >= 0) {
    if (mt.vertex_lifts.empty()) throw InputError("triangulation has no lifts");
    return mt.vertex_lifts[n.vertex];
  }
  if (mt.edge_lifts.empty()) throw InputError("triangulation has no lifts");
  return lerp(mt.edge_lifts[n.edge][0], mt.edge_lifts[n.edge][1], cdf.steiner_fraction(n.index));
}

Report distance_window_check(const SourceMetric& source, const ConeDistanceField& cdf, double epsilon,
                       int pairs, std::uint64_t seed, std::vector<double>* errors) {
  Rng rng(seed);
  int N = cdf.node_count();
  std::vector<std::pair<int, int>> samples;
  while (static_cast<int>(samples.size()) < pairs) {
    int a = static_cast<int>(rng() % N), b = static_cast<int>(rng() % N);
    if (a != b) samples.push_back({a, b});
  }
  std::vector<double> err(samples.size());
  parallel_for(samples.size(), [&](std::size_t i) {
    auto [a, b] = samples[i];
    double cone = cdf.distance(a, b);
    double src = source.distance(node_lift(cdf, a), node_lift(cdf, b));
    err[i] = cone - src;
  });
  int chi = cdf.surface().euler_characteristic();
  double slack = source.tolerance() + 1e-9;
  double lower = -2 * epsilon, upper = 2 * epsilon - 2 * M_PI * chi * std::sinh(epsilon);
  double mn = kInf, mx = -kInf, mabs = 0;
  for (double e : err) {
    mn = std::min(mn, e);
    mx = std::max(mx, e);
    mabs = std::max(mabs, std::abs(e));
  }
  Report r;
  r.name = "distance_window";
  r.anchor = "comparison-surface distances lie within [-2 eps, 2 eps - 2 pi chi sinh eps] of source distances";
  r.values["epsilon"] = epsilon;
  r.values["min_error"] = mn;
  r.values["max_error"] = mx;
  r.values["max_abs_error"] = mabs;
  r.values["lower"] = lower;
  r.values["upper"] = upper;
  r.values["pairs"] = static_cast<double>(samples.size());
  r.tolerances["slack"] = slack;
  r.pass = !samples.empty() && mn >= lower - slack && mx <= upper + slack;
  const int bins = 20;
  std::vector<int> hist(bins, 0);
  for (double e : err) {
    int bi = static_cast<int>(std::floor((e - lower) / (upper - lower) * bins));
    hist[std::clamp(bi, 0, bins - 1)]++;
  }
  r.detail["histogram"] = {{"lower", lower}, {"upper", upper}, {"counts", hist}};
  r.detail["steiner_per_edge"] = cdf.steiner();
  if (errors) *errors = err;
  return r;
}

}  // namespace adscurv
