#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <unordered_map>

#include "adscurv/errors.hpp"
#include "adscurv/parallel.hpp"
#include "adscurv/surface.hpp"

namespace adscurv {

namespace {

double min_corner_distance(const H2Point& p, const H2Point& a, const H2Point& b, const H2Point& c) {
  return std::min({h2_distance(p, a), h2_distance(p, b), h2_distance(p, c)});
}

bool barycentric_inside(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
  double d = det3(a, b, c);
  double l0 = det3(p, b, c) / d, l1 = det3(a, p, c) / d, l2 = det3(a, b, p) / d;
  double tol = -1e-12;
  return l0 >= tol && l1 >= tol && l2 >= tol;
}

// Point of segment [x,y] equidistant from x and a, when it exists.
bool bisector_on_edge(const Vec3& x, const Vec3& y, const Vec3& a, Vec3& out) {
  Vec3 w = a - x;
  double px = minkowski(x, w), py = minkowski(y, w);
  if (px == py) return false;
  double s = px / (px - py);
  if (!(s >= 0 && s <= 1)) return false;
  out = x * (1 - s) + y * s;
  return true;
}

struct CellKey {
  long long i, j;
  bool operator==(const CellKey& o) const { return i == o.i && j == o.j; }
};
struct CellHash {
  std::size_t operator()(const CellKey& k) const {
    return std::hash<long long>()(k.i * 1000003LL ^ k.j);
  }
};

CellKey cell_of(const Vec2& p, double size) {
  return {static_cast<long long>(std::floor(p[0] / size)),
          static_cast<long long>(std::floor(p[1] / size))};
}

}  // namespace

double covering_radius(const H2Point& a, const H2Point& b, const H2Point& c) {
  double best = 0;
  auto consider = [&](const Vec3& v) {
    if (!(minkowski(v, v) < 0)) return;
    H2Point p = H2Point::from_vector(v);
    best = std::max(best, min_corner_distance(p, a, b, c));
  };
  Vec3 cc = mcross(a.vec() - b.vec(), a.vec() - c.vec());
  if (minkowski(cc, cc) < 0) {
    if (cc.x0 < 0) cc = -cc;
    if (barycentric_inside(cc, a.vec(), b.vec(), c.vec())) consider(cc);
  }
  const Vec3* v[3] = {&a.vec(), &b.vec(), &c.vec()};
  for (int e = 0; e < 3; ++e) {
    const Vec3& x = *v[e];
    const Vec3& y = *v[(e + 1) % 3];
    const Vec3& z = *v[(e + 2) % 3];
    Vec3 out;
    consider(x + y);
    if (bisector_on_edge(x, y, z, out)) consider(out);
    if (bisector_on_edge(y, x, z, out)) consider(out);
  }
  return best;
}

GeodesicMesh GeodesicMesh::from_triangles(const std::vector<std::array<H2Point, 3>>& seeds,
                                          double h, double neighbor_factor) {
  if (!(h > 0)) throw OutOfRange("covering radius must be positive");
  GeodesicMesh mesh;
  mesh.neighbor_radius = neighbor_factor * h;

  std::vector<std::array<H2Point, 3>> stack(seeds.rbegin(), seeds.rend());
  std::vector<std::array<H2Point, 3>> leaves;
  double cover = 0;
  while (!stack.empty()) {
    auto t = stack.back();
    stack.pop_back();
    double cr = covering_radius(t[0], t[1], t[2]);
    if (cr <= h) {
      cover = std::max(cover, cr);
      leaves.push_back(t);
      continue;
    }
    double l[3] = {h2_distance(t[0], t[1]), h2_distance(t[1], t[2]), h2_distance(t[2], t[0])};
    int e = static_cast<int>(std::max_element(l, l + 3) - l);
    const H2Point& x = t[e];
    const H2Point& y = t[(e + 1) % 3];
    const H2Point& z = t[(e + 2) % 3];
    H2Point m = midpoint(x, y);
    stack.push_back({m, y, z});
    stack.push_back({x, m, z});
  }
  mesh.h = cover;

  // Merge coincident corners (shared edges and seams between seeds).
  const double qcell = 1e-7;
  std::unordered_map<CellKey, std::vector<int>, CellHash> grid;
  auto add_vertex = [&](const H2Point& p) {
    Vec2 pc = p.poincare();
    CellKey k = cell_of(pc, qcell);
    for (long long di = -1; di <= 1; ++di)
      for (long long dj = -1; dj <= 1; ++dj) {
        auto it = grid.find({k.i + di, k.j + dj});
        if (it == grid.end()) continue;
        for (int idx : it->second)
          if (h2_distance(mesh.vertices[idx], p) < 1e-9) return;
      }
    grid[k].push_back(static_cast<int>(mesh.vertices.size()));
    mesh.vertices.push_back(p);
  };
  for (const auto& t : leaves)
    for (const auto& p : t) add_vertex(p);

  // Neighbor pairs: Euclidean Poincare distance is at most half the hyperbolic one.
  const double rho = mesh.neighbor_radius;
  const double cell = 0.5 * rho;
  const double chr = std::cosh(rho);
  std::unordered_map<CellKey, std::vector<int>, CellHash> buckets;
  for (std::size_t i = 0; i < mesh.vertices.size(); ++i)
    buckets[cell_of(mesh.vertices[i].poincare(), cell)].push_back(static_cast<int>(i));
  for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
    const Vec3& pi = mesh.vertices[i].vec();
    CellKey k = cell_of(mesh.vertices[i].poincare(), cell);
    std::vector<int> found;
    for (long long di = -1; di <= 1; ++di)
      for (long long dj = -1; dj <= 1; ++dj) {
        auto it = buckets.find({k.i + di, k.j + dj});
        if (it == buckets.end()) continue;
        for (int j : it->second)
          if (j > static_cast<int>(i) && -minkowski(pi, mesh.vertices[j].vec()) <= chr) found.push_back(j);
      }
    std::sort(found.begin(), found.end());
    for (int j : found) {
      double d = h2_distance(mesh.vertices[i], mesh.vertices[j]);
      if (d <= rho) {
        mesh.edges.push_back({static_cast<int>(i), j});
        mesh.lengths.push_back(d);
      }
    }
  }

  std::size_t n = mesh.vertices.size();
  mesh.offsets.assign(n + 1, 0);
  for (const auto& e : mesh.edges) {
    ++mesh.offsets[e[0] + 1];
    ++mesh.offsets[e[1] + 1];
  }
  for (std::size_t i = 0; i < n; ++i) mesh.offsets[i + 1] += mesh.offsets[i];
  mesh.adj_target.resize(mesh.offsets[n]);
  mesh.adj_edge.resize(mesh.offsets[n]);
  std::vector<int> fill(mesh.offsets.begin(), mesh.offsets.end() - 1);
  for (std::size_t e = 0; e < mesh.edges.size(); ++e) {
    int a = mesh.edges[e][0], b = mesh.edges[e][1];
    mesh.adj_target[fill[a]] = b;
    mesh.adj_edge[fill[a]++] = static_cast<int>(e);
    mesh.adj_target[fill[b]] = a;
    mesh.adj_edge[fill[b]++] = static_cast<int>(e);
  }
  return mesh;
}

GeodesicMesh GeodesicMesh::regular_polygon(int sides, double circumradius, double h,
                                           double neighbor_factor) {
  std::vector<std::array<H2Point, 3>> seeds;
  for (int k = 0; k < sides; ++k) {
    double a0 = (2 * k + 1) * M_PI / sides, a1 = (2 * k + 3) * M_PI / sides;
    seeds.push_back({H2Point(), H2Point::polar(circumradius, a0), H2Point::polar(circumradius, a1)});
  }
  return from_triangles(seeds, h, neighbor_factor);
}

int GeodesicMesh::nearest_vertex(const H2Point& x) const {
  int best = -1;
  double bd = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    double d = -minkowski(x.vec(), vertices[i].vec());
    if (d < bd) {
      bd = d;
      best = static_cast<int>(i);
    }
  }
  return best;
}

std::vector<int> GeodesicMesh::vertices_within(const H2Point& x, double radius) const {
  std::vector<int> out;
  double c = std::cosh(radius);
  for (std::size_t i = 0; i < vertices.size(); ++i)
    if (-minkowski(x.vec(), vertices[i].vec()) <= c && h2_distance(x, vertices[i]) <= radius)
      out.push_back(static_cast<int>(i));
  return out;
}

bool GeodesicMesh::connected() const {
  if (vertices.empty()) return true;
  std::vector<char> seen(vertices.size(), 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  std::size_t count = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int k = offsets[v]; k < offsets[v + 1]; ++k) {
      int w = adj_target[k];
      if (!seen[w]) {
        seen[w] = 1;
        ++count;
        stack.push_back(w);
      }
    }
  }
  return count == vertices.size();
}

InducedDistanceField::InducedDistanceField(FunctionPtr u, std::shared_ptr<const GeodesicMesh> mesh,
                                           QuadratureOptions q)
    : u_(std::move(u)), mesh_(std::move(mesh)), q_(q) {
  if (!mesh_->connected()) throw DisconnectedMesh("mesh graph is not connected");
  w_.resize(mesh_->edges.size());
  parallel_for(w_.size(), [&](std::size_t e) {
    const auto& ed = mesh_->edges[e];
    w_[e] = segment_length_u(*u_, mesh_->vertices[ed[0]], mesh_->vertices[ed[1]], q_);
  });
}

std::vector<double> InducedDistanceField::dijkstra(const std::vector<std::pair<int, double>>& seeds) const {
  const GeodesicMesh& m = *mesh_;
  std::vector<double> dist(m.vertices.size(), std::numeric_limits<double>::infinity());
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
  for (const auto& [v, d] : seeds) {
    if (d < dist[v]) {
      dist[v] = d;
      pq.push({d, v});
    }
  }
  while (!pq.empty()) {
    auto [d, v] = pq.top();
    pq.pop();
    if (d > dist[v]) continue;
    for (int k = m.offsets[v]; k < m.offsets[v + 1]; ++k) {
      int w = m.adj_target[k];
      double nd = d + w_[m.adj_edge[k]];
      if (nd < dist[w]) {
        dist[w] = nd;
        pq.push({nd, w});
      }
    }
  }
  return dist;
}

std::vector<double> InducedDistanceField::single_source(int s) const { return dijkstra({{s, 0.0}}); }

const std::vector<double>& InducedDistanceField::row(int s) const {
  {
    std::lock_guard<std::mutex> lock(cache_mutex_);
    auto it = cache_.find(s);
    if (it != cache_.end()) return it->second;
  }
  std::vector<double> r = single_source(s);
  std::lock_guard<std::mutex> lock(cache_mutex_);
  return cache_.emplace(s, std::move(r)).first->second;
}

double InducedDistanceField::distance(int a, int b) const {
  if (a == b) return 0;
  // Always run from the smaller index so the value is exactly symmetric.
  return row(std::min(a, b))[std::max(a, b)];
}

void InducedDistanceField::precompute(const std::vector<int>& sources) const {
  parallel_for(sources.size(), [&](std::size_t i) { row(sources[i]); });
}

std::vector<double> InducedDistanceField::point_row(const H2Point& x) const {
  std::vector<std::pair<int, double>> seeds;
  for (int v : mesh_->vertices_within(x, mesh_->neighbor_radius))
    seeds.emplace_back(v, segment_length_u(*u_, x, mesh_->vertices[v], q_));
  if (seeds.empty()) throw OutOfRange("point lies outside the mesh coverage");
  return dijkstra(seeds);
}

double InducedDistanceField::point_to_row(const std::vector<double>& row, const H2Point& y) const {
  double best = std::numeric_limits<double>::infinity();
  for (int v : mesh_->vertices_within(y, mesh_->neighbor_radius))
    best = std::min(best, row[v] + segment_length_u(*u_, mesh_->vertices[v], y, q_));
  if (!std::isfinite(best)) throw OutOfRange("point lies outside the mesh coverage");
  return best;
}

double InducedDistanceField::point_distance(const H2Point& x, const H2Point& y) const {
  double best = point_to_row(point_row(x), y);
  if (h2_distance(x, y) <= mesh_->neighbor_radius)
    best = std::min(best, segment_length_u(*u_, x, y, q_));
  return best;
}

}  // namespace adscurv
