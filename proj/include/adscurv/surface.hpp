#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "adscurv/hyp2.hpp"
#include "adscurv/report.hpp"

namespace adscurv {

using Rng = std::mt19937_64;
// Portable uniform draw in [0,1).
inline double uniform01(Rng& rng) { return (rng() >> 11) * 0x1.0p-53; }
inline double uniform(Rng& rng, double a, double b) { return a + (b - a) * uniform01(rng); }
// Area-uniform point in the hyperbolic disc of the given radius about the origin.
H2Point random_disc_point(Rng& rng, double radius);

// Height function u : H2 -> [0, R] whose chart graph is convex.
class CConvexFunction {
 public:
  virtual ~CConvexFunction() = default;
  virtual double value(const H2Point& y) const = 0;
  // Tangent vector g at y with du(v) = <g, v>; false when no closed form exists.
  virtual bool gradient(const H2Point& y, Vec3& g) const;
  virtual double bound() const = 0;
  virtual std::string describe() const = 0;

  // Graph height over the disc: -tan(u) sqrt(1 - |x|^2).
  double chart_height(const Vec2& xbar) const;
  // du(v) for a unit tangent v at y; central differences when no gradient.
  double directional(const H2Point& y, const Vec3& v, double fd_step = 1e-5) const;
};

using FunctionPtr = std::shared_ptr<const CConvexFunction>;

FunctionPtr constant_function(double R);
FunctionPtr callback_function(std::function<double(const H2Point&)> f, double R,
                              std::string name = "callback");

// Support vector of the chart plane a0 + a1 xbar2 + a2 xbar3 (negative on the closed disc).
Vec3 support_vector(double a0, double a1, double a2);

// u = min(R, min_i arctan(-<m_i, y>)): the chart graph is the pointwise max of
// the half ellipsoid of height R and the planes carried by the m_i.
class SupportEnvelope : public CConvexFunction {
 public:
  SupportEnvelope(std::vector<Vec3> supports, double R, std::string name = "envelope");
  double value(const H2Point& y) const override;
  bool gradient(const H2Point& y, Vec3& g) const override;
  double bound() const override { return R_; }
  std::string describe() const override { return name_; }
  const std::vector<Vec3>& supports() const { return m_; }

 private:
  int active(const H2Point& y, double& best) const;
  std::vector<Vec3> m_;
  double R_;
  double tanR_;
  std::string name_;
};

// Pointwise max of the two chart graphs, i.e. the pointwise min of heights.
FunctionPtr chart_max(FunctionPtr a, FunctionPtr b);

struct QuadratureOptions {
  double panel_length = 0.2;
  double fd_step = 1e-5;
};

// Lorentzian length of the lifted geodesic segment [a,b].
double segment_length_u(const CConvexFunction& u, const H2Point& a, const H2Point& b,
                        const QuadratureOptions& q = {});
double curve_length(const CConvexFunction& u, const H2Polyline& c,
                    const QuadratureOptions& q = {});

using PointSampler = std::function<H2Point(Rng&)>;

// min over sampled points of min_{|v|=1} |v|_u, i.e. sqrt(cos^2 u - |grad u|^2).
Report spacelike_check(const CConvexFunction& u, int samples, std::uint64_t seed,
                       const PointSampler& sampler = nullptr);

// Sampled bounds, midpoint convexity of the chart graph, and boundary decay.
Report cconvex_audit(const CConvexFunction& u, int samples, std::uint64_t seed);

class GeodesicMesh {
 public:
  std::vector<H2Point> vertices;
  std::vector<std::array<int, 2>> edges;
  std::vector<double> lengths;
  std::vector<int> offsets, adj_target, adj_edge;
  double h = 0;                // certified covering radius of the meshed region
  double neighbor_radius = 0;  // every vertex pair closer than this is an edge

  static constexpr double kDefaultNeighborFactor = 16.0;

  // Refines each seed triangle until every leaf has covering radius <= h.
  static GeodesicMesh from_triangles(const std::vector<std::array<H2Point, 3>>& seeds,
                                     double h, double neighbor_factor = kDefaultNeighborFactor);
  static GeodesicMesh regular_polygon(int sides, double circumradius, double h,
                                      double neighbor_factor = kDefaultNeighborFactor);

  int nearest_vertex(const H2Point& x) const;
  std::vector<int> vertices_within(const H2Point& x, double radius) const;
  bool connected() const;
};

// Largest distance from a point of the triangle to its nearest corner.
double covering_radius(const H2Point& a, const H2Point& b, const H2Point& c);

class InducedDistanceField {
 public:
  InducedDistanceField(FunctionPtr u, std::shared_ptr<const GeodesicMesh> mesh,
                       QuadratureOptions q = {});

  const GeodesicMesh& mesh() const { return *mesh_; }
  std::shared_ptr<const GeodesicMesh> mesh_ptr() const { return mesh_; }
  const CConvexFunction& function() const { return *u_; }
  FunctionPtr function_ptr() const { return u_; }
  const std::vector<double>& weights() const { return w_; }
  const QuadratureOptions& quadrature() const { return q_; }

  std::vector<double> single_source(int s) const;
  const std::vector<double>& row(int s) const;
  double distance(int a, int b) const;
  void precompute(const std::vector<int>& sources) const;

  // Distances from an arbitrary point, attached to vertices within the neighbor radius.
  std::vector<double> point_row(const H2Point& x) const;
  double point_distance(const H2Point& x, const H2Point& y) const;
  double point_to_row(const std::vector<double>& row, const H2Point& y) const;

 private:
  std::vector<double> dijkstra(const std::vector<std::pair<int, double>>& seeds) const;
  FunctionPtr u_;
  std::shared_ptr<const GeodesicMesh> mesh_;
  QuadratureOptions q_;
  std::vector<double> w_;
  mutable std::mutex cache_mutex_;
  mutable std::unordered_map<int, std::vector<double>> cache_;
};

Report length_convergence_check(const std::vector<FunctionPtr>& u_seq, const CConvexFunction& u_limit,
                                const H2Polyline& c, double threshold, double R,
                                const QuadratureOptions& q = {});

}  // namespace adscurv
