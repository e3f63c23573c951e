#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "adscurv/fuchsian.hpp"
#include "adscurv/hyp2.hpp"
#include "adscurv/report.hpp"
#include "adscurv/surface.hpp"

namespace adscurv {

// Combinatorial surface with edge lengths. Side k of a triangle is opposite corner k and
// runs from corner k+1 to corner k+2; edge_sign says whether that agrees with the
// edge's own orientation (edges[e][0] -> edges[e][1]).
struct MetricTriangulation {
  int genus = 0;
  int num_vertices = 0;
  std::vector<std::array<int, 3>> triangles;
  std::vector<std::array<int, 2>> edges;
  std::vector<std::array<int, 3>> triangle_edges;
  std::vector<std::array<int, 3>> edge_sign;
  std::vector<double> edge_length;
  double epsilon = 0;

  // Optional source geometry: lifted corners per triangle, lifted endpoints per edge.
  std::vector<std::array<H2Point, 3>> triangle_lifts;
  std::vector<std::array<H2Point, 2>> edge_lifts;
  std::vector<H2Point> vertex_lifts;

  int euler_characteristic() const;
  // True when every edge borders exactly two triangle sides.
  bool closed() const;
  // Fills edges, triangle_edges and edge_sign from vertex pairs (needs a simple complex).
  void build_edges_from_vertices();
  // Index checks, strict triangle inequalities (BadTriangle), and for closed
  // surfaces the Euler relations.
  void validate() const;
};

struct ConeSurface {
  MetricTriangulation mt;
  std::vector<TriangleShape> shapes;
  std::vector<std::array<double, 3>> corner_angles;
  std::vector<double> cone_angle;  // per vertex
  std::vector<bool> interior;      // vertex has a full fan of triangles
  std::vector<double> excess;      // alpha + beta + gamma - pi per triangle
  std::vector<double> area;

  int euler_characteristic() const { return mt.euler_characteristic(); }
  double total_excess() const;
  double euler_identity_residual() const;
};

using ConeSurfacePtr = std::shared_ptr<const ConeSurface>;

// BadTriangle(index) for the first triangle failing a strict inequality.
ConeSurface build_cone_surface(const MetricTriangulation& mt);

Report cone_angle_check(const ConeSurface& cs);
Report excess_budget(const ConeSurface& cs);
// comparison angle - source angle <= -area(comparison) - source excess + 1e-8.
Report angle_gap_check(double alpha_source, const TriangleShape& shape, int corner,
                       double source_excess);

// Distances of a computable source surface, evaluated on lifts in H^2.
class SourceMetric {
 public:
  virtual ~SourceMetric() = default;
  // Distance between nearby lifts measured without leaving the lift (one triangle).
  virtual double local_distance(const H2Point& x, const H2Point& y) const = 0;
  // Distance on the quotient surface.
  virtual double distance(const H2Point& x, const H2Point& y) const = 0;
  virtual double tolerance() const = 0;
  // Lower ratio K with local_distance >= K d_H.
  virtual double lower_ratio() const = 0;
  virtual std::string describe() const = 0;
  virtual const FuchsianGroup& group() const = 0;

  // Point at source distance s from a toward b along the lifted segment.
  virtual H2Point along(const H2Point& a, const H2Point& b, double s) const;
  // Source angle at o between the directions to x and y, from comparison angles at
  // shrinking scales eps/4, eps/8, eps/16 with Richardson extrapolation.
  virtual double angle(const H2Point& o, const H2Point& x, const H2Point& y) const;
  double injectivity_estimate() const;
};

using SourcePtr = std::shared_ptr<const SourceMetric>;

// scale * hyperbolic metric; scale 1 is the hyperbolic surface, cos R the constant-u surface.
class ScaledHyperbolicSource : public SourceMetric {
 public:
  ScaledHyperbolicSource(GroupPtr group, double scale);
  double local_distance(const H2Point& x, const H2Point& y) const override;
  double distance(const H2Point& x, const H2Point& y) const override;
  double tolerance() const override { return 1e-12; }
  double lower_ratio() const override { return scale_; }
  std::string describe() const override;
  const FuchsianGroup& group() const override { return *group_; }
  H2Point along(const H2Point& a, const H2Point& b, double s) const override;
  double angle(const H2Point& o, const H2Point& x, const H2Point& y) const override;
  double scale() const { return scale_; }

 private:
  GroupPtr group_;
  double scale_;
  HyperbolicQuotient quotient_;
};

// d_u from a mesh field, with the quotient taken over a group ball.
class InducedSource : public SourceMetric {
 public:
  InducedSource(FuchsianCConvex fc, std::shared_ptr<const InducedDistanceField> field, double K,
                int ball_radius = 2);
  double local_distance(const H2Point& x, const H2Point& y) const override;
  double distance(const H2Point& x, const H2Point& y) const override;
  double tolerance() const override;
  double lower_ratio() const override { return K_; }
  std::string describe() const override;
  const FuchsianGroup& group() const override { return *fc_.group; }

 private:
  FuchsianCConvex fc_;
  std::shared_ptr<const InducedDistanceField> field_;
  double K_;
  int ball_radius_;
};

// Chord gaps for sampled points A on OX, B on OY of sampled triangles.
Report chord_comparison_check(const SourceMetric& source, const ConeSurface& cs, int triangles,
                              int pairs_per_triangle, std::uint64_t seed);

// Geodesic triangulation of the fundamental octagon, refined by midpoint subdivision until
// every triangle has source diameter < epsilon, with sides identified by the group.
MetricTriangulation triangulate_quotient(const SourceMetric& source, double epsilon);
// Same, at a fixed number of subdivision levels.
MetricTriangulation triangulate_octagon(const SourceMetric& source, int levels);
// Post-hoc audit: largest source side over all lifted triangles against mt.epsilon.
Report diameter_audit(const SourceMetric& source, const MetricTriangulation& mt);

class ConeDistanceField {
 public:
  struct Node {
    int vertex = -1;  // surface vertex, or -1 for a Steiner point
    int edge = -1;
    int index = 0;    // Steiner point index in 1..steiner on its edge
  };

  ConeDistanceField(ConeSurfacePtr cs, int steiner_per_edge);

  const ConeSurface& surface() const { return *cs_; }
  int steiner() const { return k_; }
  int node_count() const { return static_cast<int>(nodes_.size()); }
  std::size_t arc_count() const { return arc_target_.size(); }
  const Node& node(int i) const { return nodes_[i]; }
  int vertex_node(int v) const { return v; }
  int steiner_node(int e, int i) const;
  // Fraction along the edge's own orientation.
  double steiner_fraction(int i) const { return static_cast<double>(i) / (k_ + 1); }

  std::vector<double> graph_row(int source) const;
  double graph_distance(int a, int b) const;
  // Graph path straightened inside its sleeve of unfolded triangles.
  double straightened(int a, int b) const;
  // min(graph, straightened), evaluated from the smaller index so it is symmetric.
  double distance(int a, int b) const;

 private:
  struct Arc {
    int tri_from = -1, tri_to = -1;  // -1 for arcs running along an edge
    int cross = -1;                  // edge crossed by a two-triangle chord
    int on_edge = -1;                // edge carrying an along-edge arc
    std::int8_t corner_from = -1, corner_to = -1;  // corners for vertex endpoints
  };
  struct Corner {
    int tri, k;
  };

  void dijkstra(int source, std::vector<double>& dist, std::vector<int>& pred_arc) const;
  std::array<H2Point, 3> place(int t) const;
  H2Point node_position(int node, int tri, int corner, const std::array<H2Point, 3>& P) const;
  double sleeve_length(const std::vector<int>& arcs, int a, int b) const;
  double candidates_length(int s, int t, const std::vector<double>& dist,
                           const std::vector<int>& pred) const;

  static constexpr int kCandidates = 32;
  static constexpr double kCandidateSlack = 0.05;

  ConeSurfacePtr cs_;
  int k_;
  std::vector<Node> nodes_;
  std::vector<std::array<std::array<int, 2>, 2>> edge_sides_;  // (triangle, side) per edge
  std::vector<std::vector<Corner>> fans_;                      // ccw corners per vertex
  std::vector<std::vector<double>> fan_start_;
  std::vector<int> offsets_;
  std::vector<int> arc_target_;
  std::vector<double> arc_weight_;
  std::vector<Arc> arc_info_;
  std::vector<int> arc_source_;
};

// Funnel algorithm in the Klein model: shortest path from s to t through the portals
// (left, right as seen when travelling from s to t). Returns the bend points with s and t.
std::vector<H2Point> funnel_path(const H2Point& s,
                                 const std::vector<std::array<H2Point, 2>>& portals,
                                 const H2Point& t);

// Source lift of a cone-field node: vertex lift or the point along the lifted edge.
H2Point node_lift(const ConeDistanceField& cdf, int node);

// Signed errors d_cone - d_source on sampled node pairs against the window
// [-2 eps - slack, 2 eps - 2 pi chi sinh(eps) + slack].
Report distance_window_check(const SourceMetric& source, const ConeDistanceField& cdf, double epsilon,
                       int pairs, std::uint64_t seed, std::vector<double>* errors = nullptr);

}  // namespace adscurv
