#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "adscurv/hyp2.hpp"
#include "adscurv/report.hpp"
#include "adscurv/surface.hpp"

namespace adscurv {

// Orientation-preserving isometry as a unimodular 2x2 matrix up to sign, acting on
// the upper half plane; the hyperboloid action goes through z = (x2 + i)/(x0 - x1).
class Mobius {
 public:
  Mobius() : Mobius(1, 0, 0, 1) {}
  // Rescales to determinant one; OutOfRange when det <= 0.
  Mobius(double a, double b, double c, double d);

  static Mobius translation(double angle, double length);
  static Mobius rotation(double angle);

  double a() const { return m_[0]; }
  double b() const { return m_[1]; }
  double c() const { return m_[2]; }
  double d() const { return m_[3]; }
  double det() const { return m_[0] * m_[3] - m_[1] * m_[2]; }
  double trace() const { return m_[0] + m_[3]; }
  double abs_trace() const { return abs_trace_; }
  const std::array<double, 9>& so21() const { return so_; }

  Mobius operator*(const Mobius& o) const;
  Mobius inverse() const;
  Vec3 apply(const Vec3& v) const;
  H2Point apply(const H2Point& p) const;

  double frobenius() const;
  // Frobenius distance to +o or -o, whichever is smaller.
  double sign_distance(const Mobius& o) const;

 private:
  std::array<double, 4> m_;
  std::array<double, 9> so_;
  double abs_trace_;
};

// Displacement of a hyperbolic element: 2 arccosh(|tr|/2).
double translation_length(const Mobius& sigma);

class FuchsianGroup {
 public:
  static constexpr int kDefaultMaxBallRadius = 8;

  FuchsianGroup(std::vector<Mobius> generators, int genus, std::vector<int> relator,
                int max_ball_radius = kDefaultMaxBallRadius);

  const std::vector<Mobius>& generators() const { return gens_; }
  int genus() const { return genus_; }
  int euler_characteristic() const { return 2 - 2 * genus_; }
  const std::vector<int>& relator() const { return relator_; }
  int max_ball_radius() const { return max_radius_; }

  // Signed one-based letters: k means generator k, -k its inverse.
  Mobius word(const std::vector<int>& letters) const;
  // Frobenius distance of the relator product to +-identity.
  double relator_residual() const;

  // All reduced words of length <= radius, deduplicated; identity first.
  const std::vector<Mobius>& ball(int radius) const;
  double systole(int radius) const;

  // Fundamental polygon data, present for the octagon group.
  bool has_polygon() const { return !polygon_.empty(); }
  const std::vector<H2Point>& polygon() const { return polygon_; }
  // Element carrying the tile across side j of the polygon (side j faces angle 2 pi j / n).
  const Mobius& side_neighbor(int j) const { return neighbors_[j]; }
  double inradius() const { return inradius_; }
  double circumradius() const { return circumradius_; }
  double side_length() const;
  double area() const;

  // Every element moving the base point at most `radius`, sorted by that displacement.
  std::vector<Mobius> elements_within(double radius) const;
  bool in_polygon(const H2Point& p, double tol = 1e-12) const;
  // Image of p in the closed polygon; the applied element is returned via sigma.
  H2Point reduce(const H2Point& p, Mobius* sigma = nullptr) const;

  void set_polygon(std::vector<H2Point> corners, std::vector<Mobius> neighbors);

 private:
  std::vector<Mobius> gens_;
  int genus_;
  std::vector<int> relator_;
  int max_radius_;
  std::vector<H2Point> polygon_;
  std::vector<Mobius> neighbors_;
  double inradius_ = 0, circumradius_ = 0;
  mutable std::mutex mutex_;
  mutable std::map<int, std::vector<Mobius>> balls_;
};

using GroupPtr = std::shared_ptr<const FuchsianGroup>;

// Four generators pairing opposite sides of the regular octagon with angles pi/4.
GroupPtr genus2_octagon_group();

// Removes near-duplicate elements (up to sign) keyed by the image of a base point.
class ElementSet {
 public:
  explicit ElementSet(double rel_tol = 1e-8);
  // Inserts when new; returns the index of the stored element.
  int insert(const Mobius& m, bool* inserted = nullptr);
  int find(const Mobius& m) const;
  const std::vector<Mobius>& elements() const { return items_; }

 private:
  std::array<long long, 2> key(const Mobius& m) const;
  double tol_;
  std::vector<Mobius> items_;
  std::map<std::array<long long, 2>, std::vector<int>> buckets_;
};

// Exact distance on the hyperbolic quotient, multiplied by `scale`.
class HyperbolicQuotient {
 public:
  explicit HyperbolicQuotient(GroupPtr group, double scale = 1.0);
  double distance(const H2Point& x, const H2Point& y) const;
  double scale() const { return scale_; }
  const FuchsianGroup& group() const { return *group_; }

 private:
  GroupPtr group_;
  double scale_;
  std::vector<Mobius> elements_;
  std::vector<double> shift_;
};

struct FuchsianCConvex {
  FunctionPtr u;
  GroupPtr group;
  double tolerance = 1e-8;
};

// Support vector scale * sigma(point) for every kept element.
struct OrbitSeed {
  H2Point point;
  double scale = 0.5;
};

// Pointwise max over ball translates of the seed support planes, keeping only the
// translates that can be active within `region_radius` of the origin.
FunctionPtr orbit_envelope(const FuchsianGroup& g, const std::vector<OrbitSeed>& seeds,
                           int ball_radius, double R, double region_radius);
// Same, with every translate that can be active in the region (no truncation there).
FunctionPtr orbit_envelope_complete(const FuchsianGroup& g, const std::vector<OrbitSeed>& seeds,
                                    double R, double region_radius);
// Randomized invariant example: one or two seeds in the polygon, random scale and bound.
FuchsianCConvex random_orbit_envelope(GroupPtr g, std::uint64_t seed, double region_radius);

// Uniform samples of the fundamental polygon.
H2Point random_polygon_point(const FuchsianGroup& g, Rng& rng);

// sup |u(x) - u(s x)| over sampled polygon points and generators (and inverses).
Report invariance_check(const FuchsianCConvex& fc, int samples, std::uint64_t seed);

// Mesh of the union of the tiles s(F) for s in the ball.
GeodesicMesh tiled_mesh(const FuchsianGroup& g, int ball_radius, double h,
                        double neighbor_factor = GeodesicMesh::kDefaultNeighborFactor);

// min over the ball of d_u(x, s y); BallInsufficient when some omitted translate
// could still win by the lower bound d_u >= K d_H.
double quotient_distance(const FuchsianCConvex& fc, const InducedDistanceField& field,
                         const H2Point& x, const H2Point& y, int ball_radius, double K);

}  // namespace adscurv
