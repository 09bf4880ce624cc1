#pragma once

#include <Eigen/Core>

#include <optional>
#include <span>
#include <vector>

namespace fluxgap {

using Vec2 = Eigen::Vector2d;

inline double cross(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }
inline Vec2 perp_ccw(const Vec2& a) { return Vec2(-a.y(), a.x()); }
// Outward normal of a directed edge of a counter-clockwise polygon.
inline Vec2 outward_normal(const Vec2& a, const Vec2& b) {
  Vec2 e = b - a;
  return Vec2(e.y(), -e.x()).normalized();
}

enum class ShapeKind { polygon, disk, point, rounded };

// Similarity transform x -> scale * R(angle) x + translation.
struct Transform2 {
  double angle = 0.0;
  Vec2 translation = Vec2::Zero();
  double scale = 1.0;

  Vec2 apply(const Vec2& x) const;
};

/// A compact convex planar set stored as a convex "core" (a single point or a
/// counter-clockwise polygon) dilated by a disk of radius `radius()`.
///
/// polygon = polygon core, radius 0; disk = point core, radius r;
/// point = point core, radius 0 (legal only as a hole / pole);
/// rounded = polygon core, radius r > 0 (a polygon with circular corners,
/// which is the smooth convex family used for injectivity-radius tests).
class ConvexShape {
 public:
  /// Accepts either orientation (clockwise input is reversed). Consecutive
  /// duplicates are dropped and collinear vertices merged; throws
  /// ValidationError unless at least three strictly convex vertices remain.
  static ConvexShape polygon(std::vector<Vec2> vertices);
  static ConvexShape disk(const Vec2& center, double radius);
  static ConvexShape point(const Vec2& center);
  static ConvexShape rounded(std::vector<Vec2> core, double radius);

  ShapeKind kind() const { return kind_; }
  const std::vector<Vec2>& core() const { return core_; }
  double radius() const { return radius_; }
  bool polygonal_core() const { return core_.size() >= 3; }
  // Boundary is C^1 (disks and rounded polygons).
  bool smooth() const { return kind_ == ShapeKind::disk || kind_ == ShapeKind::rounded; }
  Vec2 interior_point() const;

  // Minkowski sum with the closed disk of radius `a` (a >= 0).
  ConvexShape dilated(double a) const;
  ConvexShape transformed(const Transform2& t) const;

 private:
  ConvexShape(ShapeKind kind, std::vector<Vec2> core, double radius)
      : kind_(kind), core_(std::move(core)), radius_(radius) {}

  ShapeKind kind_;
  std::vector<Vec2> core_;
  double radius_;
};

double area(const ConvexShape& s);
double perimeter(const ConvexShape& s);
double diameter(const ConvexShape& s);

// Negative inside, zero on the boundary, positive outside.
double signed_distance(const ConvexShape& s, const Vec2& x);
bool contains(const ConvexShape& s, const Vec2& x);  // open set

struct DistanceResult {
  double distance = 0.0;  // signed: negative when x is inside
  Vec2 gradient = Vec2::Zero();
  bool inside = false;
  bool gradient_defined = true;
};

/// Distance from x to the shape together with the unit vector pointing from
/// the nearest boundary point toward x. On the boundary the gradient is the
/// outward normal; inside, the signed distance is returned with `inside` set
/// and the gradient is undefined where the nearest boundary point is not
/// unique.
DistanceResult distance_to_shape(const Vec2& x, const ConvexShape& s);
Vec2 nearest_boundary_point(const ConvexShape& s, const Vec2& x);

// Largest t with origin + t*dir in the closed shape; origin must be inside.
double ray_exit(const ConvexShape& s, const Vec2& origin, const Vec2& dir);
// Smallest t > 0 where the ray enters the open shape, if it does.
std::optional<double> ray_entry(const ConvexShape& s, const Vec2& origin, const Vec2& dir);

struct NormalCone {
  Vec2 vertex = Vec2::Zero();
  Vec2 dir_lo = Vec2::Zero();
  Vec2 dir_hi = Vec2::Zero();
  double angle = 0.0;
  bool degenerate = false;  // smooth boundary point: single normal, angle 0
};

NormalCone normal_cone(const ConvexShape& s, int vertex_index);

// Euclidean distance between two disjoint convex shapes (0 if they meet).
double shape_distance(const ConvexShape& a, const ConvexShape& b);
// Distance from an inner shape to the boundary of a containing shape.
double boundary_gap(const ConvexShape& inner, const ConvexShape& outer);

/// Inner parallel body {x : d(x, complement) >= d}. Empty when d reaches the
/// inradius.
std::optional<ConvexShape> inner_parallel(const ConvexShape& s, double d);

double injectivity_radius(const ConvexShape& s, int n_samples = 1024, double tol = 1e-6);

// d(phi, Z) = min_k |phi - k|, in [0, 1/2]. Throws ValidationError on NaN/inf.
double flux_distance(double phi);

struct BoundarySample {
  Vec2 point;
  Vec2 normal;  // outward unit normal
};

// Closed boundary polyline with roughly n points (corners are always kept).
std::vector<Vec2> boundary_polyline(const ConvexShape& s, int n);
// Convex hull (CCW, collinear points removed).
std::vector<Vec2> convex_hull(std::vector<Vec2> pts);
double polygon_area(std::span<const Vec2> poly);
double polyline_length(std::span<const Vec2> poly, bool closed);
double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b);

// ---------------------------------------------------------------------------

/// F minus the closures of the holes. Point holes are poles; wherever a
/// region is needed they are realized as disks of radius `pole_radius`.
struct PlanarDomain {
  ConvexShape outer = ConvexShape::disk(Vec2::Zero(), 1.0);
  std::vector<ConvexShape> holes;
  double pole_radius = 0.0;

  void validate() const;
  int n_holes() const { return static_cast<int>(holes.size()); }
  bool has_point_holes() const;
  bool all_point_holes() const;
  ConvexShape hole_region(int j) const;
  bool contains(const Vec2& x) const;
  double area() const;
  PlanarDomain transformed(const Transform2& t) const;
};

enum class RayTermination {
  first_exit,  // stop at the first point leaving the domain
  outer_only,  // ignore other holes, stop on the outer boundary
};

struct WidthOptions {
  int boundary_samples = 1024;  // per hole
  int cone_samples = 256;       // per corner
  RayTermination termination = RayTermination::first_exit;
};

struct Segment {
  Vec2 a = Vec2::Zero();
  Vec2 b = Vec2::Zero();
  double length() const { return (b - a).norm(); }
};

struct WidthReport {
  double beta = 0.0;
  double B = 0.0;
  // Conservative pair: beta_lo <= beta, B_hi >= B, padded by the variation
  // of the sampled ray length next to the extremal sample.
  double beta_lo = 0.0;
  double B_hi = 0.0;
  Segment beta_ray;
  Segment B_ray;
  double beta_tilde = 0.0;
  int n_samples = 0;  // boundary samples per hole (the knob)
  int n_rays = 0;     // rays actually shot
};

/// Minimal and maximal width: lengths of rays leaving the inner boundary
/// orthogonally (through the normal cone at corners), truncated on leaving
/// the domain. B is the supremum over boundary points of the largest ray in
/// the cone. Throws ValidationError for a domain without holes.
WidthReport widths(const PlanarDomain& domain, const WidthOptions& opts = {});
double beta_tilde(const PlanarDomain& domain);

// Orthogonal rays of one inner shape: origin on the boundary, unit direction.
struct Ray {
  Vec2 origin;
  Vec2 dir;
};
// Rays grouped in boundary order; each group is a run along one edge / arc /
// corner fan. `extra_targets` are points whose directions are added to fans
// and whose normal projections are added to edge samples.
std::vector<std::vector<Ray>> orthogonal_rays(const ConvexShape& inner, int boundary_samples,
                                              int cone_samples,
                                              std::span<const Vec2> extra_targets = {},
                                              std::span<const Vec2> extra_normals = {});

}  // namespace fluxgap
