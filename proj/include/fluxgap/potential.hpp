#pragma once

#include "fluxgap/geometry.hpp"
#include "fluxgap/mesh.hpp"

#include <functional>
#include <span>
#include <vector>

namespace fluxgap {

struct Pole {
  Vec2 at = Vec2::Zero();
  double flux = 0.0;
};

/// Closed one-form A = sum_j flux_j * (-(y - a_j2), x - a_j1) / |x - a_j|^2
/// (+ an optional exact part df). Its flux around a loop enclosing a_j once
/// counter-clockwise is flux_j, with flux = (1/2pi) * circulation.
struct ClosedPotential {
  std::vector<Pole> poles;
  // Optional exact perturbation, for gauge-invariance tests only.
  std::function<double(const Vec2&)> exact_f;
  std::function<Vec2(const Vec2&)> exact_grad;

  bool has_exact_part() const { return static_cast<bool>(exact_f); }
  void validate() const;  // finite poles and fluxes
  // Every pole must lie strictly inside a hole (or be one of the point holes).
  void validate_against(const PlanarDomain& domain) const;
};

// Throws SingularityError within 1e-12 of a pole.
Vec2 eval(const ClosedPotential& A, const Vec2& x);

/// Exact line integral of A along the straight segment a -> b: each pole
/// contributes flux * (signed angle subtended). Throws SingularityError if
/// the segment passes within 1e-12 of a pole.
double line_integral(const ClosedPotential& A, const Vec2& a, const Vec2& b);

// (1/2pi) * circulation around a closed polyline (last point joins the first).
double flux_around(const ClosedPotential& A, std::span<const Vec2> loop);

/// Fluxes around the holes of `domain`, matched by pole containment.
/// Holes without a pole carry flux 0; a pole outside every hole is an error.
std::vector<double> hole_fluxes(const ClosedPotential& A, const PlanarDomain& domain);

enum class TreeOrder { breadth_first, depth_first };

/// f with df = A on the simply connected region formed by the listed
/// triangles: integrates A along a spanning tree from `root` (a mesh vertex
/// index, -1 = first vertex of the region). Vertices outside the region get
/// NaN. Throws TopologyError if the region is not connected and simply
/// connected, SingularityError if a pole lies in the region.
std::vector<double> gauge_scalar(const ClosedPotential& A, const TriMesh& mesh, const std::vector<int>& region,
                                 int root = -1, TreeOrder order = TreeOrder::breadth_first);

}  // namespace fluxgap
