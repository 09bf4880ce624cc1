#pragma once

#include "fluxgap/geometry.hpp"

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

namespace fluxgap {

// Boundary tags: hole j is tagged j >= 0.
inline constexpr int kOuterTag = -1;
// Artificial boundary created by cutting a submesh out of a larger mesh.
inline constexpr int kCutTag = -2;

struct BoundaryEdge {
  int a = 0;
  int b = 0;
  int tag = kOuterTag;
};

/// Conforming triangulation with counter-clockwise triangles and tagged
/// boundary edges. Immutable after construction by convention.
struct TriMesh {
  std::vector<Vec2> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<BoundaryEdge> boundary;
  std::string mesher;

  int n_vertices() const { return static_cast<int>(vertices.size()); }
  int n_triangles() const { return static_cast<int>(triangles.size()); }
  double h() const;  // longest edge
  double area() const;
  int n_edges() const;
  int euler_characteristic() const;  // V - E + T
  /// Throws ValidationError on a non-conforming edge, an inverted or
  /// degenerate triangle, or an untagged / spurious boundary edge.
  void validate() const;
};

double triangle_area(const Vec2& a, const Vec2& b, const Vec2& c);  // signed

struct MeshQuality {
  double min_angle_deg = 0.0;
  double max_angle_deg = 0.0;
  double h = 0.0;
  double area = 0.0;
  int n_boundary_edges = 0;
  int n_untagged = 0;  // boundary edges without a tag
  bool conforming = true;
};
MeshQuality quality(const TriMesh& mesh);

// Edges that belong to exactly one triangle, as (a, b) in triangle order.
std::vector<std::array<int, 2>> free_edges(const TriMesh& mesh);

// --- generators -----------------------------------------------------------

/// (nr+1)*ntheta vertices on concentric circles; each annular sector split
/// into two triangles with checkerboard diagonals.
TriMesh mesh_polar_annulus(double r1, double r2, int nr, int ntheta, const Vec2& center = Vec2::Zero());

struct Rect {
  double x0 = 0, y0 = 0, x1 = 1, y1 = 1;
};

struct RectDiffOptions {
  int min_layers = 3;                // cells across the thinnest gap
  double grading = 1.5;              // max ratio of neighbouring spacings
  std::vector<double> extra_x;       // additional grid lines
  std::vector<double> extra_y;
};

/// Boundary-fitted tensor grid for an axis-parallel rectangle minus an
/// axis-parallel rectangle. Grid lines contain every rectangle coordinate
/// plus the extra lines; spacing is graded from the thin gaps up to target_h.
TriMesh mesh_rect_diff(const Rect& outer, const Rect& inner, double target_h,
                       const RectDiffOptions& opts = {});

// Graded 1-D grid containing every breakpoint, refined near short intervals.
std::vector<double> graded_lines(std::vector<double> breaks, double target_h, int min_layers, double grading);

/// One-hole domain whose outer boundary is star-shaped about the hole
/// centre: vertices c + ((1-s) r_in(t) + s r_out(t)) e_t on a tensor grid in
/// (s, t). Corner directions of both boundaries are included in the angular
/// grid so polygonal boundaries are fitted exactly.
TriMesh mesh_star_annulus(const PlanarDomain& domain, int nr, int ntheta);

struct BlockOptions {
  int rings = 8;         // radial layers of each polar patch (at least 8)
  int block_cells = 0;   // half-width of each patch in grid cells (0: automatic)
};

/// Background square grid with each disk / point hole replaced by a polar
/// patch occupying a square block of grid cells. The patch rays run from the
/// hole centre to the perimeter nodes of the block, so it conforms to the
/// background grid. The outer boundary is a staircase unless it is an
/// axis-parallel rectangle aligned with the grid.
TriMesh mesh_block(const PlanarDomain& domain, double h, const BlockOptions& opts = {});

/// Uniform grid cells lying entirely inside the domain, each split into two
/// triangles. Requires h < beta_tilde/4 so every hole is resolved.
TriMesh mesh_staircase(const PlanarDomain& domain, double h);

/// Triangles listed in `tris`, renumbered. Boundary edges inherited from the
/// parent keep their tag; new boundary edges are tagged kCutTag.
/// `vertex_map` (optional) receives parent index of every new vertex.
TriMesh submesh(const TriMesh& mesh, const std::vector<int>& tris, std::vector<int>* vertex_map = nullptr);

/// Retags every boundary edge by the nearest boundary component of `domain`.
void tag_boundary(TriMesh& mesh, const PlanarDomain& domain);

// --- text format ----------------------------------------------------------

void write_mesh(std::ostream& os, const TriMesh& mesh);
TriMesh read_mesh(std::istream& is);
void export_mesh(const TriMesh& mesh, const std::string& path);
TriMesh import_mesh(const std::string& path);

}  // namespace fluxgap
