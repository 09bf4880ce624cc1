#pragma once

#include "fluxgap/geometry.hpp"
#include "fluxgap/mesh.hpp"
#include "fluxgap/solver.hpp"

#include <optional>
#include <string>
#include <vector>

namespace fluxgap {

// ---------------------------------------------------------------------------
// Overlapping annuli for one hole.
//
// With rho1 = d(., G) and rho2 = d(., boundary of F):
//   F_k = {rho1 < k beta} (inside F),  G_1 = G,
//   G_k = {rho1 < (k-1) beta} and {rho2 > beta}  (k >= 2),
// and the piece is Omega_k = F_k minus the closure of G_k. Both sets are
// intersections of two convex shapes, which is how they are stored: the
// predicates are exact, the sampled boundaries are only for plotting and
// perimeters.

/// Intersection of two compact convex shapes (second one optional).
struct ConvexPair {
  ConvexShape a = ConvexShape::disk(Vec2::Zero(), 1.0);
  std::optional<ConvexShape> b;

  double signed_distance_bound(const Vec2& x) const;  // max of the two signed distances
  bool contains(const Vec2& x) const;                 // open
  bool contains_closed(const Vec2& x, double tol = 0.0) const;
  // Largest t with origin + t dir in the closed set; origin inside.
  double ray_exit(const Vec2& origin, const Vec2& dir) const;
};

struct PartitionOptions {
  int boundary_samples = 1024;  // per loop
  int cone_samples = 256;       // per vertex of the inner boundary
  WidthOptions widths;          // for B of the whole domain
};

// What the inner set G_k is made of: G itself (first piece), only the
// offset {rho1 < (k-1) beta}, only the parallel set {rho2 > beta}, or both
// (then G.a is the offset and G.b the parallel set).
enum class InnerBoundary { hole, offset, parallel, mixed };

struct AnnulusPiece {
  int k = 1;  // 1-based, as in the construction
  double beta = 0.0;
  ConvexPair F;
  ConvexPair G;
  InnerBoundary inner = InnerBoundary::hole;
  std::vector<Vec2> outer_loop;  // sampled boundary of F_k, CCW
  std::vector<Vec2> inner_loop;  // sampled boundary of G_k, CCW
  double outer_perimeter = 0.0;  // |boundary of F_k|
  // Widths of the piece: orthogonal rays of G_k truncated at the boundary of F_k.
  double width_min = 0.0;
  double width_max = 0.0;
  Segment width_min_ray;
  Segment width_max_ray;

  bool contains(const Vec2& x) const { return F.contains(x) && !G.contains_closed(x); }
  // Closed version used to assign mesh triangles (covers the seams).
  bool contains_closed(const Vec2& x, double tol) const {
    return F.contains_closed(x, tol) && !G.contains(x);
  }
};

struct AnnuliPartition {
  PlanarDomain domain;
  double beta = 0.0;  // exact gap between hole and outer boundary
  double B = 0.0;     // sampled maximal width
  int n = 0;          // ceil(B / beta)
  bool count_exceeds_bound = false;  // ceil(B/beta) > 2B/beta (never expected)
  bool nudged = false;               // beta moved by -1e-9 off a degenerate level
  std::vector<AnnulusPiece> pieces;
};

/// Throws ValidationError unless the domain has exactly one non-point hole.
AnnuliPartition annuli_partition(const PlanarDomain& domain, const PartitionOptions& opts = {});

enum class VertexType {
  hole_corner = 0,  // corner of G itself (first piece only)
  parallel_mixed = 1,  // one arc parallel to G, one parallel to the boundary of F
  cut_locus = 2,       // both arcs parallel to the boundary of F
};

struct WedgeVertex {
  Vec2 p = Vec2::Zero();
  VertexType type = VertexType::parallel_mixed;
  Vec2 normal_lo = Vec2::Zero();  // outward normals of the two arcs
  Vec2 normal_hi = Vec2::Zero();
  double cone_angle = 0.0;  // angle between the two normals
  double B_p = 0.0;         // longest ray of the wedge inside F_k
  double ratio = 0.0;       // beta / B(p)
};

/// Every vertex of the inner boundary of the piece, classified. Throws
/// Error with a dump of the local geometry if a vertex cannot be classified.
std::vector<WedgeVertex> wedge_report(const AnnulusPiece& piece, const ConvexShape& outer, int cone_samples = 256);

std::string vertex_type_name(VertexType t);

// ---------------------------------------------------------------------------
// Equidistant cells for several holes.

struct EquidistantCurve {
  std::vector<std::vector<Vec2>> polylines;
  double max_residual = 0.0;  // max |rho_i - rho_j| over the samples
  bool straight = false;      // all samples on one line within 1e-7
  double line_residual = 0.0;
};

/// Zero set of d(., Gi) - d(., Gj) in the box, by marching squares on a
/// resolution x resolution grid with each crossing refined by bisection
/// along its grid edge. Throws ValidationError if the shapes meet; throws
/// Error if two points / equal disks do not give a straight line.
EquidistantCurve equidistant_curve(const ConvexShape& gi, const ConvexShape& gj, const Rect& box, int resolution);

struct Cell {
  int j = 0;
  bool exact = false;  // bisector cells (points / equal disks): exits solved in closed form
  std::vector<Vec2> boundary;      // exits of the orthogonal rays of G_j, in boundary order
  std::vector<int> owner;          // per boundary sample: neighbouring hole, or -1 on the boundary of F
  std::vector<Ray> rays;           // the orthogonal rays (origin on G_j)
  std::vector<double> lengths;     // ray length to the cell boundary
  double perimeter = 0.0;          // |boundary of F_j|
  double inner_perimeter = 0.0;    // |boundary of G_j|
  double width_min = 0.0;          // beta of the cell annulus
  double width_max = 0.0;          // B of the cell annulus
  double area = 0.0;               // of F_j (polygon of the samples)
  // Audit on the grid of CellOptions::resolution: grid points of the domain
  // that fall in this cell, and those whose membership disagrees with the
  // traced boundary (away from the boundary itself).
  int audit_samples = 0;
  int audit_mismatches = 0;
};

/// Index of the hole nearest to x (ties go to the lower index).
int nearest_hole(const PlanarDomain& domain, const Vec2& x);
// d(x, G_j) < d(x, G_k) for all k != j (x in the domain).
bool in_cell(const PlanarDomain& domain, int j, const Vec2& x);

struct CellOptions {
  int resolution = 200;        // grid for the disjointness / coverage audit
  int boundary_samples = 1024;
  int cone_samples = 256;
};

/// One cell per hole. Throws ValidationError for fewer than two holes and
/// ResolutionError if the audit grid leaves a cell without samples.
std::vector<Cell> cells(const PlanarDomain& domain, const CellOptions& opts = {});

/// min over the orthogonal rays of G_j of cos(angle between the ray and the
/// outward normal of the cell at the exit point).
double star_cosine(const PlanarDomain& domain, const Cell& cell);

// ---------------------------------------------------------------------------

/// Triangles of `mesh` grouped by piece. Each triangle goes to every piece
/// whose closed region contains its centroid (overlapping), or to the cell
/// of the nearest hole (disjoint).
std::vector<std::vector<int>> assign_annuli(const TriMesh& mesh, const AnnuliPartition& part);
std::vector<std::vector<int>> assign_cells(const TriMesh& mesh, const PlanarDomain& domain);

struct PartitionCheck {
  bool disjoint = false;
  int n = 0;
  double lambda = 0.0;                 // lambda_1 of the whole mesh
  std::vector<double> piece_lambda;    // lambda_1 of every piece
  std::vector<double> piece_mass;      // share of |u|^2 of the ground state on every piece
  int mass_k = -1;    // piece of largest mass (the index the argument picks)
  int best_k = -1;    // piece with the smallest lambda_k
  double rhs = 0.0;   // min_j lambda_j (disjoint) or lambda_{mass_k} / n
  double margin = 0.0;  // lambda / rhs (inf when rhs = 0)
  double tol = 0.0;
  bool holds = false;   // lambda >= rhs * (1 - tol)
};

/// Solves on the full mesh and on the submesh of every piece and checks the
/// partition inequality. Piece solves run on up to `jobs` threads.
PartitionCheck partition_eigen_check(const TriMesh& mesh, const ClosedPotential& A,
                                     const std::vector<std::vector<int>>& pieces, bool disjoint,
                                     const SolverOptions& opts = {}, double tol = 0.05, int jobs = 1,
                                     Discretization scheme = Discretization::peierls);

}  // namespace fluxgap
