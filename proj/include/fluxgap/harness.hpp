#pragma once

#include "fluxgap/bounds.hpp"
#include "fluxgap/geometry.hpp"
#include "fluxgap/mesh.hpp"
#include "fluxgap/partition.hpp"
#include "fluxgap/potential.hpp"
#include "fluxgap/solver.hpp"

#include <json.hpp>

#include <limits>
#include <string>
#include <vector>

namespace fluxgap {

using nlohmann::json;

// --- logging ----------------------------------------------------------------

/// Sets the spdlog level from FLUXGAP_LOG (trace, debug, info, warn, error,
/// off; default warn). Log lines go to stderr.
void init_logging();

// --- JSON documents ---------------------------------------------------------
//
// Shapes:
//   {"type": "polygon", "vertices": [[x, y], ...]}
//   {"type": "disk", "center": [x, y], "radius": r}
//   {"type": "point", "at": [x, y]}
//   {"type": "rounded", "core": [[x, y], ...], "radius": r}
// Domain:    {"outer": shape, "holes": [shape, ...], "pole_radius": delta}
// Potential: {"poles": [{"at": [x, y], "flux": phi}, ...]}

/// Syntax errors become ParseError carrying the 1-based line number.
json parse_json(const std::string& text);
json read_json_file(const std::string& path);

ConvexShape shape_from_json(const json& j);
json shape_to_json(const ConvexShape& s);
PlanarDomain domain_from_json(const json& j);
json domain_to_json(const PlanarDomain& d);
ClosedPotential potential_from_json(const json& j);
json potential_to_json(const ClosedPotential& A);

PlanarDomain load_domain(const std::string& path);

// --- scenarios --------------------------------------------------------------

enum class MesherKind { automatic, polar, star, rect_diff, block, staircase };
enum class SweepAxis { none, flux, epsilon, delta };

std::string mesher_name(MesherKind m);
std::string axis_name(SweepAxis a);

/// One JSON document:
///   {"name": ..., "domain": <domain or path>, "potential": <potential or path>,
///    "mesher": "auto|polar|star|rect_diff|block|staircase",
///    "resolution": [h0, h1, ...]            (strictly decreasing),
///    "solver": {"tol": 1e-8, "seed": 24301, "scheme": "peierls|midpoint"},
///    "widths": {"boundary_samples": 1024, "cone_samples": 256},
///    "sweep": {"axis": "flux|epsilon|delta|none", "values": [...]},
///    "excision": false,
///    "outputs": {"csv": "...", "json": "...", "svg": "..."}}
/// Paths are relative to the scenario file.
struct Scenario {
  std::string name;
  PlanarDomain domain;
  ClosedPotential potential;
  MesherKind mesher = MesherKind::automatic;
  std::vector<double> ladder;
  SolverOptions solver;
  Discretization scheme = Discretization::peierls;
  WidthOptions widths;
  SweepAxis axis = SweepAxis::none;
  std::vector<double> grid;
  bool excision = false;  // sharpness family: add the excision upper bound
  std::string csv, json_out, svg;
  std::string hash;       // FNV-1a of the canonical document
};

Scenario scenario_from_json(const json& j, const std::string& base_dir = ".");
Scenario load_scenario(const std::string& path);

/// Mesh of the domain with target size h. `automatic` picks polar for
/// concentric disks, rect_diff for axis-parallel rectangles, block for disk /
/// point holes and star otherwise. `level` (0, 1, 2, ... along a halving
/// ladder) also scales the boundary-layer and polar-patch resolution so the
/// rungs are uniform refinements of each other.
TriMesh build_mesh(const PlanarDomain& domain, MesherKind mesher, double h, int level = 0);
MesherKind resolve_mesher(const PlanarDomain& domain, MesherKind mesher);

struct LadderResult {
  std::vector<EigenResult> levels;  // coarse -> fine
  LambdaInfo lambda;
  bool exact_zero = false;
};

/// Solves on every rung of the ladder. With three rungs halving h the value
/// is Richardson-extrapolated (when the observed order lies in [1.5, 3]);
/// otherwise it is the finest value.
LadderResult solve_ladder(const PlanarDomain& domain, const ClosedPotential& A, MesherKind mesher,
                          const std::vector<double>& ladder, const SolverOptions& opts,
                          Discretization scheme = Discretization::peierls);

// --- sharpness family -------------------------------------------------------

/// [-4,4]x[0,4] minus [-3,3]x[eps,2].
PlanarDomain sharpness_domain(double eps);
/// Upper bound for lambda_1 from the test function that vanishes on x = +-1
/// across the thin strip and is 1 away from [-2,2]x[0,eps]. The mesh must
/// have grid lines at x = +-1, +-2 and y = eps (rect_diff with h <= 1 does).
double sharpness_excision(const TriMesh& mesh, const ClosedPotential& A, double eps,
                          Discretization scheme = Discretization::peierls);
TriMesh sharpness_mesh(double eps, double h);

// --- sweeps -----------------------------------------------------------------

struct SweepPoint {
  double x = 0.0;
  bool ok = false;
  std::string error;
  LadderResult ladder;
  BoundReport report;
  double excision = std::numeric_limits<double>::quiet_NaN();
  double symmetry_residual = std::numeric_limits<double>::quiet_NaN();
};

/// Runs every grid point (up to `jobs` at a time). A failed point is
/// recorded and the sweep continues. Points come back sorted by x.
std::vector<SweepPoint> run_sweep(const Scenario& sc, int jobs = 1);
std::string sweep_csv(const Scenario& sc, const std::vector<SweepPoint>& pts);

/// The scenario evaluated at one axis value (domain / potential rewritten).
Scenario at_axis(const Scenario& sc, double x);

// --- verification -----------------------------------------------------------

struct Verification {
  LadderResult ladder;
  BoundReport report;
  double excision = std::numeric_limits<double>::quiet_NaN();
};

Verification verify(const Scenario& sc, const ReportOptions& opts = {});
std::string verification_json(const Scenario& sc, const Verification& v);

// --- tables and figures -----------------------------------------------------

std::string invariants_table(const PlanarDomain& domain, const WidthOptions& wo = {});
std::string oracle_table(double r1, double r2, double phi, int k_max = 8);

std::string annuli_svg(const AnnuliPartition& part, const std::vector<std::vector<WedgeVertex>>& wedges);
std::string cells_svg(const PlanarDomain& domain, const std::vector<Cell>& cells,
                      const std::vector<EquidistantCurve>& curves);

std::string fnv1a_hex(const std::string& bytes);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace fluxgap
