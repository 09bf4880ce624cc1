#pragma once

#include "fluxgap/geometry.hpp"
#include "fluxgap/partition.hpp"
#include "fluxgap/potential.hpp"

#include <optional>
#include <string>
#include <vector>

namespace fluxgap {

// --- right-hand sides (pure arithmetic) -------------------------------------

// 4 pi^2 / |dF|^2 * (beta/B)^2 * d^2
double bound_jfa(double perimeter_F, double beta, double B, double d);
// pi^2/8 * |F|^2 / (|dF|^2 D^4) * (beta/B) * d^2
double bound_thm1a(double area_F, double perimeter_F, double diameter_F, double beta, double B, double d);
// pi^2 / |dF|^2 * (beta/B) * d^2 (smooth outer boundary, beta below its injectivity radius)
double bound_thm1b(double perimeter_F, double beta, double B, double d);
// pi^2 / (2 (|dF| + 2 pi B)^2) * (beta/B)^4 * gamma^2
double bound_multi(double perimeter_F, double beta, double B, double gamma);
// 4 pi^2 / |dOmega|^2 * (beta_P / B_P)^2 * gamma^2
double bound_punctured(double perimeter_Omega, double beta_P, double B_P, double gamma);
// 4 pi^2 / |dF|^2 * (beta/B)^2 * gamma^2 (holes: disks of one radius)
double bound_equal_disks(double perimeter_F, double beta, double B, double gamma);
// 4 pi^2 / |dF_1|^2 * (beta m / B) * d^2 (annulus star-shaped w.r.t. its inner boundary)
double bound_starlike(double perimeter_F1, double beta, double B, double m, double d);

// Coefficient of eps * d^2 that the sharpness example quotes for the lower
// bound, against the value the general formula gives for the same data.
double sharpness_paper_coefficient();    // pi^2 / (360 sqrt 5)
double sharpness_formula_coefficient();  // pi^2 / (28800 sqrt 5)

/// Minimal and maximal distance among the poles and from each pole to the
/// outer boundary. Throws ValidationError for coincident poles.
struct PoleWidths {
  double beta = 0.0;
  double B = 0.0;
};
PoleWidths pole_widths(const std::vector<Vec2>& poles, const ConvexShape& outer);

// --- invariants and reports -------------------------------------------------

struct Invariants {
  double area_F = 0.0;
  double perimeter_F = 0.0;
  double perimeter_Omega = 0.0;  // outer plus hole perimeters of the realized domain
  double diameter_F = 0.0;
  double beta = 0.0;
  double B = 0.0;
  double beta_lo = 0.0;  // conservative pair used by every bound
  double B_hi = 0.0;
  double beta_tilde = 0.0;
  double inj = 0.0;  // injectivity radius of the outer boundary
  int n_samples = 0;
  int n_holes = 0;
  bool outer_smooth = false;
  bool all_points = false;
  bool equal_disks = false;
  bool has_points = false;
  std::vector<double> fluxes;  // per hole
  double gamma = 0.0;          // min_j d(flux_j, Z)
  double d = 0.0;              // d(flux, Z) of the single hole (= gamma otherwise)
  std::optional<double> beta_P, B_P;  // pole widths when every hole is a point
  std::optional<double> sharpness_eps;  // set for the rectangle family of the sharpness example
};

Invariants compute_invariants(const PlanarDomain& domain, const ClosedPotential& A, const WidthOptions& wo = {});

struct Hypothesis {
  std::string text;
  bool ok = true;
};

struct BoundEntry {
  std::string name;
  double rhs = 0.0;
  bool applicable = false;
  bool computed = true;
  std::vector<Hypothesis> hypotheses;
  std::string note;
  std::optional<double> paper_stated;  // value quoted in the literature for the same data
  double margin = 0.0;                 // lambda / rhs, inf when rhs == 0
  bool pass = false;
};

struct LambdaInfo {
  bool computed = false;
  double value = 0.0;  // the value compared against the bounds
  double finest = 0.0;
  double h = 0.0;
  std::string mesher;
  double residual = 0.0;
  int dof = 0;
  bool extrapolated = false;
  double order = 0.0;
};

struct StarlikeTerm {
  int hole = 0;
  double perimeter = 0.0;  // |dF_j|
  double beta = 0.0;
  double B = 0.0;
  double m = 0.0;
  double d = 0.0;
  double rhs = 0.0;
};

struct BoundReport {
  Invariants inv;
  LambdaInfo lambda;
  std::vector<BoundEntry> bounds;
  std::vector<StarlikeTerm> starlike_terms;
  bool all_pass() const;  // every applicable bound has margin >= 1
};

struct ReportOptions {
  WidthOptions widths;
  CellOptions cells;
  bool starlike = true;
  // Multiplies every rhs; a test hook for the exit-code contract.
  double scale_rhs = 1.0;
};

BoundReport compose_report(const PlanarDomain& domain, const ClosedPotential& A, const LambdaInfo& lambda,
                           const ReportOptions& opts = {});

/// Star-annulus data of a one-hole domain: orthogonal rays of the hole up to
/// the outer boundary, m = min cos(ray, outer normal).
StarlikeTerm starlike_single(const PlanarDomain& domain, double d, const WidthOptions& wo = {});

std::string report_json(const BoundReport& r);
std::string report_table(const BoundReport& r);

}  // namespace fluxgap
