#pragma once

#include "fluxgap/mesh.hpp"
#include "fluxgap/potential.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace fluxgap {

using cplx = std::complex<double>;
using SpMatC = Eigen::SparseMatrix<cplx>;
using VecC = Eigen::VectorXcd;
using MatC = Eigen::MatrixXcd;

enum class Discretization {
  // Nodal P1 with every off-diagonal entry of the stiffness and mass matrix
  // multiplied by the link phase exp(i * integral of A along the edge).
  // Exactly gauge covariant: integer fluxes give a zero eigenvalue and
  // flux -> 1 - flux is an exact symmetry at fixed mesh.
  peierls,
  // Literal P1 form with A sampled at the three edge midpoints; consistent
  // real mass matrix. Gauge covariant only in the limit h -> 0.
  midpoint,
};

struct SpectralProblem {
  const TriMesh* mesh = nullptr;
  ClosedPotential potential;
  Discretization scheme = Discretization::peierls;
};

struct Pencil {
  SpMatC K;  // Hermitian positive semidefinite
  SpMatC M;  // Hermitian positive definite (real for the midpoint scheme)
};

/// Throws SingularityError if a pole lies in a closed triangle; logs a
/// warning when a pole is within 2h of the mesh.
Pencil assemble(const SpectralProblem& p);

enum class Preconditioner { factorized, jacobi };

struct SolverOptions {
  int k = 1;
  double tol = 1e-8;  // relative residual
  std::uint64_t seed = 0x5EED;
  int max_iter = 500;
  Preconditioner preconditioner = Preconditioner::factorized;
  int dense_threshold = 400;  // direct dense solve at or below this size
  bool keep_vectors = false;
};

struct EigenResult {
  std::vector<double> eigenvalues;  // ascending
  std::vector<double> raw_eigenvalues;  // before zero snapping
  std::vector<double> residuals;    // relative, M^-1 norm
  int dof = 0;
  double h = 0.0;
  int iterations = 0;
  bool exact_zero = false;  // all fluxes integral; eigenvalues in [-tol, tol] reported as 0
  std::string mesher;
  MatC vectors;  // filled when keep_vectors is set
  double lambda1() const { return eigenvalues.at(0); }
};

/// k smallest eigenpairs of K x = lambda M x (LOBPCG). Deterministic for a
/// given seed. Throws ConvergenceError carrying the residual history.
EigenResult solve_lowest(const SpMatC& K, const SpMatC& M, const SolverOptions& opts = {});

/// assemble + solve_lowest, with the exact-zero flag applied when every
/// hole flux of `domain` is an integer (or no domain is given and every pole
/// flux is).
EigenResult solve_problem(const SpectralProblem& p, const SolverOptions& opts = {},
                          const PlanarDomain* domain = nullptr);

double rayleigh(const SpMatC& K, const SpMatC& M, const VecC& u);

/// Upper bound for the discrete lambda_1 from a test function phi supported
/// on the simply connected triangle set `region`: phi must vanish at every
/// vertex of the listed Dirichlet edges; u = phi * exp(i f) with df = A on
/// the region and u = 0 elsewhere.
double excision_upper(const SpectralProblem& p, const Pencil& pencil, const std::vector<int>& region,
                      const std::vector<std::array<int, 2>>& dirichlet_edges, const std::vector<double>& phi);

struct Extrapolation {
  double value = 0.0;          // Richardson estimate, or the finest value
  double order = 0.0;          // observed order (NaN when undefined)
  bool extrapolated = false;   // false: non-monotone or stagnant triplet
  bool low_order = false;      // observed order below 1.5
  std::vector<double> levels;  // coarse -> fine
};

/// Richardson extrapolation assuming second order from values at h, h/2, h/4.
Extrapolation richardson(const std::vector<double>& coarse_to_fine);

/// Solves on three meshes from `make_mesh(level)` (level 0, 1, 2 = h0,
/// h0/2, h0/4) and extrapolates lambda_1.
Extrapolation refine_extrapolate(const std::function<TriMesh(int)>& make_mesh, const ClosedPotential& A,
                                 const SolverOptions& opts = {}, Discretization scheme = Discretization::peierls);

struct AnnulusMode {
  int k = 0;
  double lambda = 0.0;
};

/// Lowest radial eigenvalue of angular mode k on the annulus r1 < r < r2
/// with flux phi (Neumann at both radii), by shooting and bisection.
double annulus_mode(double r1, double r2, double phi, int k, double tol = 1e-12);
/// min over |k| <= k_max of annulus_mode; `modes` receives the table.
double annulus_oracle(double r1, double r2, double phi, int k_max = 8, double tol = 1e-12,
                      std::vector<AnnulusMode>* modes = nullptr);

/// Coordinate-format text dump: header lines "# fluxgap hermitian n nnz",
/// then "row col re im" (0-based) for every stored entry.
void dump_matrix(const SpMatC& A, const std::string& path);

}  // namespace fluxgap
