#include "fluxgap/errors.hpp"
#include "fluxgap/solver.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

namespace fluxgap {

double rayleigh(const SpMatC& K, const SpMatC& M, const VecC& u) {
  const double den = u.dot(M * u).real();
  if (!(den > 0)) throw ValidationError("Rayleigh quotient of a zero vector");
  return u.dot(K * u).real() / den;
}

double excision_upper(const SpectralProblem& p, const Pencil& pen, const std::vector<int>& region,
                      const std::vector<std::array<int, 2>>& dirichlet_edges, const std::vector<double>& phi) {
  const TriMesh& m = *p.mesh;
  if (phi.size() != m.vertices.size()) throw ValidationError("test function needs one value per mesh vertex");
  for (const auto& e : dirichlet_edges)
    for (int v : e)
      if (std::abs(phi.at(static_cast<std::size_t>(v))) > 1e-12)
        throw ValidationError("test function does not vanish on the Dirichlet edges");

  const std::vector<double> f = gauge_scalar(p.potential, m, region);
  VecC u = VecC::Zero(m.n_vertices());
  for (int v = 0; v < m.n_vertices(); ++v)
    if (!std::isnan(f[static_cast<std::size_t>(v)]))
      u(v) = phi[static_cast<std::size_t>(v)] * std::polar(1.0, f[static_cast<std::size_t>(v)]);

  // Outside the region u vanishes; a region vertex shared with an outside
  // triangle must therefore be a zero of phi, or u is not supported in D.
  std::vector<char> in_region(m.triangles.size(), 0);
  for (int t : region) in_region[static_cast<std::size_t>(t)] = 1;
  for (std::size_t t = 0; t < m.triangles.size(); ++t) {
    if (in_region[t]) continue;
    for (int v : m.triangles[t])
      if (std::abs(u(v)) > 1e-12)
        throw ValidationError("test function is nonzero on the boundary of the excision region inside the domain");
  }
  return rayleigh(pen.K, pen.M, u);
}

Extrapolation richardson(const std::vector<double>& lv) {
  if (lv.size() != 3) throw ValidationError("Richardson extrapolation needs exactly three levels");
  Extrapolation e;
  e.levels = lv;
  e.value = lv[2];
  e.order = std::numeric_limits<double>::quiet_NaN();
  const double d1 = lv[0] - lv[1], d2 = lv[1] - lv[2];
  if (d1 == 0 || d2 == 0 || (d1 > 0) != (d2 > 0) || std::abs(d2) >= std::abs(d1)) return e;
  e.order = std::log2(d1 / d2);
  e.extrapolated = true;
  e.value = (4 * lv[2] - lv[1]) / 3;
  e.low_order = e.order < 1.5;
  return e;
}

Extrapolation refine_extrapolate(const std::function<TriMesh(int)>& make_mesh, const ClosedPotential& A,
                                 const SolverOptions& opts, Discretization scheme) {
  std::vector<double> lv;
  for (int level = 0; level < 3; ++level) {
    const TriMesh mesh = make_mesh(level);
    SpectralProblem p{&mesh, A, scheme};
    lv.push_back(solve_problem(p, opts).raw_eigenvalues.at(0));
  }
  return richardson(lv);
}

void dump_matrix(const SpMatC& A, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw Error("cannot write matrix file " + path);
  os << "# fluxgap hermitian " << A.rows() << " " << A.nonZeros() << "\n";
  os << "# row col re im (0-based)\n";
  char buf[96];
  for (int k = 0; k < A.outerSize(); ++k)
    for (SpMatC::InnerIterator it(A, k); it; ++it) {
      std::snprintf(buf, sizeof buf, "%ld %ld %.17g %.17g\n", static_cast<long>(it.row()), static_cast<long>(it.col()),
                    it.value().real(), it.value().imag());
      os << buf;
    }
}

}  // namespace fluxgap
