#include "fluxgap/errors.hpp"
#include "fluxgap/partition.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <thread>

namespace fluxgap {

namespace {

Vec2 centroid(const TriMesh& m, int t) {
  const auto& tri = m.triangles[static_cast<std::size_t>(t)];
  return (m.vertices[static_cast<std::size_t>(tri[0])] + m.vertices[static_cast<std::size_t>(tri[1])] +
          m.vertices[static_cast<std::size_t>(tri[2])]) /
         3.0;
}

}  // namespace

std::vector<std::vector<int>> assign_annuli(const TriMesh& mesh, const AnnuliPartition& part) {
  std::vector<std::vector<int>> out(part.pieces.size());
  const double tol = 1e-12 * std::max(1.0, diameter(part.domain.outer));
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const Vec2 x = centroid(mesh, t);
    bool placed = false;
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_k = 0;
    for (std::size_t k = 0; k < part.pieces.size(); ++k) {
      const AnnulusPiece& p = part.pieces[k];
      if (p.contains_closed(x, tol)) {
        out[k].push_back(t);
        placed = true;
      }
      const double violation = std::max(p.F.signed_distance_bound(x), -p.G.signed_distance_bound(x));
      if (violation < best) {
        best = violation;
        best_k = k;
      }
    }
    // Centroids outside the exact domain (staircase meshes) go to the
    // nearest piece.
    if (!placed) out[best_k].push_back(t);
  }
  return out;
}

std::vector<std::vector<int>> assign_cells(const TriMesh& mesh, const PlanarDomain& domain) {
  std::vector<std::vector<int>> out(static_cast<std::size_t>(domain.n_holes()));
  for (int t = 0; t < mesh.n_triangles(); ++t)
    out[static_cast<std::size_t>(nearest_hole(domain, centroid(mesh, t)))].push_back(t);
  return out;
}

PartitionCheck partition_eigen_check(const TriMesh& mesh, const ClosedPotential& A,
                                     const std::vector<std::vector<int>>& pieces, bool disjoint,
                                     const SolverOptions& opts, double tol, int jobs, Discretization scheme) {
  if (pieces.empty()) throw ValidationError("partition has no pieces");
  std::vector<int> cover(static_cast<std::size_t>(mesh.n_triangles()), 0);
  for (const auto& p : pieces) {
    if (p.empty()) throw ValidationError("partition has an empty piece");
    for (int t : p) ++cover.at(static_cast<std::size_t>(t));
  }
  for (int c : cover) {
    if (c == 0) throw ValidationError("pieces do not cover the mesh");
    if (disjoint && c > 1) throw ValidationError("pieces of a disjoint partition overlap");
  }

  PartitionCheck r;
  r.disjoint = disjoint;
  r.n = static_cast<int>(pieces.size());
  r.tol = tol;

  SolverOptions o = opts;
  o.keep_vectors = true;
  const SpectralProblem whole{&mesh, A, scheme};
  const EigenResult full = solve_problem(whole, o);
  r.lambda = full.lambda1();
  const VecC u = full.vectors.col(0);
  const Pencil pen = assemble(whole);
  const double total = u.dot(pen.M * u).real();

  r.piece_lambda.assign(pieces.size(), 0.0);
  r.piece_mass.assign(pieces.size(), 0.0);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t k = next++; k < pieces.size(); k = next++) {
      try {
        std::vector<int> vmap;
        const TriMesh sub = submesh(mesh, pieces[k], &vmap);
        const SpectralProblem sp{&sub, A, scheme};
        SolverOptions po = opts;
        po.keep_vectors = false;
        r.piece_lambda[k] = solve_problem(sp, po).lambda1();
        const Pencil pp = assemble(sp);
        VecC us(sub.n_vertices());
        for (int v = 0; v < sub.n_vertices(); ++v) us(v) = u(vmap[static_cast<std::size_t>(v)]);
        r.piece_mass[k] = us.dot(pp.M * us).real() / total;
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const int nthreads = std::clamp(jobs, 1, static_cast<int>(pieces.size()));
  std::vector<std::thread> pool;
  for (int i = 1; i < nthreads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);

  r.mass_k = static_cast<int>(std::max_element(r.piece_mass.begin(), r.piece_mass.end()) - r.piece_mass.begin());
  r.best_k = static_cast<int>(std::min_element(r.piece_lambda.begin(), r.piece_lambda.end()) - r.piece_lambda.begin());
  if (disjoint) r.rhs = r.piece_lambda[static_cast<std::size_t>(r.best_k)];
  else r.rhs = r.piece_lambda[static_cast<std::size_t>(r.mass_k)] / r.n;
  r.margin = r.rhs > 0 ? r.lambda / r.rhs : std::numeric_limits<double>::infinity();
  r.holds = r.lambda >= r.rhs * (1 - tol);
  spdlog::debug("partition check: lambda={:.6g} rhs={:.6g} margin={:.4g}", r.lambda, r.rhs, r.margin);
  return r;
}

}  // namespace fluxgap
