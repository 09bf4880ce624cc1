#include "fluxgap/errors.hpp"
#include "fluxgap/solver.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>

namespace fluxgap {

namespace {

// M-orthonormal basis of the columns of S (classical Gram-Schmidt, applied
// twice). Columns that become negligible are dropped.
MatC m_orthonormalize(const MatC& S, const SpMatC& M) {
  MatC Q(S.rows(), S.cols());
  MatC MQ(S.rows(), S.cols());
  int q = 0;
  for (int j = 0; j < S.cols(); ++j) {
    VecC v = S.col(j);
    VecC Mv = M * v;
    const double n0 = std::sqrt(std::max(0.0, v.dot(Mv).real()));
    if (!(n0 > 0) || !std::isfinite(n0)) continue;
    for (int pass = 0; pass < 2 && q > 0; ++pass) {
      const VecC c = MQ.leftCols(q).adjoint() * v;
      v -= Q.leftCols(q) * c;
    }
    Mv = M * v;
    const double n1 = std::sqrt(std::max(0.0, v.dot(Mv).real()));
    if (!(n1 > 1e-10 * n0)) continue;
    Q.col(q) = v / n1;
    MQ.col(q) = Mv / n1;
    ++q;
  }
  return Q.leftCols(q);
}

class Precond {
 public:
  virtual ~Precond() = default;
  virtual MatC apply(const MatC& R) const = 0;
};

class JacobiPrecond : public Precond {
 public:
  JacobiPrecond(const SpMatC& K, const SpMatC& M, double sigma) : d_(K.rows()) {
    for (int i = 0; i < K.rows(); ++i) d_(i) = 1.0 / (K.coeff(i, i).real() + sigma * M.coeff(i, i).real());
  }
  MatC apply(const MatC& R) const override { return d_.asDiagonal() * R; }

 private:
  Eigen::VectorXd d_;
};

class FactorPrecond : public Precond {
 public:
  FactorPrecond(const SpMatC& K, const SpMatC& M, double sigma) {
    SpMatC S = K + sigma * M;
    ldlt_.compute(S);
    ok_ = ldlt_.info() == Eigen::Success;
  }
  bool ok() const { return ok_; }
  MatC apply(const MatC& R) const override { return ldlt_.solve(R); }

 private:
  Eigen::SimplicialLDLT<SpMatC, Eigen::Lower> ldlt_;
  bool ok_ = false;
};

double mean_diag_ratio(const SpMatC& K, const SpMatC& M) {
  double s = 0;
  for (int i = 0; i < K.rows(); ++i) s += K.coeff(i, i).real() / M.coeff(i, i).real();
  return s / static_cast<double>(K.rows());
}

double max_diag_ratio(const SpMatC& K, const SpMatC& M) {
  double s = 0;
  for (int i = 0; i < K.rows(); ++i) s = std::max(s, K.coeff(i, i).real() / M.coeff(i, i).real());
  return s;
}

EigenResult dense_solve(const SpMatC& K, const SpMatC& M, const SolverOptions& o) {
  const MatC Kd = MatC(K);
  const MatC Md = MatC(M);
  Eigen::GeneralizedSelfAdjointEigenSolver<MatC> ges(0.5 * (Kd + Kd.adjoint()), 0.5 * (Md + Md.adjoint()));
  if (ges.info() != Eigen::Success) throw ConvergenceError("dense generalized eigensolver failed", {});
  EigenResult r;
  r.dof = static_cast<int>(K.rows());
  const double floor = 1e-6 * max_diag_ratio(K, M);
  Eigen::VectorXd ml(K.rows());
  for (int i = 0; i < M.rows(); ++i) ml(i) = M.row(i).cwiseAbs().sum();
  for (int j = 0; j < o.k; ++j) {
    const double lam = ges.eigenvalues()(j);
    const VecC x = ges.eigenvectors().col(j);
    const VecC res = K * x - lam * (M * x);
    double rn = 0;
    for (int i = 0; i < res.size(); ++i) rn += std::norm(res(i)) / ml(i);
    const double xn = std::sqrt(std::max(0.0, x.dot(M * x).real()));
    r.eigenvalues.push_back(lam);
    r.residuals.push_back(std::sqrt(rn) / xn / std::max(std::abs(lam), floor));
  }
  if (o.keep_vectors) r.vectors = ges.eigenvectors().leftCols(o.k);
  return r;
}

}  // namespace

EigenResult solve_lowest(const SpMatC& K, const SpMatC& M, const SolverOptions& o) {
  const int n = static_cast<int>(K.rows());
  if (o.k < 1) throw ValidationError("k must be at least 1");
  if (!(o.tol > 0)) throw ValidationError("tol must be positive");
  if (K.cols() != n || M.rows() != n || M.cols() != n) throw ValidationError("K and M must be square and equal size");
  if (o.k > n) throw ValidationError("k exceeds the problem size");

  const int m = std::min(n, std::max(4, o.k + 2));
  if (n <= o.dense_threshold || 3 * m >= n) return dense_solve(K, M, o);

  Eigen::VectorXd ml(n);
  for (int i = 0; i < n; ++i) {
    double s = 0;
    for (SpMatC::InnerIterator it(M, i); it; ++it) s += std::abs(it.value());
    ml(i) = s;  // M is Hermitian: column sums equal row sums in modulus
  }
  const double floor = 1e-6 * max_diag_ratio(K, M);

  std::unique_ptr<Precond> T;
  if (o.preconditioner == Preconditioner::factorized) {
    auto f = std::make_unique<FactorPrecond>(K, M, 1e-6 * mean_diag_ratio(K, M));
    if (f->ok()) T = std::move(f);
    else spdlog::warn("factorized preconditioner failed; falling back to Jacobi");
  }
  if (!T) T = std::make_unique<JacobiPrecond>(K, M, 1e-3 * mean_diag_ratio(K, M));

  std::mt19937_64 rng(o.seed);
  std::normal_distribution<double> nd;
  auto random_block = [&](int cols) {
    MatC X(n, cols);
    for (int j = 0; j < cols; ++j)
      for (int i = 0; i < n; ++i) X(i, j) = cplx(nd(rng), nd(rng));
    return X;
  };

  MatC X = m_orthonormalize(random_block(m), M);
  while (X.cols() < m) {
    MatC S(n, m);
    S << X, random_block(m - static_cast<int>(X.cols()));
    X = m_orthonormalize(S, M);
  }

  auto rayleigh_ritz = [&](const MatC& Q, const MatC& KQ, Eigen::VectorXd& theta, MatC& C) {
    MatC G = Q.adjoint() * KQ;
    G = 0.5 * (G + G.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<MatC> es(G);
    theta = es.eigenvalues().head(m);
    C = es.eigenvectors().leftCols(m);
  };

  Eigen::VectorXd theta;
  MatC C;
  MatC KX = K * X;
  rayleigh_ritz(X, KX, theta, C);
  X = X * C;
  KX = KX * C;
  MatC P(n, 0);
  std::vector<double> history;
  std::vector<double> res(static_cast<std::size_t>(m), 0.0);

  EigenResult r;
  r.dof = n;
  for (int it = 1; it <= o.max_iter; ++it) {
    const MatC R = KX - (M * X) * theta.asDiagonal();
    std::vector<int> active;
    double worst = 0;
    for (int j = 0; j < m; ++j) {
      double rn = 0;
      for (int i = 0; i < n; ++i) rn += std::norm(R(i, j)) / ml(i);
      res[static_cast<std::size_t>(j)] = std::sqrt(rn) / std::max(std::abs(theta(j)), floor);
      if (j < o.k) worst = std::max(worst, res[static_cast<std::size_t>(j)]);
      if (res[static_cast<std::size_t>(j)] > o.tol) active.push_back(j);
    }
    history.push_back(worst);
    r.iterations = it;
    if (worst <= o.tol) break;
    if (it == o.max_iter)
      throw ConvergenceError("eigensolver did not converge in " + std::to_string(o.max_iter) +
                                 " iterations (residual " + std::to_string(worst) + ")",
                             history);

    MatC Ra(n, static_cast<int>(active.size()));
    for (std::size_t a = 0; a < active.size(); ++a) Ra.col(static_cast<int>(a)) = R.col(active[a]);
    const MatC W = T->apply(Ra);

    MatC S(n, X.cols() + W.cols() + P.cols());
    S << X, W, P;
    const MatC Q = m_orthonormalize(S, M);
    if (Q.cols() < m) throw ConvergenceError("eigensolver basis collapsed", history);
    const MatC KQ = K * Q;
    rayleigh_ritz(Q, KQ, theta, C);
    X = Q * C;
    KX = KQ * C;
    const int rest = static_cast<int>(Q.cols()) - m;
    if (rest > 0) P = Q.rightCols(rest) * C.bottomRows(rest);
    else P.resize(n, 0);
  }

  for (int j = 0; j < o.k; ++j) {
    r.eigenvalues.push_back(theta(j));
    r.residuals.push_back(res[static_cast<std::size_t>(j)]);
  }
  if (o.keep_vectors) r.vectors = X.leftCols(o.k);
  spdlog::debug("lobpcg: n={} k={} iterations={} residual={:.3g}", n, o.k, r.iterations, history.back());
  return r;
}

EigenResult solve_problem(const SpectralProblem& p, const SolverOptions& o, const PlanarDomain* domain) {
  const Pencil pen = assemble(p);
  EigenResult r = solve_lowest(pen.K, pen.M, o);
  r.h = p.mesh->h();
  r.mesher = p.mesh->mesher;
  r.raw_eigenvalues = r.eigenvalues;

  std::vector<double> fluxes;
  if (domain) fluxes = hole_fluxes(p.potential, *domain);
  else
    for (const auto& pole : p.potential.poles) fluxes.push_back(pole.flux);
  const bool integral = std::all_of(fluxes.begin(), fluxes.end(), [](double f) { return std::abs(f - std::round(f)) <= 1e-12; });
  if (integral) {
    r.exact_zero = true;
    for (auto& lam : r.eigenvalues)
      if (std::abs(lam) <= o.tol) lam = 0.0;
  }
  return r;
}

}  // namespace fluxgap
