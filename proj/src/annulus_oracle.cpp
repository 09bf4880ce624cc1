#include "fluxgap/errors.hpp"
#include "fluxgap/solver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace fluxgap {

namespace {

using State = std::array<double, 2>;  // (R, R')

State rhs(double r, const State& y, double q2, double lambda) {
  return {y[1], -y[1] / r + (q2 / (r * r) - lambda) * y[0]};
}

State rk4_step(double r, const State& y, double dr, double q2, double lambda) {
  auto add = [](const State& a, const State& b, double s) { return State{a[0] + s * b[0], a[1] + s * b[1]}; };
  const State k1 = rhs(r, y, q2, lambda);
  const State k2 = rhs(r + dr / 2, add(y, k1, dr / 2), q2, lambda);
  const State k3 = rhs(r + dr / 2, add(y, k2, dr / 2), q2, lambda);
  const State k4 = rhs(r + dr, add(y, k3, dr), q2, lambda);
  return {y[0] + dr / 6 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]),
          y[1] + dr / 6 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])};
}

// R'(r2) for the solution with R(r1) = 1, R'(r1) = 0; adaptive RK4 with
// step doubling.
double shoot(double r1, double r2, double q2, double lambda, double tol) {
  State y{1.0, 0.0};
  double r = r1;
  double dr = (r2 - r1) / 64;
  const double eps = std::max(tol, 1e-14);
  while (r < r2) {
    if (r + dr > r2) dr = r2 - r;
    const State full = rk4_step(r, y, dr, q2, lambda);
    const State half = rk4_step(r + dr / 2, rk4_step(r, y, dr / 2, q2, lambda), dr / 2, q2, lambda);
    const double scale = std::max({1.0, std::abs(half[0]), std::abs(half[1])});
    const double err = std::max(std::abs(full[0] - half[0]), std::abs(full[1] - half[1])) / (15 * scale);
    if (err <= eps || dr < 1e-9 * (r2 - r1)) {
      r += dr;
      // Local extrapolation of the step-doubling pair.
      y = {half[0] + (half[0] - full[0]) / 15, half[1] + (half[1] - full[1]) / 15};
      const double grow = err > 0 ? 0.9 * std::pow(eps / err, 0.2) : 4.0;
      dr *= std::clamp(grow, 0.2, 4.0);
    } else {
      dr *= std::clamp(0.9 * std::pow(eps / err, 0.2), 0.1, 0.5);
    }
  }
  return y[1];
}

}  // namespace

double annulus_mode(double r1, double r2, double phi, int k, double tol) {
  if (!(r1 > 0) || !(r2 > r1)) throw ValidationError("annulus oracle needs 0 < r1 < r2");
  if (!std::isfinite(phi)) throw ValidationError("flux must be finite");
  const double q = k - phi;
  const double q2 = q * q;
  if (q2 == 0) return 0.0;

  // The lowest eigenvalue lies in (q^2/r2^2, q^2/r1^2]; widen if needed.
  const double lo0 = q2 / (r2 * r2);
  double hi = q2 / (r1 * r1);
  auto g = [&](double lam) { return shoot(r1, r2, q2, lam, tol); };
  for (int attempt = 0; attempt < 8; ++attempt, hi *= 2) {
    constexpr int kScan = 64;
    double a = lo0 * (1 + 1e-12), ga = g(a);
    for (int i = 1; i <= kScan; ++i) {
      double b = lo0 + (hi - lo0) * i / kScan;
      const double gb = g(b);
      if ((ga > 0) != (gb > 0) || gb == 0) {
        for (int it = 0; it < 200 && b - a > tol * std::max(1.0, b); ++it) {
          const double mid = 0.5 * (a + b);
          const double gm = g(mid);
          if ((gm > 0) == (ga > 0)) {
            a = mid;
            ga = gm;
          } else {
            b = mid;
          }
        }
        return 0.5 * (a + b);
      }
      a = b;
      ga = gb;
    }
  }
  throw ConvergenceError("annulus oracle failed to bracket the lowest eigenvalue", {});
}

double annulus_oracle(double r1, double r2, double phi, int k_max, double tol, std::vector<AnnulusMode>* modes) {
  if (k_max < 0) throw ValidationError("k_max must be non-negative");
  double best = std::numeric_limits<double>::infinity();
  if (modes) modes->clear();
  for (int k = -k_max; k <= k_max; ++k) {
    const double lam = annulus_mode(r1, r2, phi, k, tol);
    if (modes) modes->push_back({k, lam});
    best = std::min(best, lam);
  }
  return best;
}

}  // namespace fluxgap
