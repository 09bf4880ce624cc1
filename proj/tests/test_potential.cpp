#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fluxgap/errors.hpp"
#include "fluxgap/mesh.hpp"
#include "fluxgap/potential.hpp"

#include <cmath>
#include <numbers>

using namespace fluxgap;
using doctest::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

ClosedPotential single(const Vec2& at, double flux) {
  ClosedPotential A;
  A.poles = {{at, flux}};
  return A;
}

// Circulation by the midpoint rule on a fine circle, independent of line_integral.
double numeric_flux(const ClosedPotential& A, const Vec2& c, double r, int n = 20000) {
  double s = 0;
  for (int i = 0; i < n; ++i) {
    const double t0 = 2 * kPi * i / n, t1 = 2 * kPi * (i + 1) / n, tm = 0.5 * (t0 + t1);
    const Vec2 x = c + r * Vec2(std::cos(tm), std::sin(tm));
    const Vec2 dx = r * Vec2(std::cos(t1) - std::cos(t0), std::sin(t1) - std::sin(t0));
    s += eval(A, x).dot(dx);
  }
  return s / (2 * kPi);
}

}  // namespace

TEST_CASE("pointwise evaluation") {
  const auto A = single({0, 0}, 1.0);
  const Vec2 a = eval(A, {1, 0});
  CHECK(a.x() == Approx(0).epsilon(1e-15));
  CHECK(a.y() == Approx(1));
  CHECK(eval(single({1, 1}, 0.5), {1, 3}).x() == Approx(-0.25));
  CHECK_THROWS_AS(eval(A, {1e-13, 0}), SingularityError);
}

TEST_CASE("flux is the normalized circulation") {
  const auto A = single({0.3, -0.2}, 0.37);
  CHECK(numeric_flux(A, {0.3, -0.2}, 0.5) == Approx(0.37).epsilon(1e-6));
  CHECK(numeric_flux(A, {3, 0}, 0.5) == Approx(0).epsilon(1e-9));
  const std::vector<Vec2> sq{{-1, -1}, {1, -1}, {1, 1}, {-1, 1}};
  CHECK(flux_around(A, sq) == Approx(0.37));
  const std::vector<Vec2> cw{{-1, -1}, {-1, 1}, {1, 1}, {1, -1}};
  CHECK(flux_around(A, cw) == Approx(-0.37));
  const std::vector<Vec2> away{{2, 2}, {3, 2}, {3, 3}, {2, 3}};
  CHECK(flux_around(A, away) == Approx(0).epsilon(1e-14));
}

TEST_CASE("line integral is the subtended angle") {
  const auto A = single({0, 0}, 1.0);
  CHECK(line_integral(A, {1, 0}, {0, 1}) == Approx(kPi / 2));
  CHECK(line_integral(A, {0, 1}, {1, 0}) == Approx(-kPi / 2));
  CHECK(line_integral(single({0, 0}, 0.5), {1, -1}, {1, 1}) == Approx(0.5 * kPi / 2));
  CHECK_THROWS_AS(line_integral(A, {-1, 0}, {1, 0}), SingularityError);
}

TEST_CASE("hole fluxes are matched by containment") {
  PlanarDomain d;
  d.outer = ConvexShape::disk({0, 0}, 3);
  d.holes = {ConvexShape::disk({-1, 0}, 0.5), ConvexShape::disk({1, 0}, 0.5)};
  ClosedPotential A;
  A.poles = {{{-1, 0}, 0.25}, {{-1.1, 0.1}, 0.5}};
  const auto f = hole_fluxes(A, d);
  REQUIRE(f.size() == 2);
  CHECK(f[0] == Approx(0.75));
  CHECK(f[1] == 0.0);
  A.poles.push_back({{0, 2}, 0.5});
  CHECK_THROWS_AS(hole_fluxes(A, d), ValidationError);
  CHECK_THROWS_AS(A.validate_against(d), ValidationError);
}

TEST_CASE("poles must be finite") {
  ClosedPotential A = single({0, 0}, std::nan(""));
  CHECK_THROWS_AS(A.validate(), ValidationError);
}

TEST_CASE("gauge scalar integrates the potential on simply connected regions") {
  // Half of the annulus around the pole: simply connected.
  const TriMesh m = mesh_polar_annulus(1, 2, 4, 32);
  const auto A = single({0, 0}, 0.3);
  std::vector<int> upper;
  for (int t = 0; t < m.n_triangles(); ++t) {
    const auto& tri = m.triangles[static_cast<std::size_t>(t)];
    const double cy = (m.vertices[tri[0]].y() + m.vertices[tri[1]].y() + m.vertices[tri[2]].y()) / 3;
    if (cy > 0.1) upper.push_back(t);
  }
  for (auto order : {TreeOrder::breadth_first, TreeOrder::depth_first}) {
    const auto f = gauge_scalar(A, m, upper, -1, order);
    for (int t : upper)
      for (int k = 0; k < 3; ++k) {
        const int a = m.triangles[t][k], b = m.triangles[t][(k + 1) % 3];
        CHECK(f[b] - f[a] == Approx(line_integral(A, m.vertices[a], m.vertices[b])).epsilon(1e-10));
      }
  }
  std::vector<int> all(static_cast<std::size_t>(m.n_triangles()));
  for (int t = 0; t < m.n_triangles(); ++t) all[static_cast<std::size_t>(t)] = t;
  CHECK_THROWS_AS(gauge_scalar(A, m, all), TopologyError);
}

TEST_CASE("gauge scalar refuses regions containing a pole") {
  const TriMesh m = mesh_polar_annulus(1, 2, 2, 16);
  const auto A = single({1.5, 0.05}, 0.3);
  std::vector<int> all(static_cast<std::size_t>(m.n_triangles()));
  for (int t = 0; t < m.n_triangles(); ++t) all[static_cast<std::size_t>(t)] = t;
  std::vector<int> right;
  for (int t : all)
    if (m.vertices[m.triangles[t][0]].x() > 0.5) right.push_back(t);
  CHECK_THROWS_AS(gauge_scalar(A, m, right), SingularityError);
}
