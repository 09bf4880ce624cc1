#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fluxgap/errors.hpp"
#include "fluxgap/mesh.hpp"
#include "fluxgap/partition.hpp"

#include <cmath>
#include <numbers>

using namespace fluxgap;
using doctest::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

ConvexShape square(double x0, double y0, double x1, double y1) {
  return ConvexShape::polygon({{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}});
}

PlanarDomain one_hole(ConvexShape outer, ConvexShape hole) {
  PlanarDomain d;
  d.outer = std::move(outer);
  d.holes = {std::move(hole)};
  return d;
}

PlanarDomain square_in_square() { return one_hole(square(-2, -2, 2, 2), square(-1, -1, 1, 1)); }
PlanarDomain offset_square() { return one_hole(square(-2, -2, 2, 2), square(-1, -1, 0.5, 0.5)); }
PlanarDomain triangle_disk() {
  return one_hole(ConvexShape::polygon({{0, 0}, {10, 0}, {5, 8}}), ConvexShape::disk({5, 2}, 1.2));
}

PlanarDomain two_disks() {
  PlanarDomain d;
  d.outer = ConvexShape::disk({0, 0}, 2);
  d.holes = {ConvexShape::disk({-0.8, 0}, 0.3), ConvexShape::disk({0.8, 0}, 0.3)};
  return d;
}

// Checks every invariant the construction promises for one hole.
void check_partition(const PlanarDomain& d, int expected_n) {
  const AnnuliPartition p = annuli_partition(d);
  CHECK(p.n == expected_n);
  CHECK(p.n == static_cast<int>(std::ceil(p.B / p.beta)));
  CHECK(p.n <= 2 * p.B / p.beta);
  CHECK_FALSE(p.count_exceeds_bound);
  REQUIRE(static_cast<int>(p.pieces.size()) == p.n);
  const double total = perimeter(d.outer);
  const double F = area(d.outer), D = diameter(d.outer);
  for (const auto& piece : p.pieces) {
    CAPTURE(piece.k);
    CHECK(std::abs(piece.width_min - p.beta) <= 1e-3);
    CHECK(piece.outer_perimeter <= total + 1e-9);
    for (const auto& w : wedge_report(piece, d.outer)) {
      if (w.type == VertexType::parallel_mixed) CHECK(w.ratio >= 1 / std::sqrt(2.0) - 1e-6);
      if (w.type == VertexType::cut_locus) CHECK(w.ratio >= F / (4 * D * D) - 1e-9);
    }
  }
}

}  // namespace

TEST_CASE("annuli partition of the square in a square") {
  check_partition(square_in_square(), 2);
  const auto p = annuli_partition(square_in_square());
  CHECK(p.beta == Approx(1));
  CHECK(p.B == Approx(std::sqrt(2.0)).epsilon(1e-4));
  CHECK(p.pieces[0].inner == InnerBoundary::hole);
  // The last piece's inner boundary has the four diagonal cut-locus corners.
  int cut = 0;
  for (const auto& w : wedge_report(p.pieces[1], square_in_square().outer))
    if (w.type == VertexType::cut_locus) {
      ++cut;
      CHECK(w.ratio == Approx(1 / std::sqrt(2.0)).epsilon(1e-4));
    }
  CHECK(cut == 4);
}

TEST_CASE("annuli partition of an offset square") { check_partition(offset_square(), 3); }

TEST_CASE("annuli partition of a triangle minus a disk") {
  check_partition(triangle_disk(), 6);
  const auto p = annuli_partition(triangle_disk());
  CHECK(p.beta == Approx(0.8));
  CHECK(p.pieces.back().inner == InnerBoundary::parallel);
  // Pieces overlap but cover the domain: sample points.
  int uncovered = 0;
  for (int i = 1; i < 100; ++i)
    for (int j = 1; j < 80; ++j) {
      const Vec2 x(0.1 * i, 0.1 * j);
      if (!p.domain.contains(x)) continue;
      bool in = false;
      for (const auto& piece : p.pieces) in = in || piece.contains_closed(x, 1e-9);
      uncovered += !in;
    }
  CHECK(uncovered == 0);
}

TEST_CASE("thin concentric annulus is a single piece") {
  const auto p = annuli_partition(one_hole(ConvexShape::disk({0, 0}, 1.1), ConvexShape::disk({0, 0}, 1)));
  CHECK(p.n == 1);
  CHECK(p.beta == Approx(0.1));
}

TEST_CASE("annuli partition needs exactly one region hole") {
  CHECK_THROWS_AS(annuli_partition(two_disks()), ValidationError);
}

TEST_CASE("equidistant curves") {
  const Rect box{-2, -2, 2, 2};
  const auto eq = equidistant_curve(ConvexShape::disk({-0.8, 0}, 0.3), ConvexShape::disk({0.8, 0.4}, 0.3), box, 80);
  CHECK(eq.straight);
  CHECK(eq.max_residual < 1e-8);
  // The bisector of the centres.
  for (const auto& line : eq.polylines)
    for (const auto& x : line) CHECK((x - Vec2(-0.8, 0)).norm() == Approx((x - Vec2(0.8, 0.4)).norm()));

  const auto pts = equidistant_curve(ConvexShape::point({0, -1}), ConvexShape::point({0, 1}), box, 40);
  CHECK(pts.straight);

  const auto bent = equidistant_curve(ConvexShape::disk({-0.8, 0}, 0.2), ConvexShape::disk({0.8, 0}, 0.5), box, 80);
  CHECK_FALSE(bent.straight);
  CHECK(bent.max_residual < 1e-8);

  CHECK_THROWS_AS(equidistant_curve(ConvexShape::disk({0, 0}, 1), ConvexShape::disk({1, 0}, 1), box, 40),
                  ValidationError);
}

TEST_CASE("cells of two disks") {
  const PlanarDomain d = two_disks();
  const auto cs = cells(d);
  REQUIRE(cs.size() == 2);
  const WidthReport w = widths(d);
  for (const auto& c : cs) {
    CHECK(c.exact);
    CHECK(c.audit_mismatches == 0);
    CHECK(c.audit_samples > 0);
    // Half the disk each.
    CHECK(c.area == Approx(2 * kPi).epsilon(0.01));
    CHECK(c.width_min == Approx(0.5).epsilon(1e-3));
    CHECK(c.perimeter <= 2 * w.B_hi / w.beta_lo * (c.inner_perimeter + 2 * kPi * w.B_hi));
    CHECK(c.perimeter <=
          2 * c.width_max / c.width_min * (c.inner_perimeter + 2 * kPi * c.width_max));
    const double m = star_cosine(d, c);
    CHECK(m >= w.beta_lo / (2 * w.B_hi));
    CHECK(m >= c.width_min / (2 * c.width_max));
    CHECK(m <= 1 + 1e-12);
  }
  CHECK(nearest_hole(d, {-0.1, 1}) == 0);
  CHECK(in_cell(d, 1, {0.1, 1}));
  CHECK_FALSE(in_cell(d, 0, {0.1, 1}));
}

TEST_CASE("cells of mixed holes") {
  PlanarDomain d;
  d.outer = square(-3, -2, 3, 2);
  d.holes = {square(-2, -1, -1, 1), ConvexShape::disk({1.5, 0}, 0.6)};
  const auto cs = cells(d);
  REQUIRE(cs.size() == 2);
  CHECK_FALSE(cs[0].exact);
  double sum = 0;
  for (const auto& c : cs) {
    CHECK(c.audit_mismatches <= c.audit_samples / 100);
    sum += c.area;
  }
  CHECK(sum == Approx(24).epsilon(0.01));
  CHECK_THROWS_AS(cells(triangle_disk()), ValidationError);
}

TEST_CASE("assignment of triangles to pieces") {
  const PlanarDomain d = offset_square();
  const auto part = annuli_partition(d);
  const TriMesh m = mesh_rect_diff({-2, -2, 2, 2}, {-1, -1, 0.5, 0.5}, 0.2);
  const auto groups = assign_annuli(m, part);
  REQUIRE(groups.size() == 3);
  std::vector<int> hits(static_cast<std::size_t>(m.n_triangles()), 0);
  for (const auto& g : groups) {
    CHECK_FALSE(g.empty());
    for (int t : g) ++hits[t];
  }
  for (int h : hits) CHECK(h >= 1);

  const TriMesh b = mesh_block(two_disks(), 0.1);
  const auto cells_tris = assign_cells(b, two_disks());
  REQUIRE(cells_tris.size() == 2);
  CHECK(cells_tris[0].size() + cells_tris[1].size() == static_cast<std::size_t>(b.n_triangles()));
}

TEST_CASE("disjoint partition eigenvalue inequality") {
  const PlanarDomain d = two_disks();
  const TriMesh m = mesh_block(d, 0.05);
  ClosedPotential A;
  A.poles = {{{-0.8, 0}, 0.5}, {{0.8, 0}, 0.5}};
  const auto chk = partition_eigen_check(m, A, assign_cells(m, d), true);
  CHECK(chk.n == 2);
  CHECK(chk.holds);
  CHECK(chk.lambda >= chk.rhs * 0.95);
  CHECK(chk.piece_lambda.size() == 2);
  // Mirror symmetric: both cells have the same ground energy.
  CHECK(chk.piece_lambda[0] == Approx(chk.piece_lambda[1]).epsilon(1e-3));
}

TEST_CASE("overlapping partition eigenvalue inequality") {
  const PlanarDomain d = offset_square();
  const TriMesh m = mesh_rect_diff({-2, -2, 2, 2}, {-1, -1, 0.5, 0.5}, 0.1);
  ClosedPotential A;
  A.poles = {{{-0.25, -0.25}, 0.5}};
  const auto part = annuli_partition(d);
  const auto chk = partition_eigen_check(m, A, assign_annuli(m, part), false);
  CHECK(chk.n == 3);
  CHECK(chk.holds);
  double mass = 0;
  for (double x : chk.piece_mass) mass += x;
  CHECK(mass >= 1 - 1e-9);
  CHECK(chk.rhs == Approx(chk.piece_lambda[chk.mass_k] / 3));
}
