#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fluxgap/bounds.hpp"
#include "fluxgap/errors.hpp"

#include <cmath>
#include <functional>
#include <numbers>

using namespace fluxgap;
using doctest::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

ConvexShape rect(double x0, double y0, double x1, double y1) {
  return ConvexShape::polygon({{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}});
}

PlanarDomain sharpness(double eps) {
  PlanarDomain d;
  d.outer = rect(-4, 0, 4, 4);
  d.holes = {rect(-3, eps, 3, 2)};
  return d;
}

ClosedPotential pole(const Vec2& at, double flux) {
  ClosedPotential A;
  A.poles = {{at, flux}};
  return A;
}

LambdaInfo lam(double value) {
  LambdaInfo l;
  l.computed = true;
  l.value = l.finest = value;
  l.mesher = "test";
  return l;
}

const BoundEntry* find(const BoundReport& r, const std::string& name) {
  for (const auto& e : r.bounds)
    if (e.name == name) return &e;
  return nullptr;
}

// f(x + dx) - f(x) has the given sign for a few sample points.
void monotone(const std::function<double(double)>& f, double lo, double hi, int sign) {
  for (int i = 0; i < 10; ++i) {
    const double x = lo + (hi - lo) * i / 10, dx = (hi - lo) / 100;
    CHECK(sign * (f(x + dx) - f(x)) >= -1e-15);
  }
}

}  // namespace

TEST_CASE("sharpness example values") {
  const double B = std::sqrt(5.0), D = 4 * std::sqrt(5.0);
  CHECK(bound_jfa(24, 0.1, B, 0.5) == Approx(3.427e-5).epsilon(1e-3));
  CHECK(bound_jfa(24, 0.1, B, 0.5) == Approx(4 * kPi * kPi / 576 * (0.01 / 5) * 0.25));
  CHECK(sharpness_formula_coefficient() == Approx(kPi * kPi / (28800 * std::sqrt(5.0))));
  CHECK(sharpness_paper_coefficient() == Approx(kPi * kPi / (360 * std::sqrt(5.0))));
  CHECK(sharpness_paper_coefficient() / sharpness_formula_coefficient() == Approx(D * D));
  for (double eps : {0.4, 0.1, 0.05})
    CHECK(bound_thm1a(32, 24, D, eps, B, 0.5) == Approx(sharpness_formula_coefficient() * eps * 0.25));
}

TEST_CASE("limits and reductions") {
  // Concentric disks 1 and 1 + beta: jfa reduces to d^2 / (1 + beta)^2.
  for (double b : {0.5, 0.1, 0.01})
    CHECK(bound_jfa(2 * kPi * (1 + b), b, b, 0.3) == Approx(0.09 / ((1 + b) * (1 + b))));
  // Thin smooth annulus: thm1b is pi^2 d^2 / |dF|^2.
  CHECK(bound_thm1b(2 * kPi * 1.01, 0.01, 0.01, 0.5) == Approx(0.25 / (4 * 1.01 * 1.01)));
  // Single pole at the centre of the unit disk.
  const PoleWidths w = pole_widths({Vec2(0, 0)}, ConvexShape::disk({0, 0}, 1));
  CHECK(w.beta == Approx(1));
  CHECK(w.B == Approx(1));
  CHECK(bound_punctured(2 * kPi, w.beta, w.B, 0.5) == Approx(0.25));
  // Starlike with m = 1 and with m = beta / (2B).
  const double P = 10, b = 0.4, Bw = 1.3, d = 0.35;
  CHECK(bound_starlike(P, b, Bw, 1, d) == Approx(4 * kPi * kPi / (P * P) * (b / Bw) * d * d));
  CHECK(bound_starlike(P, b, Bw, b / (2 * Bw), d) ==
        Approx(4 * kPi * kPi / (P * P) * b * b / (2 * Bw * Bw) * d * d));
  // The several-hole constant is weaker than the one-hole constant.
  for (double x : {0.1, 1.0, 3.0}) CHECK(bound_multi(P, x, x, d) <= bound_jfa(P, x, x, d));
}

TEST_CASE("integer fluxes give zero") {
  CHECK(bound_jfa(10, 1, 2, 0) == 0);
  CHECK(bound_thm1a(5, 10, 3, 1, 2, 0) == 0);
  CHECK(bound_thm1b(10, 1, 2, 0) == 0);
  CHECK(bound_multi(10, 1, 2, 0) == 0);
  CHECK(bound_punctured(10, 1, 2, 0) == 0);
  CHECK(bound_equal_disks(10, 1, 2, 0) == 0);
  CHECK(bound_starlike(10, 1, 2, 0.5, 0) == 0);

  const BoundReport r = compose_report(sharpness(0.1), pole({0, 1}, 2.0), lam(0));
  for (const auto& e : r.bounds)
    if (e.applicable) {
      CHECK(e.rhs == 0);
      CHECK(e.pass);
    }
  CHECK(r.all_pass());
}

TEST_CASE("monotonicity in beta, B and d") {
  using F = std::function<double(double, double, double)>;
  const std::vector<F> all = {
      [](double b, double B, double d) { return bound_jfa(12, b, B, d); },
      [](double b, double B, double d) { return bound_thm1a(9, 12, 4, b, B, d); },
      [](double b, double B, double d) { return bound_thm1b(12, b, B, d); },
      [](double b, double B, double d) { return bound_multi(12, b, B, d); },
      [](double b, double B, double d) { return bound_punctured(12, b, B, d); },
      [](double b, double B, double d) { return bound_equal_disks(12, b, B, d); },
      [](double b, double B, double d) { return bound_starlike(12, b, B, 0.7, d); },
  };
  for (const auto& f : all) {
    monotone([&](double b) { return f(b, 2, 0.3); }, 0.1, 2, +1);
    monotone([&](double B) { return f(0.5, B, 0.3); }, 0.5, 4, -1);
    monotone([&](double d) { return f(0.5, 2, d); }, 0, 0.5, +1);
  }
}

TEST_CASE("thm1b dominates thm1a when |F|^2 <= 8 D^4") {
  struct Sample {
    double area, perimeter, diameter;
  };
  for (const Sample& s : {Sample{kPi, 2 * kPi, 2}, Sample{32, 24, 4 * std::sqrt(5.0)}, Sample{1, 4, std::sqrt(2.0)}}) {
    REQUIRE(s.area * s.area <= 8 * std::pow(s.diameter, 4));
    CHECK(bound_thm1b(s.perimeter, 0.2, 0.9, 0.4) >= bound_thm1a(s.area, s.perimeter, s.diameter, 0.2, 0.9, 0.4));
  }
}

TEST_CASE("pole widths") {
  const auto w = pole_widths({Vec2(-0.5, 0), Vec2(0.5, 0)}, ConvexShape::disk({0, 0}, 2));
  CHECK(w.beta == Approx(1));
  CHECK(w.B == Approx(1.5));
  double last = 1e9;
  for (double a : {0.8, 0.4, 0.2, 0.1}) {
    const auto p = pole_widths({Vec2(-a, 0), Vec2(a, 0)}, ConvexShape::disk({0, 0}, 2));
    const double r = bound_punctured(4 * kPi, p.beta, p.B, 0.5);
    CHECK(r < last);
    last = r;
  }
  CHECK_THROWS_AS(pole_widths({Vec2(0, 0), Vec2(0, 0)}, ConvexShape::disk({0, 0}, 1)), ValidationError);
}

TEST_CASE("sharpness report") {
  const BoundReport r = compose_report(sharpness(0.1), pole({0, 1}, 0.5), lam(0.003));
  CHECK(r.inv.area_F == Approx(32));
  CHECK(r.inv.perimeter_F == Approx(24));
  CHECK(r.inv.diameter_F == Approx(4 * std::sqrt(5.0)));
  CHECK(r.inv.beta == Approx(0.1));
  CHECK(r.inv.B == Approx(std::sqrt(5.0)).epsilon(1e-4));
  CHECK(r.inv.beta_lo <= r.inv.beta);
  CHECK(r.inv.B_hi >= r.inv.B);
  REQUIRE(r.inv.sharpness_eps);
  CHECK(*r.inv.sharpness_eps == Approx(0.1));

  const BoundEntry* a = find(r, "thm1a");
  REQUIRE(a);
  REQUIRE(a->paper_stated);
  CHECK(*a->paper_stated == Approx(sharpness_paper_coefficient() * 0.1 * 0.25));
  CHECK(a->rhs <= sharpness_formula_coefficient() * 0.1 * 0.25 * (1 + 1e-6));
  const BoundEntry* b = find(r, "thm1b");
  REQUIRE(b);
  CHECK_FALSE(b->applicable);
  for (const char* n : {"jfa", "thm1a", "multi"}) {
    const BoundEntry* e = find(r, n);
    REQUIRE(e);
    CHECK(e->applicable);
    CHECK(e->pass);
    CHECK(e->margin >= 1);
  }
  CHECK(r.all_pass());

  ReportOptions o;
  o.scale_rhs = 1e6;
  CHECK_FALSE(compose_report(sharpness(0.1), pole({0, 1}, 0.5), lam(0.003), o).all_pass());

  CHECK(report_json(r).find("\"paper_stated\"") != std::string::npos);
  CHECK(report_table(r).find("paper-stated") != std::string::npos);
}

TEST_CASE("punctured report carries only the pole bound") {
  PlanarDomain d;
  d.outer = ConvexShape::disk({0, 0}, 1);
  d.holes = {ConvexShape::point({0.3, 0}), ConvexShape::point({-0.15, 0.26}), ConvexShape::point({-0.15, -0.26})};
  d.pole_radius = 0.05;
  ClosedPotential A;
  for (const auto& h : d.holes) A.poles.push_back({h.interior_point(), 0.5});
  const BoundReport r = compose_report(d, A, lam(1));
  for (const auto& e : r.bounds) CHECK(e.applicable == (e.name == "punctured"));
  const BoundEntry* p = find(r, "punctured");
  REQUIRE(p);
  REQUIRE(r.inv.beta_P);
  CHECK(p->rhs == Approx(bound_punctured(2 * kPi, *r.inv.beta_P, *r.inv.B_P, 0.5)));
  CHECK(p->pass);
}

TEST_CASE("pole and hole mismatch is an error") {
  CHECK_THROWS_AS(compose_report(sharpness(0.1), pole({3.5, 3}, 0.5), lam(1)), ValidationError);
}

TEST_CASE("equal disks and starlike cells") {
  PlanarDomain d;
  d.outer = ConvexShape::disk({0, 0}, 2);
  d.holes = {ConvexShape::disk({-0.8, 0}, 0.3), ConvexShape::disk({0.8, 0}, 0.3)};
  ClosedPotential A;
  A.poles = {{{-0.8, 0}, 0.5}, {{0.8, 0}, 0.2}};
  const BoundReport r = compose_report(d, A, lam(1));
  CHECK(r.inv.equal_disks);
  CHECK(r.inv.gamma == Approx(0.2));
  const BoundEntry* e = find(r, "equal_disks");
  REQUIRE(e);
  CHECK(e->applicable);
  CHECK(e->rhs == Approx(bound_equal_disks(4 * kPi, r.inv.beta_lo, r.inv.B_hi, 0.2)));
  const BoundEntry* s = find(r, "starlike");
  REQUIRE(s);
  CHECK(s->applicable);
  CHECK(s->computed);
  REQUIRE(r.starlike_terms.size() == 2);
  double lowest = 1e300;
  for (const auto& t : r.starlike_terms) {
    CHECK(t.m >= t.beta / (2 * t.B));
    lowest = std::min(lowest, t.rhs);
  }
  CHECK(s->rhs == Approx(lowest));
}

TEST_CASE("concentric disks are starlike with m = 1") {
  PlanarDomain d;
  d.outer = ConvexShape::disk({0, 0}, 2);
  d.holes = {ConvexShape::disk({0, 0}, 1)};
  const StarlikeTerm t = starlike_single(d, 0.5);
  CHECK(t.m == Approx(1));
  CHECK(t.beta == Approx(1));
  CHECK(t.B == Approx(1));
  CHECK(t.rhs == Approx(4 * kPi * kPi / (16 * kPi * kPi) * 0.25));
}

TEST_CASE("rigid motions and homotheties") {
  PlanarDomain d;
  d.outer = ConvexShape::polygon({{0, 0}, {10, 0}, {5, 8}});
  d.holes = {ConvexShape::polygon({{4, 1.5}, {6, 1.5}, {5, 3}})};
  const auto A = pole({5, 2}, 0.3);
  const BoundReport base = compose_report(d, A, lam(1));

  Transform2 rigid;
  rigid.angle = 0.7;
  rigid.translation = Vec2(-3, 11);
  ClosedPotential Ar = pole(rigid.apply({5, 2}), 0.3);
  const BoundReport moved = compose_report(d.transformed(rigid), Ar, lam(1));
  REQUIRE(moved.bounds.size() == base.bounds.size());
  for (std::size_t i = 0; i < base.bounds.size(); ++i) {
    CAPTURE(base.bounds[i].name);
    if (!base.bounds[i].applicable) continue;
    CHECK(std::abs(moved.bounds[i].rhs - base.bounds[i].rhs) <= 1e-12 * std::max(1.0, base.bounds[i].rhs));
  }

  for (double t : {0.5, 3.0}) {
    Transform2 scale;
    scale.scale = t;
    const BoundReport s = compose_report(d.transformed(scale), pole(scale.apply({5, 2}), 0.3), lam(1));
    for (std::size_t i = 0; i < base.bounds.size(); ++i) {
      CAPTURE(base.bounds[i].name);
      if (!base.bounds[i].applicable) continue;
      CHECK(s.bounds[i].rhs == Approx(base.bounds[i].rhs / (t * t)).epsilon(1e-9));
    }
  }
}
