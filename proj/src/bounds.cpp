#include "fluxgap/bounds.hpp"

#include "fluxgap/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace fluxgap {

namespace {

constexpr double kPi = std::numbers::pi;

double sq(double x) { return x * x; }

double ratio(double beta, double B) { return B > 0 ? beta / B : 0.0; }

// Vertices of an axis-parallel rectangle core, or nullopt.
std::optional<Rect> as_rect(const ConvexShape& s) {
  if (s.kind() != ShapeKind::polygon || s.core().size() != 4) return std::nullopt;
  Rect r{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
         -std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (const Vec2& v : s.core()) {
    r.x0 = std::min(r.x0, v.x());
    r.y0 = std::min(r.y0, v.y());
    r.x1 = std::max(r.x1, v.x());
    r.y1 = std::max(r.y1, v.y());
  }
  for (const Vec2& v : s.core()) {
    const bool on_x = v.x() == r.x0 || v.x() == r.x1;
    const bool on_y = v.y() == r.y0 || v.y() == r.y1;
    if (!on_x || !on_y) return std::nullopt;
  }
  return r;
}

// The sharpness family: [-4,4]x[0,4] minus [-3,3]x[eps,2].
std::optional<double> sharpness_eps(const PlanarDomain& d) {
  if (d.n_holes() != 1) return std::nullopt;
  const auto o = as_rect(d.outer);
  const auto g = as_rect(d.holes[0]);
  if (!o || !g) return std::nullopt;
  const double tol = 1e-12;
  auto near = [&](double a, double b) { return std::abs(a - b) <= tol; };
  if (!(near(o->x0, -4) && near(o->x1, 4) && near(o->y0, 0) && near(o->y1, 4))) return std::nullopt;
  if (!(near(g->x0, -3) && near(g->x1, 3) && near(g->y1, 2))) return std::nullopt;
  return g->y0;
}

Hypothesis hyp(std::string text, bool ok) { return Hypothesis{std::move(text), ok}; }

BoundEntry entry(std::string name, std::vector<Hypothesis> h) {
  BoundEntry e;
  e.name = std::move(name);
  e.hypotheses = std::move(h);
  e.applicable = std::all_of(e.hypotheses.begin(), e.hypotheses.end(), [](const Hypothesis& x) { return x.ok; });
  return e;
}

}  // namespace

double bound_jfa(double perimeter_F, double beta, double B, double d) {
  return 4 * kPi * kPi / sq(perimeter_F) * sq(ratio(beta, B)) * d * d;
}

double bound_thm1a(double area_F, double perimeter_F, double diameter_F, double beta, double B, double d) {
  return kPi * kPi / 8 * sq(area_F) / (sq(perimeter_F) * sq(sq(diameter_F))) * ratio(beta, B) * d * d;
}

double bound_thm1b(double perimeter_F, double beta, double B, double d) {
  return kPi * kPi / sq(perimeter_F) * ratio(beta, B) * d * d;
}

double bound_multi(double perimeter_F, double beta, double B, double gamma) {
  return kPi * kPi / (2 * sq(perimeter_F + 2 * kPi * B)) * sq(sq(ratio(beta, B))) * gamma * gamma;
}

double bound_punctured(double perimeter_Omega, double beta_P, double B_P, double gamma) {
  return 4 * kPi * kPi / sq(perimeter_Omega) * sq(ratio(beta_P, B_P)) * gamma * gamma;
}

double bound_equal_disks(double perimeter_F, double beta, double B, double gamma) {
  return 4 * kPi * kPi / sq(perimeter_F) * sq(ratio(beta, B)) * gamma * gamma;
}

double bound_starlike(double perimeter_F1, double beta, double B, double m, double d) {
  if (!(m > 0)) return 0.0;
  return 4 * kPi * kPi / sq(perimeter_F1) * (beta * m / B) * d * d;
}

double sharpness_paper_coefficient() { return kPi * kPi / (360 * std::sqrt(5.0)); }
double sharpness_formula_coefficient() { return kPi * kPi / (28800 * std::sqrt(5.0)); }

PoleWidths pole_widths(const std::vector<Vec2>& poles, const ConvexShape& outer) {
  if (poles.empty()) throw ValidationError("no poles");
  PoleWidths w{std::numeric_limits<double>::infinity(), 0.0};
  auto take = [&](double v) {
    w.beta = std::min(w.beta, v);
    w.B = std::max(w.B, v);
  };
  for (std::size_t i = 0; i < poles.size(); ++i) {
    const double to_boundary = -signed_distance(outer, poles[i]);
    if (!(to_boundary > 0)) throw ValidationError("pole " + std::to_string(i) + " is not inside the domain");
    take(to_boundary);
    for (std::size_t j = i + 1; j < poles.size(); ++j) {
      const double dij = (poles[i] - poles[j]).norm();
      if (dij == 0) throw ValidationError("poles " + std::to_string(i) + " and " + std::to_string(j) + " coincide");
      take(dij);
    }
  }
  return w;
}

Invariants compute_invariants(const PlanarDomain& domain, const ClosedPotential& A, const WidthOptions& wo) {
  domain.validate();
  A.validate();
  Invariants inv;
  inv.n_holes = domain.n_holes();
  if (inv.n_holes == 0) throw ValidationError("domain has no holes");
  inv.area_F = area(domain.outer);
  inv.perimeter_F = perimeter(domain.outer);
  inv.diameter_F = diameter(domain.outer);
  inv.outer_smooth = domain.outer.smooth();
  inv.inj = inv.outer_smooth ? injectivity_radius(domain.outer) : 0.0;
  inv.all_points = domain.all_point_holes();
  inv.has_points = domain.has_point_holes();

  inv.perimeter_Omega = inv.perimeter_F;
  const bool regions = !inv.has_points || domain.pole_radius > 0;
  if (regions)
    for (int j = 0; j < inv.n_holes; ++j) inv.perimeter_Omega += perimeter(domain.hole_region(j));

  inv.equal_disks = std::all_of(domain.holes.begin(), domain.holes.end(), [&](const ConvexShape& h) {
    return h.kind() == ShapeKind::disk &&
           std::abs(h.radius() - domain.holes[0].radius()) <= 1e-12 * std::max(1.0, h.radius());
  });

  // Throws for a pole outside every hole: fluxes are never guessed.
  inv.fluxes = hole_fluxes(A, domain);
  inv.gamma = 0.5;
  for (double f : inv.fluxes) inv.gamma = std::min(inv.gamma, flux_distance(f));
  inv.d = inv.n_holes == 1 ? flux_distance(inv.fluxes[0]) : inv.gamma;

  if (regions) {
    const WidthReport w = widths(domain, wo);
    inv.beta = w.beta;
    inv.B = w.B;
    inv.beta_lo = w.beta_lo;
    inv.B_hi = w.B_hi;
    inv.beta_tilde = w.beta_tilde;
    inv.n_samples = w.n_samples;
  }
  if (inv.all_points) {
    std::vector<Vec2> poles;
    for (const auto& h : domain.holes) poles.push_back(h.core()[0]);
    const PoleWidths pw = pole_widths(poles, domain.outer);
    inv.beta_P = pw.beta;
    inv.B_P = pw.B;
  }
  inv.sharpness_eps = sharpness_eps(domain);
  return inv;
}

StarlikeTerm starlike_single(const PlanarDomain& domain, double d, const WidthOptions& wo) {
  if (domain.n_holes() != 1) throw ValidationError("starlike_single needs exactly one hole");
  const ConvexShape g = domain.hole_region(0);
  const ConvexShape& F = domain.outer;
  std::vector<Vec2> targets;
  if (F.polygonal_core()) targets = F.core();
  Cell cell;
  cell.j = 0;
  for (const auto& group : orthogonal_rays(g, wo.boundary_samples, wo.cone_samples, targets)) {
    for (const Ray& r : group) {
      const double t = ray_exit(F, r.origin, r.dir);
      cell.rays.push_back(r);
      cell.lengths.push_back(t);
      cell.boundary.push_back(r.origin + t * r.dir);
    }
  }
  const WidthReport w = widths(domain, wo);
  StarlikeTerm s;
  s.hole = 0;
  s.perimeter = perimeter(F);
  s.beta = w.beta_lo;
  s.B = w.B_hi;
  s.m = star_cosine(domain, cell);
  s.d = d;
  s.rhs = bound_starlike(s.perimeter, s.beta, s.B, s.m, s.d);
  return s;
}

bool BoundReport::all_pass() const {
  return std::all_of(bounds.begin(), bounds.end(), [](const BoundEntry& e) { return !e.applicable || e.pass; });
}

BoundReport compose_report(const PlanarDomain& domain, const ClosedPotential& A, const LambdaInfo& lambda,
                           const ReportOptions& opts) {
  BoundReport r;
  r.inv = compute_invariants(domain, A, opts.widths);
  r.lambda = lambda;
  const Invariants& v = r.inv;
  const bool one = v.n_holes == 1;

  if (v.all_points) {
    BoundEntry e = entry("punctured", {hyp("every hole is a pole", true), hyp("poles distinct and inside", true)});
    e.rhs = bound_punctured(v.perimeter_F, *v.beta_P, *v.B_P, v.gamma);
    e.note = "outer perimeter as |dOmega|; lambda at pole radius " + std::to_string(domain.pole_radius);
    r.bounds.push_back(e);
  } else {
    if (one) {
      BoundEntry jfa = entry("jfa", {hyp("one convex hole", true)});
      jfa.rhs = bound_jfa(v.perimeter_F, v.beta_lo, v.B_hi, v.d);
      r.bounds.push_back(jfa);

      BoundEntry a = entry("thm1a", {hyp("one convex hole", true)});
      a.rhs = bound_thm1a(v.area_F, v.perimeter_F, v.diameter_F, v.beta_lo, v.B_hi, v.d);
      if (v.sharpness_eps) {
        a.paper_stated = sharpness_paper_coefficient() * *v.sharpness_eps * v.d * v.d;
        a.note = "literature coefficient pi^2/(360 sqrt 5) differs from the formula by D(F)^2 = 80";
      }
      r.bounds.push_back(a);

      BoundEntry b = entry("thm1b", {hyp("one convex hole", true), hyp("outer boundary smooth", v.outer_smooth),
                                     hyp("beta < Inj(outer boundary)", v.beta < v.inj)});
      b.rhs = bound_thm1b(v.perimeter_F, v.beta_lo, v.B_hi, v.d);
      r.bounds.push_back(b);
    }

    BoundEntry m = entry("multi", {hyp("convex holes", true)});
    m.rhs = bound_multi(v.perimeter_F, v.beta_lo, v.B_hi, v.gamma);
    if (v.has_points) m.note = "poles realized as disks of radius " + std::to_string(domain.pole_radius);
    r.bounds.push_back(m);

    if (v.equal_disks) {
      BoundEntry e = entry("equal_disks", {hyp("holes are disks of one radius", true)});
      e.rhs = bound_equal_disks(v.perimeter_F, v.beta_lo, v.B_hi, v.gamma);
      r.bounds.push_back(e);
    }

    if (opts.starlike) {
      BoundEntry e;
      e.name = "starlike";
      try {
        if (one) {
          r.starlike_terms.push_back(starlike_single(domain, v.d, opts.widths));
        } else {
          const std::vector<Cell> cs = cells(domain, opts.cells);
          for (const Cell& c : cs) {
            StarlikeTerm s;
            s.hole = c.j;
            s.perimeter = c.perimeter;
            s.beta = c.width_min;
            s.B = c.width_max;
            s.m = star_cosine(domain, c);
            s.d = flux_distance(v.fluxes[static_cast<std::size_t>(c.j)]);
            s.rhs = bound_starlike(s.perimeter, s.beta, s.B, s.m, s.d);
            r.starlike_terms.push_back(s);
          }
          e.note = "min over the equidistant cells";
        }
        double mmin = std::numeric_limits<double>::infinity();
        e.rhs = std::numeric_limits<double>::infinity();
        for (const auto& s : r.starlike_terms) {
          mmin = std::min(mmin, s.m);
          e.rhs = std::min(e.rhs, s.rhs);
        }
        e.hypotheses = {hyp("star-shaped with respect to the inner boundary (m > 0)", mmin > 0)};
        e.applicable = mmin > 0;
        if (!e.applicable) e.rhs = 0.0;
      } catch (const Error& ex) {
        e.computed = false;
        e.applicable = false;
        e.rhs = 0.0;
        e.note = std::string("not computed: ") + ex.what();
      }
      r.bounds.push_back(e);
    }
  }

  for (BoundEntry& e : r.bounds) {
    e.rhs *= opts.scale_rhs;
    e.margin = e.rhs > 0 ? lambda.value / e.rhs : std::numeric_limits<double>::infinity();
    e.pass = e.applicable && e.computed && lambda.computed && lambda.value >= e.rhs;
  }
  return r;
}

}  // namespace fluxgap
