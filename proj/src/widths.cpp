#include "fluxgap/errors.hpp"
#include "fluxgap/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace fluxgap {

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

void sort_unique(std::vector<double>& v, double tol) {
  std::sort(v.begin(), v.end());
  std::vector<double> out;
  for (double x : v)
    if (out.empty() || x - out.back() > tol) out.push_back(x);
  v = std::move(out);
}

double angle_between(const Vec2& from, const Vec2& to) { return std::atan2(cross(from, to), from.dot(to)); }

}  // namespace

std::vector<std::vector<Ray>> orthogonal_rays(const ConvexShape& g, int boundary_samples, int cone_samples,
                                              std::span<const Vec2> extra_targets,
                                              std::span<const Vec2> extra_normals) {
  const int ns = std::max(boundary_samples, 8);
  const int nc = std::max(cone_samples, 2);
  const double r = g.radius();
  std::vector<std::vector<Ray>> groups;

  if (!g.polygonal_core()) {
    const Vec2 c = g.core()[0];
    std::vector<double> ang;
    for (int i = 0; i < ns; ++i) ang.push_back(kTwoPi * i / ns);
    auto push = [&](const Vec2& d) {
      if (d.norm() == 0) return;
      double a = std::atan2(d.y(), d.x());
      if (a < 0) a += kTwoPi;
      ang.push_back(a);
    };
    for (const auto& t : extra_targets) push(t - c);
    for (const auto& n : extra_normals) push(n);
    sort_unique(ang, 1e-15);
    std::vector<Ray> grp;
    for (double a : ang) {
      const Vec2 u(std::cos(a), std::sin(a));
      grp.push_back({c + r * u, u});
    }
    groups.push_back(std::move(grp));
    return groups;
  }

  const auto& p = g.core();
  const std::size_t m = p.size();
  const double perim_core = polyline_length(p, true);
  for (std::size_t i = 0; i < m; ++i) {
    const Vec2& a = p[i];
    const Vec2& b = p[(i + 1) % m];
    const Vec2& c = p[(i + 2) % m];
    const Vec2 n = outward_normal(a, b);
    const double len2 = (b - a).squaredNorm();
    const int k = std::max(4, static_cast<int>(std::ceil(ns * std::sqrt(len2) / perim_core)));
    std::vector<double> ts;
    for (int j = 0; j <= k; ++j) ts.push_back(static_cast<double>(j) / k);
    for (const auto& t : extra_targets) {
      const double s = (t - a).dot(b - a) / len2;
      if (s > 0 && s < 1) ts.push_back(s);
    }
    sort_unique(ts, 1e-15);
    std::vector<Ray> edge;
    for (double s : ts) edge.push_back({a + s * (b - a) + r * n, n});
    groups.push_back(std::move(edge));

    const Vec2 n1 = outward_normal(b, c);
    const double sweep = angle_between(n, n1);
    std::vector<double> rel;
    for (int j = 0; j <= nc; ++j) rel.push_back(sweep * j / nc);
    auto push = [&](const Vec2& d) {
      if (d.norm() == 0) return;
      const double x = angle_between(n, d);
      if (x > 0 && x < sweep) rel.push_back(x);
    };
    for (const auto& t : extra_targets) push(t - b);
    for (const auto& nn : extra_normals) push(nn);
    sort_unique(rel, 1e-15);
    std::vector<Ray> fan;
    const double a0 = std::atan2(n.y(), n.x());
    for (double x : rel) {
      const Vec2 u(std::cos(a0 + x), std::sin(a0 + x));
      fan.push_back({b + r * u, u});
    }
    groups.push_back(std::move(fan));
  }
  return groups;
}

double beta_tilde(const PlanarDomain& d) {
  double bt = std::numeric_limits<double>::infinity();
  for (int j = 0; j < d.n_holes(); ++j) {
    const ConvexShape gj = d.hole_region(j);
    bt = std::min(bt, boundary_gap(gj, d.outer));
    for (int k = j + 1; k < d.n_holes(); ++k) bt = std::min(bt, shape_distance(gj, d.hole_region(k)));
  }
  return bt;
}

WidthReport widths(const PlanarDomain& d, const WidthOptions& opts) {
  if (d.n_holes() == 0) throw ValidationError("domain has no inner boundary");
  d.validate();

  std::vector<ConvexShape> regions;
  for (int j = 0; j < d.n_holes(); ++j) regions.push_back(d.hole_region(j));

  WidthReport rep;
  rep.n_samples = opts.boundary_samples;
  rep.beta = std::numeric_limits<double>::infinity();
  rep.B = 0.0;
  double pad_lo = 0.0, pad_hi = 0.0;

  for (int j = 0; j < d.n_holes(); ++j) {
    std::vector<Vec2> targets, normals;
    if (d.outer.polygonal_core()) {
      const auto& q = d.outer.core();
      for (std::size_t i = 0; i < q.size(); ++i) {
        targets.push_back(q[i]);
        normals.push_back(outward_normal(q[i], q[(i + 1) % q.size()]));
      }
    }
    for (int k = 0; k < d.n_holes(); ++k) {
      if (k == j) continue;
      const auto& q = regions[static_cast<std::size_t>(k)].core();
      for (const auto& v : q) targets.push_back(v);
      if (q.size() >= 3)
        for (std::size_t i = 0; i < q.size(); ++i) normals.push_back(-outward_normal(q[i], q[(i + 1) % q.size()]));
    }

    const auto groups = orthogonal_rays(regions[static_cast<std::size_t>(j)], opts.boundary_samples,
                                        opts.cone_samples, targets, normals);
    for (const auto& grp : groups) {
      std::vector<double> len(grp.size());
      for (std::size_t i = 0; i < grp.size(); ++i) {
        const Ray& ray = grp[i];
        double t = ray_exit(d.outer, ray.origin, ray.dir);
        if (opts.termination == RayTermination::first_exit) {
          for (int k = 0; k < d.n_holes(); ++k) {
            if (k == j) continue;
            if (auto e = ray_entry(regions[static_cast<std::size_t>(k)], ray.origin, ray.dir)) t = std::min(t, *e);
          }
        }
        if (!std::isfinite(t)) throw Error("orthogonal ray failed to exit the domain");
        len[i] = t;
      }
      rep.n_rays += static_cast<int>(grp.size());
      // Groups of a disk are closed loops; edges and fans are open runs.
      const bool cyclic = groups.size() == 1;
      auto local_var = [&](std::size_t i) {
        double v = 0.0;
        const std::size_t n = len.size();
        if (i > 0) v = std::max(v, std::abs(len[i - 1] - len[i]));
        else if (cyclic && n > 1) v = std::max(v, std::abs(len[n - 1] - len[i]));
        if (i + 1 < n) v = std::max(v, std::abs(len[i + 1] - len[i]));
        else if (cyclic && n > 1) v = std::max(v, std::abs(len[0] - len[i]));
        return v;
      };
      for (std::size_t i = 0; i < len.size(); ++i) {
        const double l = len[i];
        const double tie = 1e-12 * std::max(1.0, l);
        const Segment seg{grp[i].origin, grp[i].origin + l * grp[i].dir};
        if (l < rep.beta - tie) {
          rep.beta = l;
          rep.beta_ray = seg;
          pad_lo = local_var(i);
        } else if (l <= rep.beta + tie) {
          pad_lo = std::min(pad_lo, local_var(i));
        }
        if (l > rep.B + tie) {
          rep.B = l;
          rep.B_ray = seg;
          pad_hi = local_var(i);
        } else if (l >= rep.B - tie) {
          pad_hi = std::min(pad_hi, local_var(i));
        }
      }
    }
  }
  rep.beta_lo = std::max(0.0, rep.beta - pad_lo);
  rep.B_hi = rep.B + pad_hi;
  rep.beta_tilde = beta_tilde(d);
  return rep;
}

}  // namespace fluxgap
