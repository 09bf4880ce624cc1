#include "fluxgap/errors.hpp"
#include "fluxgap/partition.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace fluxgap {

namespace {

// Holes realized as regions; all equal disks (points included) admit the
// closed-form bisector exits.
bool equal_disks(const std::vector<ConvexShape>& regions) {
  for (const auto& r : regions)
    if (r.polygonal_core() || std::abs(r.radius() - regions.front().radius()) > 1e-12 * (1 + r.radius())) return false;
  return true;
}

std::vector<ConvexShape> hole_regions(const PlanarDomain& d) {
  std::vector<ConvexShape> out;
  for (int j = 0; j < d.n_holes(); ++j) out.push_back(d.hole_region(j));
  return out;
}

double domain_scale(const PlanarDomain& d) { return std::max(1.0, diameter(d.outer)); }

// Smallest t in [0, t_max] with t >= rho_k(o + t u), i.e. where the ray
// from G_j reaches the equidistant set of G_j and G_k. Along an orthogonal
// ray t - rho_k is non-decreasing, so bisection is exact.
double bisector_hit(const ConvexShape& gk, const Vec2& o, const Vec2& u, double t_max, double tol) {
  auto g = [&](double t) { return t - signed_distance(gk, o + t * u); };
  if (g(t_max) < 0) return std::numeric_limits<double>::infinity();
  double lo = 0.0, hi = t_max;
  for (int it = 0; it < 200 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (g(mid) < 0) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

// Same for two equal disks: the equidistant set is the perpendicular
// bisector of the centres.
double bisector_hit_equal(const ConvexShape& gj, const ConvexShape& gk, const Vec2& o, const Vec2& u) {
  const Vec2 cj = gj.core()[0], ck = gk.core()[0];
  const Vec2 d = ck - cj;
  const double den = u.dot(d);
  if (den <= 0) return std::numeric_limits<double>::infinity();
  const Vec2 mid = 0.5 * (cj + ck);
  return (mid - o).dot(d) / den;
}

bool point_in_polygon(const std::vector<Vec2>& poly, const Vec2& p) {
  bool in = false;
  const std::size_t n = poly.size();
  for (std::size_t i = 0, k = n - 1; i < n; k = i++) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[k];
    if ((a.y() > p.y()) != (b.y() > p.y())) {
      const double x = a.x() + (p.y() - a.y()) * (b.x() - a.x()) / (b.y() - a.y());
      if (p.x() < x) in = !in;
    }
  }
  return in;
}

double distance_to_polyline(const std::vector<Vec2>& poly, const Vec2& p) {
  double d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < poly.size(); ++i)
    d = std::min(d, point_segment_distance(p, poly[i], poly[(i + 1) % poly.size()]));
  return d;
}

}  // namespace

int nearest_hole(const PlanarDomain& domain, const Vec2& x) {
  int best = 0;
  double bd = std::numeric_limits<double>::infinity();
  for (int j = 0; j < domain.n_holes(); ++j) {
    const double d = signed_distance(domain.hole_region(j), x);
    if (d < bd) {
      bd = d;
      best = j;
    }
  }
  return best;
}

bool in_cell(const PlanarDomain& domain, int j, const Vec2& x) {
  if (!domain.contains(x)) return false;
  const double dj = signed_distance(domain.hole_region(j), x);
  for (int k = 0; k < domain.n_holes(); ++k)
    if (k != j && !(dj < signed_distance(domain.hole_region(k), x))) return false;
  return true;
}

EquidistantCurve equidistant_curve(const ConvexShape& gi, const ConvexShape& gj, const Rect& box, int resolution) {
  if (resolution < 2) throw ValidationError("resolution must be at least 2");
  if (!(box.x1 > box.x0) || !(box.y1 > box.y0)) throw ValidationError("equidistant curve needs a non-empty box");
  if (!(shape_distance(gi, gj) > 0)) throw ValidationError("equidistant curve of intersecting shapes");

  const int n = resolution;
  const double hx = (box.x1 - box.x0) / n, hy = (box.y1 - box.y0) / n;
  const double scale = std::max(box.x1 - box.x0, box.y1 - box.y0);
  auto node = [&](int i, int j) { return Vec2(box.x0 + i * hx, box.y0 + j * hy); };
  auto f = [&](const Vec2& x) { return signed_distance(gi, x) - signed_distance(gj, x); };

  std::vector<double> val(static_cast<std::size_t>((n + 1) * (n + 1)));
  auto at = [&](int i, int j) -> double& { return val[static_cast<std::size_t>(j * (n + 1) + i)]; };
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) at(i, j) = f(node(i, j));

  EquidistantCurve out;
  std::vector<Vec2> pts;
  std::map<long long, int> crossing;  // grid edge -> sample index
  // Horizontal edge (i,j)-(i+1,j) has id 2*(j*(n+1)+i), vertical (i,j)-(i,j+1) the odd id.
  auto edge_point = [&](int i0, int j0, int i1, int j1) -> int {
    const bool horiz = j0 == j1;
    const long long id = 2LL * (j0 * (n + 1) + i0) + (horiz ? 0 : 1);
    if (auto it = crossing.find(id); it != crossing.end()) return it->second;
    Vec2 a = node(i0, j0), b = node(i1, j1);
    double fa = at(i0, j0);
    for (int it = 0; it < 200 && (b - a).norm() > 1e-14 * scale; ++it) {
      const Vec2 m = 0.5 * (a + b);
      const double fm = f(m);
      if (fm == 0) {
        a = b = m;
        break;
      }
      if ((fm > 0) == (fa > 0)) {
        a = m;
        fa = fm;
      } else {
        b = m;
      }
    }
    const Vec2 p = 0.5 * (a + b);
    out.max_residual = std::max(out.max_residual, std::abs(f(p)));
    pts.push_back(p);
    crossing.emplace(id, static_cast<int>(pts.size()) - 1);
    return static_cast<int>(pts.size()) - 1;
  };

  std::vector<std::vector<int>> adj;
  auto link = [&](int a, int b) {
    if (static_cast<int>(adj.size()) < static_cast<int>(pts.size())) adj.resize(pts.size());
    adj[static_cast<std::size_t>(a)].push_back(b);
    adj[static_cast<std::size_t>(b)].push_back(a);
  };

  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const int ci[4] = {i, i + 1, i + 1, i};
      const int cj[4] = {j, j, j + 1, j + 1};
      bool pos[4];
      for (int m = 0; m < 4; ++m) pos[m] = at(ci[m], cj[m]) >= 0;
      int e[4];  // crossing on edge m (corner m -> corner m+1), or -1
      int count = 0;
      for (int m = 0; m < 4; ++m) {
        const int m1 = (m + 1) % 4;
        e[m] = -1;
        if (pos[m] != pos[m1]) {
          // Canonical direction: from the lower-left node of the edge.
          const bool fwd = m < 2;
          e[m] = fwd ? edge_point(ci[m], cj[m], ci[m1], cj[m1]) : edge_point(ci[m1], cj[m1], ci[m], cj[m]);
          ++count;
        }
      }
      if (count == 2) {
        int a = -1, b = -1;
        for (int m = 0; m < 4; ++m)
          if (e[m] >= 0) (a < 0 ? a : b) = e[m];
        link(a, b);
      } else if (count == 4) {
        // Saddle: cut off the corners whose sign differs from the centre.
        const bool centre = f(node(i, j) + Vec2(hx / 2, hy / 2)) >= 0;
        for (int m = 0; m < 4; ++m)
          if (pos[m] != centre) link(e[(m + 3) % 4], e[m]);
      }
    }
  adj.resize(pts.size());

  // Chain the segments into polylines: open chains first, then loops.
  std::vector<char> used(pts.size(), 0);
  auto walk = [&](int start) {
    std::vector<Vec2> line;
    int prev = -1, cur = start;
    while (cur >= 0 && !used[static_cast<std::size_t>(cur)]) {
      used[static_cast<std::size_t>(cur)] = 1;
      line.push_back(pts[static_cast<std::size_t>(cur)]);
      int next = -1;
      for (int nb : adj[static_cast<std::size_t>(cur)])
        if (nb != prev && !used[static_cast<std::size_t>(nb)]) {
          next = nb;
          break;
        }
      prev = cur;
      cur = next;
    }
    if (!line.empty()) out.polylines.push_back(std::move(line));
  };
  for (std::size_t v = 0; v < pts.size(); ++v)
    if (!used[v] && adj[v].size() <= 1) walk(static_cast<int>(v));
  for (std::size_t v = 0; v < pts.size(); ++v)
    if (!used[v]) walk(static_cast<int>(v));

  // Best-fit line through all samples.
  if (pts.size() >= 2) {
    Vec2 mean = Vec2::Zero();
    for (const auto& p : pts) mean += p;
    mean /= static_cast<double>(pts.size());
    Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();
    for (const auto& p : pts) cov += (p - mean) * (p - mean).transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(cov);
    const Vec2 normal = es.eigenvectors().col(0);
    for (const auto& p : pts) out.line_residual = std::max(out.line_residual, std::abs(normal.dot(p - mean)));
    out.straight = out.line_residual <= 1e-7;
  }
  const bool expect_line = !gi.polygonal_core() && !gj.polygonal_core() &&
                           std::abs(gi.radius() - gj.radius()) <= 1e-12 * (1 + gi.radius());
  if (expect_line && !pts.empty() && !out.straight)
    throw Error("equidistant set of equal disks is not straight (residual " + std::to_string(out.line_residual) + ")");
  return out;
}

std::vector<Cell> cells(const PlanarDomain& domain, const CellOptions& opts) {
  domain.validate();
  if (domain.n_holes() < 2) throw ValidationError("cells need at least two holes");
  if (opts.resolution < 8) throw ValidationError("cell resolution must be at least 8");
  const auto regions = hole_regions(domain);
  const bool exact = equal_disks(regions);
  const double scale = domain_scale(domain);
  const double tol = 1e-13 * scale;
  const ConvexShape& F = domain.outer;

  std::vector<Cell> out;
  for (int j = 0; j < domain.n_holes(); ++j) {
    const ConvexShape& gj = regions[static_cast<std::size_t>(j)];
    Cell c;
    c.j = j;
    c.exact = exact;
    c.inner_perimeter = gj.kind() == ShapeKind::point ? 0.0 : perimeter(gj);
    c.width_min = std::numeric_limits<double>::infinity();
    for (const auto& grp : orthogonal_rays(gj, opts.boundary_samples, opts.cone_samples))
      for (const auto& ray : grp) {
        double t = ray_exit(F, ray.origin, ray.dir);
        int owner = -1;
        for (int k = 0; k < domain.n_holes(); ++k) {
          if (k == j) continue;
          const ConvexShape& gk = regions[static_cast<std::size_t>(k)];
          const double tk = exact ? bisector_hit_equal(gj, gk, ray.origin, ray.dir)
                                  : bisector_hit(gk, ray.origin, ray.dir, t, tol);
          if (tk < t) {
            t = tk;
            owner = k;
          }
        }
        c.rays.push_back(ray);
        c.lengths.push_back(t);
        c.boundary.push_back(ray.origin + t * ray.dir);
        c.owner.push_back(owner);
        c.width_min = std::min(c.width_min, t);
        c.width_max = std::max(c.width_max, t);
      }
    c.perimeter = polyline_length(c.boundary, true);
    c.area = std::abs(polygon_area(c.boundary));
    out.push_back(std::move(c));
  }

  // Audit: grid points of the domain must land in exactly one open cell
  // (ties aside), every cell must receive some, and the traced boundary
  // must agree with the distance predicate away from the boundary.
  Vec2 lo(std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity());
  Vec2 hi = -lo;
  for (const auto& p : boundary_polyline(F, 256)) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  if (F.radius() > 0 && !F.polygonal_core()) {
    lo = F.core()[0] - Vec2::Constant(F.radius());
    hi = F.core()[0] + Vec2::Constant(F.radius());
  }
  const int n = opts.resolution;
  const double margin = 2.0 * std::max(hi.x() - lo.x(), hi.y() - lo.y()) / n;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const Vec2 x(lo.x() + (a + 0.5) * (hi.x() - lo.x()) / n, lo.y() + (b + 0.5) * (hi.y() - lo.y()) / n);
      if (!domain.contains(x)) continue;
      int owners = 0;
      for (int j = 0; j < domain.n_holes(); ++j)
        if (in_cell(domain, j, x)) {
          ++owners;
          ++out[static_cast<std::size_t>(j)].audit_samples;
        }
      if (owners > 1) throw Error("cells overlap at a sample point");
      const int j = nearest_hole(domain, x);
      Cell& c = out[static_cast<std::size_t>(j)];
      if (!point_in_polygon(c.boundary, x) && distance_to_polyline(c.boundary, x) > margin) ++c.audit_mismatches;
    }
  for (const auto& c : out)
    if (c.audit_samples == 0)
      throw ResolutionError("cell " + std::to_string(c.j) + " received no audit samples; raise the resolution");
  return out;
}

double star_cosine(const PlanarDomain& domain, const Cell& cell) {
  const auto regions = hole_regions(domain);
  const ConvexShape& F = domain.outer;
  const double tol = 1e-9 * domain_scale(domain);
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < cell.rays.size(); ++i) {
    const Vec2 u = cell.rays[i].dir;
    const Vec2 q = cell.boundary[i];
    const double rho_j = cell.lengths[i];
    double c = std::numeric_limits<double>::infinity();
    // Every constraint active at q bounds the normal cone of the cell there.
    if (signed_distance(F, q) >= -tol) {
      if (F.radius() == 0 && F.polygonal_core()) {
        const auto& p = F.core();
        for (std::size_t e = 0; e < p.size(); ++e) {
          const Vec2 nrm = outward_normal(p[e], p[(e + 1) % p.size()]);
          if (nrm.dot(q - p[e]) >= -tol) c = std::min(c, u.dot(nrm));
        }
      } else {
        c = std::min(c, u.dot(distance_to_shape(q, F).gradient));
      }
    }
    for (int k = 0; k < domain.n_holes(); ++k) {
      if (k == cell.j) continue;
      const ConvexShape& gk = regions[static_cast<std::size_t>(k)];
      if (std::abs(signed_distance(gk, q) - rho_j) > tol) continue;
      const Vec2 nu = u - distance_to_shape(q, gk).gradient;
      if (nu.norm() == 0) throw Error("degenerate equidistant normal in star_cosine");
      c = std::min(c, u.dot(nu.normalized()));
    }
    if (!std::isfinite(c))
      throw Error("orthogonal ray of hole " + std::to_string(cell.j) + " leaves its cell through an untracked boundary");
    m = std::min(m, c);
  }
  return m;
}

}  // namespace fluxgap
