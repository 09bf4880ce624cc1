#include "fluxgap/geometry.hpp"

#include "fluxgap/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace fluxgap {

namespace {

constexpr double kPi = std::numbers::pi;

double bbox_scale(std::span<const Vec2> pts) {
  Vec2 lo = pts.front(), hi = pts.front();
  for (const auto& p : pts) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  return std::max((hi - lo).norm(), 1e-300);
}

std::vector<Vec2> normalize_convex(std::vector<Vec2> v) {
  for (const auto& p : v) {
    if (!std::isfinite(p.x()) || !std::isfinite(p.y()))
      throw ValidationError("polygon vertex is not finite");
  }
  if (v.size() < 3) throw ValidationError("polygon needs at least 3 vertices");
  const double scale = bbox_scale(v);

  std::vector<Vec2> u;
  for (const auto& p : v) {
    if (u.empty() || (p - u.back()).norm() > 1e-12 * scale) u.push_back(p);
  }
  while (u.size() > 1 && (u.front() - u.back()).norm() <= 1e-12 * scale) u.pop_back();
  if (u.size() < 3) throw ValidationError("polygon has fewer than 3 distinct vertices");

  if (polygon_area(u) < 0) std::reverse(u.begin(), u.end());

  bool changed = true;
  while (changed && u.size() >= 3) {
    changed = false;
    const std::size_t n = u.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Vec2& a = u[(i + n - 1) % n];
      const Vec2& b = u[i];
      const Vec2& c = u[(i + 1) % n];
      const Vec2 e1 = b - a, e2 = c - b;
      const double cr = cross(e1, e2);
      const double tol = 1e-12 * e1.norm() * e2.norm();
      if (std::abs(cr) <= tol) {
        if (e1.dot(e2) < 0) throw ValidationError("polygon folds back on itself");
        u.erase(u.begin() + static_cast<std::ptrdiff_t>(i));
        changed = true;
        break;
      }
      if (cr < 0) throw ValidationError("polygon is not convex");
    }
  }
  if (u.size() < 3) throw ValidationError("polygon is degenerate (collinear vertices)");
  return u;
}

// Signed distance to a convex CCW polygon.
double sd_polygon(std::span<const Vec2> poly, const Vec2& x) {
  const std::size_t n = poly.size();
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[(i + 1) % n];
    m = std::max(m, outward_normal(a, b).dot(x - a));
  }
  if (m <= 0) return m;
  double d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) d = std::min(d, point_segment_distance(x, poly[i], poly[(i + 1) % n]));
  return d;
}

Vec2 nearest_on_segment(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 e = b - a;
  const double l2 = e.squaredNorm();
  if (l2 == 0) return a;
  const double t = std::clamp((p - a).dot(e) / l2, 0.0, 1.0);
  return a + t * e;
}

Vec2 nearest_on_polygon_boundary(std::span<const Vec2> poly, const Vec2& x) {
  const std::size_t n = poly.size();
  double best = std::numeric_limits<double>::infinity();
  Vec2 q = poly[0];
  for (std::size_t i = 0; i < n; ++i) {
    Vec2 c = nearest_on_segment(x, poly[i], poly[(i + 1) % n]);
    double d = (c - x).norm();
    if (d < best) {
      best = d;
      q = c;
    }
  }
  return q;
}

bool polygons_intersect(std::span<const Vec2> a, std::span<const Vec2> b) {
  auto separated_by = [](std::span<const Vec2> p, std::span<const Vec2> q) {
    const std::size_t n = p.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Vec2 nrm = outward_normal(p[i], p[(i + 1) % n]);
      const double lim = nrm.dot(p[i]);
      bool all_out = true;
      for (const auto& v : q) {
        if (nrm.dot(v) <= lim) {
          all_out = false;
          break;
        }
      }
      if (all_out) return true;
    }
    return false;
  };
  return !separated_by(a, b) && !separated_by(b, a);
}

double core_distance(const ConvexShape& a, const ConvexShape& b) {
  const auto& ca = a.core();
  const auto& cb = b.core();
  if (ca.size() == 1 && cb.size() == 1) return (ca[0] - cb[0]).norm();
  if (ca.size() == 1) return std::max(0.0, sd_polygon(cb, ca[0]));
  if (cb.size() == 1) return std::max(0.0, sd_polygon(ca, cb[0]));
  if (polygons_intersect(ca, cb)) return 0.0;
  double d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < ca.size(); ++i)
    for (std::size_t j = 0; j < cb.size(); ++j) {
      d = std::min(d, point_segment_distance(ca[i], cb[j], cb[(j + 1) % cb.size()]));
      d = std::min(d, point_segment_distance(cb[j], ca[i], ca[(i + 1) % ca.size()]));
    }
  return d;
}

double bracket_length(const ConvexShape& s, const Vec2& origin) {
  double far = 0;
  for (const auto& c : s.core()) far = std::max(far, (c - origin).norm());
  return far + 2 * s.radius() + 1.0;
}

// Generic exit by bisection on the convex function t -> sd(origin + t dir).
double ray_exit_generic(const ConvexShape& s, const Vec2& o, const Vec2& d) {
  double lo = 0.0, hi = bracket_length(s, o);
  for (int it = 0; it < 200 && hi - lo > 1e-16 * (1 + hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (signed_distance(s, o + mid * d) <= 0) lo = mid;
    else hi = mid;
  }
  return lo;
}

std::optional<double> ray_entry_generic(const ConvexShape& s, const Vec2& o, const Vec2& d) {
  auto f = [&](double t) { return signed_distance(s, o + t * d); };
  if (f(0.0) < 0) return 0.0;
  double a = 0.0, b = bracket_length(s, o);
  const double g = (std::sqrt(5.0) - 1) / 2;
  double x1 = b - g * (b - a), x2 = a + g * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 200 && b - a > 1e-15 * (1 + b); ++it) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - g * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + g * (b - a);
      f2 = f(x2);
    }
  }
  const double tm = 0.5 * (a + b);
  if (f(tm) >= 0) return std::nullopt;
  double lo = 0.0, hi = tm;
  for (int it = 0; it < 200 && hi - lo > 1e-16 * (1 + hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) < 0) hi = mid;
    else lo = mid;
  }
  return hi;
}

}  // namespace

Vec2 Transform2::apply(const Vec2& x) const {
  const double c = std::cos(angle), s = std::sin(angle);
  return scale * Vec2(c * x.x() - s * x.y(), s * x.x() + c * x.y()) + translation;
}

ConvexShape ConvexShape::polygon(std::vector<Vec2> vertices) {
  return ConvexShape(ShapeKind::polygon, normalize_convex(std::move(vertices)), 0.0);
}

ConvexShape ConvexShape::disk(const Vec2& center, double radius) {
  if (!(radius > 0) || !std::isfinite(radius)) throw ValidationError("disk radius must be positive");
  if (!center.allFinite()) throw ValidationError("disk center is not finite");
  return ConvexShape(ShapeKind::disk, {center}, radius);
}

ConvexShape ConvexShape::point(const Vec2& center) {
  if (!center.allFinite()) throw ValidationError("point is not finite");
  return ConvexShape(ShapeKind::point, {center}, 0.0);
}

ConvexShape ConvexShape::rounded(std::vector<Vec2> core, double radius) {
  if (!(radius > 0) || !std::isfinite(radius)) throw ValidationError("rounding radius must be positive");
  return ConvexShape(ShapeKind::rounded, normalize_convex(std::move(core)), radius);
}

Vec2 ConvexShape::interior_point() const {
  Vec2 c = Vec2::Zero();
  for (const auto& p : core_) c += p;
  return c / static_cast<double>(core_.size());
}

ConvexShape ConvexShape::dilated(double a) const {
  if (a < 0) throw ValidationError("dilation radius must be non-negative");
  const double r = radius_ + a;
  if (r == 0) return *this;
  if (core_.size() == 1) return ConvexShape(ShapeKind::disk, core_, r);
  return ConvexShape(ShapeKind::rounded, core_, r);
}

ConvexShape ConvexShape::transformed(const Transform2& t) const {
  std::vector<Vec2> c;
  c.reserve(core_.size());
  for (const auto& p : core_) c.push_back(t.apply(p));
  return ConvexShape(kind_, std::move(c), radius_ * t.scale);
}

double polygon_area(std::span<const Vec2> poly) {
  double a = 0;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) a += cross(poly[i], poly[(i + 1) % n]);
  return 0.5 * a;
}

double polyline_length(std::span<const Vec2> poly, bool closed) {
  double l = 0;
  for (std::size_t i = 1; i < poly.size(); ++i) l += (poly[i] - poly[i - 1]).norm();
  if (closed && poly.size() > 1) l += (poly.front() - poly.back()).norm();
  return l;
}

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
  return (nearest_on_segment(p, a, b) - p).norm();
}

double area(const ConvexShape& s) {
  if (s.kind() == ShapeKind::point) throw UnsupportedShapeError("area of a point shape");
  const double r = s.radius();
  if (!s.polygonal_core()) return kPi * r * r;
  const auto& c = s.core();
  return polygon_area(c) + polyline_length(c, true) * r + kPi * r * r;
}

double perimeter(const ConvexShape& s) {
  if (s.kind() == ShapeKind::point) throw UnsupportedShapeError("perimeter of a point shape");
  const double r = s.radius();
  if (!s.polygonal_core()) return 2 * kPi * r;
  return polyline_length(s.core(), true) + 2 * kPi * r;
}

double diameter(const ConvexShape& s) {
  if (s.kind() == ShapeKind::point) throw UnsupportedShapeError("diameter of a point shape");
  const auto& c = s.core();
  double d = 0;
  for (std::size_t i = 0; i < c.size(); ++i)
    for (std::size_t j = i + 1; j < c.size(); ++j) d = std::max(d, (c[i] - c[j]).norm());
  return d + 2 * s.radius();
}

double signed_distance(const ConvexShape& s, const Vec2& x) {
  if (!s.polygonal_core()) return (x - s.core()[0]).norm() - s.radius();
  return sd_polygon(s.core(), x) - s.radius();
}

bool contains(const ConvexShape& s, const Vec2& x) { return signed_distance(s, x) < 0; }

Vec2 nearest_boundary_point(const ConvexShape& s, const Vec2& x) {
  const double r = s.radius();
  if (!s.polygonal_core()) {
    const Vec2 c = s.core()[0];
    const Vec2 d = x - c;
    const double n = d.norm();
    return n > 0 ? Vec2(c + r * d / n) : Vec2(c + Vec2(r, 0));
  }
  const auto& poly = s.core();
  const double sd_core = sd_polygon(poly, x);
  if (sd_core > 0) {
    const Vec2 q = nearest_on_polygon_boundary(poly, x);
    if (r == 0) return q;
    return q + r * (x - q).normalized();
  }
  // Inside the core: nearest edge line.
  const std::size_t n = poly.size();
  double best = -std::numeric_limits<double>::infinity();
  std::size_t bi = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double v = outward_normal(poly[i], poly[(i + 1) % n]).dot(x - poly[i]);
    if (v > best) {
      best = v;
      bi = i;
    }
  }
  const Vec2 nrm = outward_normal(poly[bi], poly[(bi + 1) % n]);
  return x - best * nrm + r * nrm;
}

DistanceResult distance_to_shape(const Vec2& x, const ConvexShape& s) {
  DistanceResult res;
  const double sd = signed_distance(s, x);
  res.distance = sd;
  const double scale = std::max(1.0, s.kind() == ShapeKind::point ? 0.0 : diameter(s));
  const double eps = 1e-12 * scale;
  const double r = s.radius();

  if (!s.polygonal_core()) {
    const Vec2 d = x - s.core()[0];
    if (d.norm() == 0) {
      res.gradient_defined = false;
      res.inside = sd < 0;
      return res;
    }
    res.gradient = d.normalized();
    res.inside = sd < -eps;
    return res;
  }

  const auto& poly = s.core();
  const std::size_t n = poly.size();
  const double sd_core = sd_polygon(poly, x);
  if (sd_core > eps || (sd_core > 0 && r > 0)) {
    // Outside the core: direction from the nearest core point.
    const Vec2 q = nearest_on_polygon_boundary(poly, x);
    const Vec2 d = x - q;
    if (d.norm() > 0) {
      res.gradient = d.normalized();
      res.inside = sd < -eps;
      return res;
    }
  }
  // On or inside the core boundary: nearest edge line(s).
  double best = -std::numeric_limits<double>::infinity(), second = best;
  std::size_t bi = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double v = outward_normal(poly[i], poly[(i + 1) % n]).dot(x - poly[i]);
    if (v > best) {
      second = best;
      best = v;
      bi = i;
    } else if (v > second) {
      second = v;
    }
  }
  res.gradient = outward_normal(poly[bi], poly[(bi + 1) % n]);
  res.inside = sd < -eps;
  if (best - second <= eps) res.gradient_defined = false;
  return res;
}

double ray_exit(const ConvexShape& s, const Vec2& origin, const Vec2& dir_in) {
  const Vec2 dir = dir_in.normalized();
  const double r = s.radius();
  if (!s.polygonal_core()) {
    const Vec2 oc = origin - s.core()[0];
    const double b = dir.dot(oc);
    const double c = oc.squaredNorm() - r * r;
    const double disc = std::max(0.0, b * b - c);
    return std::max(0.0, -b + std::sqrt(disc));
  }
  if (r > 0) return ray_exit_generic(s, origin, dir);
  const auto& poly = s.core();
  const std::size_t n = poly.size();
  double t = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 nrm = outward_normal(poly[i], poly[(i + 1) % n]);
    const double den = nrm.dot(dir);
    if (den > 0) t = std::min(t, nrm.dot(poly[i] - origin) / den);
  }
  return std::max(0.0, t);
}

std::optional<double> ray_entry(const ConvexShape& s, const Vec2& origin, const Vec2& dir_in) {
  const Vec2 dir = dir_in.normalized();
  const double r = s.radius();
  if (!s.polygonal_core()) {
    if (r == 0) return std::nullopt;
    const Vec2 oc = origin - s.core()[0];
    const double b = dir.dot(oc);
    const double c = oc.squaredNorm() - r * r;
    const double disc = b * b - c;
    if (disc <= 0) return std::nullopt;
    const double sq = std::sqrt(disc);
    const double t1 = -b - sq, t2 = -b + sq;
    if (t2 <= 0) return std::nullopt;
    return std::max(t1, 0.0);
  }
  if (r > 0) return ray_entry_generic(s, origin, dir);
  const auto& poly = s.core();
  const std::size_t n = poly.size();
  double t_in = 0.0, t_out = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 nrm = outward_normal(poly[i], poly[(i + 1) % n]);
    const double den = nrm.dot(dir);
    const double num = nrm.dot(poly[i] - origin);
    if (den == 0) {
      if (num <= 0) return std::nullopt;
    } else if (den > 0) {
      t_out = std::min(t_out, num / den);
    } else {
      t_in = std::max(t_in, num / den);
    }
  }
  const double scale = 1e-12 * (1 + t_out);
  if (t_in + scale < t_out && t_out > 0) return t_in;
  return std::nullopt;
}

NormalCone normal_cone(const ConvexShape& s, int vertex_index) {
  NormalCone cone;
  if (s.kind() != ShapeKind::polygon) {
    cone.degenerate = true;
    if (s.polygonal_core() && vertex_index >= 0 && vertex_index < static_cast<int>(s.core().size()))
      cone.vertex = s.core()[static_cast<std::size_t>(vertex_index)];
    return cone;
  }
  const auto& p = s.core();
  const int n = static_cast<int>(p.size());
  if (vertex_index < 0 || vertex_index >= n) throw ValidationError("vertex index out of range");
  const std::size_t i = static_cast<std::size_t>(vertex_index);
  const std::size_t prev = static_cast<std::size_t>((vertex_index + n - 1) % n);
  const std::size_t next = static_cast<std::size_t>((vertex_index + 1) % n);
  cone.vertex = p[i];
  cone.dir_lo = outward_normal(p[prev], p[i]);
  cone.dir_hi = outward_normal(p[i], p[next]);
  cone.angle = std::atan2(cross(cone.dir_lo, cone.dir_hi), cone.dir_lo.dot(cone.dir_hi));
  return cone;
}

double shape_distance(const ConvexShape& a, const ConvexShape& b) {
  return std::max(0.0, core_distance(a, b) - a.radius() - b.radius());
}

double boundary_gap(const ConvexShape& inner, const ConvexShape& outer) {
  double g = std::numeric_limits<double>::infinity();
  for (const auto& v : inner.core()) g = std::min(g, -signed_distance(outer, v));
  return g - inner.radius();
}

std::optional<ConvexShape> inner_parallel(const ConvexShape& s, double d) {
  if (d <= 0) return s;
  const double r = s.radius();
  if (!s.polygonal_core()) {
    if (r - d <= 0) return std::nullopt;
    return ConvexShape::disk(s.core()[0], r - d);
  }
  if (r > d) return ConvexShape::rounded(s.core(), r - d);
  if (r == d) return ConvexShape::polygon(s.core());
  const double e = d - r;
  const auto& core = s.core();
  std::vector<Vec2> poly = core;
  const std::size_t n = core.size();
  for (std::size_t i = 0; i < n && poly.size() >= 3; ++i) {
    const Vec2 nrm = outward_normal(core[i], core[(i + 1) % n]);
    const double lim = nrm.dot(core[i]) - e;
    std::vector<Vec2> out;
    const std::size_t m = poly.size();
    for (std::size_t k = 0; k < m; ++k) {
      const Vec2& a = poly[k];
      const Vec2& b = poly[(k + 1) % m];
      const double fa = nrm.dot(a) - lim, fb = nrm.dot(b) - lim;
      if (fa <= 0) out.push_back(a);
      if ((fa < 0 && fb > 0) || (fa > 0 && fb < 0)) out.push_back(a + (fa / (fa - fb)) * (b - a));
    }
    poly = std::move(out);
  }
  if (poly.size() < 3) return std::nullopt;
  const double scale = bbox_scale(core);
  if (std::abs(polygon_area(poly)) <= 1e-20 * scale * scale) return std::nullopt;
  std::vector<Vec2> cleaned;
  for (const auto& p : poly)
    if (cleaned.empty() || (p - cleaned.back()).norm() > 1e-12 * scale) cleaned.push_back(p);
  while (cleaned.size() > 1 && (cleaned.front() - cleaned.back()).norm() <= 1e-12 * scale) cleaned.pop_back();
  try {
    return ConvexShape::polygon(std::move(cleaned));
  } catch (const ValidationError&) {
    return std::nullopt;
  }
}

double injectivity_radius(const ConvexShape& s, int n_samples, double tol) {
  if (s.kind() == ShapeKind::point) throw UnsupportedShapeError("injectivity radius of a point");
  if (s.kind() == ShapeKind::polygon) return 0.0;
  std::vector<BoundarySample> samples;
  for (const auto& group : orthogonal_rays(s, n_samples, 16))
    for (const auto& ray : group) samples.push_back({ray.origin, ray.dir});
  const double scale = diameter(s);
  auto fits = [&](double r) {
    for (const auto& smp : samples) {
      const Vec2 c = smp.point - r * smp.normal;
      if (signed_distance(s, c) > -r + 1e-10 * scale) return false;
    }
    return true;
  };
  double lo = 0.0, hi = 0.5 * scale;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (fits(mid)) lo = mid;
    else hi = mid;
  }
  return lo;
}

double flux_distance(double phi) {
  if (!std::isfinite(phi)) throw ValidationError("flux must be finite");
  return std::abs(std::remainder(phi, 1.0));
}

std::vector<Vec2> boundary_polyline(const ConvexShape& s, int n) {
  n = std::max(n, 8);
  const double r = s.radius();
  std::vector<Vec2> out;
  if (!s.polygonal_core()) {
    const Vec2 c = s.core()[0];
    if (r == 0) return {c};
    for (int i = 0; i < n; ++i) {
      const double t = 2 * kPi * i / n;
      out.emplace_back(c + r * Vec2(std::cos(t), std::sin(t)));
    }
    return out;
  }
  const auto& p = s.core();
  if (r == 0) return p;
  const std::size_t m = p.size();
  for (std::size_t i = 0; i < m; ++i) {
    const Vec2 n_prev = outward_normal(p[(i + m - 1) % m], p[i]);
    const Vec2 n_next = outward_normal(p[i], p[(i + 1) % m]);
    const double a0 = std::atan2(n_prev.y(), n_prev.x());
    double sweep = std::atan2(cross(n_prev, n_next), n_prev.dot(n_next));
    const int k = std::max(2, static_cast<int>(std::ceil(n * sweep / (2 * kPi))));
    for (int j = 0; j <= k; ++j) {
      const double a = a0 + sweep * j / k;
      out.emplace_back(p[i] + r * Vec2(std::cos(a), std::sin(a)));
    }
  }
  return out;
}

std::vector<Vec2> convex_hull(std::vector<Vec2> pts) {
  std::sort(pts.begin(), pts.end(), [](const Vec2& a, const Vec2& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  const double scale = bbox_scale(pts);
  std::vector<Vec2> h(2 * pts.size());
  std::size_t k = 0;
  auto turn = [&](const Vec2& o, const Vec2& a, const Vec2& b) {
    const Vec2 e1 = a - o, e2 = b - o;
    return cross(e1, e2) > 1e-13 * scale * std::max(e1.norm(), e2.norm());
  };
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && !turn(h[k - 2], h[k - 1], pts[i])) --k;
    h[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i > 0; --i) {
    while (k >= t && !turn(h[k - 2], h[k - 1], pts[i - 1])) --k;
    h[k++] = pts[i - 1];
  }
  h.resize(k - 1);
  return h;
}

// ---------------------------------------------------------------------------

void PlanarDomain::validate() const {
  if (outer.kind() == ShapeKind::point) throw ValidationError("outer shape cannot be a point");
  if (has_point_holes() && !(pole_radius > 0))
    throw ValidationError("pole_radius must be positive when a hole is a point");
  for (int j = 0; j < n_holes(); ++j) {
    const ConvexShape g = hole_region(j);
    if (!(boundary_gap(g, outer) > 0))
      throw ValidationError("hole " + std::to_string(j) + " is not inside the open outer shape");
    for (int k = j + 1; k < n_holes(); ++k) {
      if (!(shape_distance(g, hole_region(k)) > 0))
        throw ValidationError("holes " + std::to_string(j) + " and " + std::to_string(k) +
                              " are not disjoint");
    }
  }
}

bool PlanarDomain::has_point_holes() const {
  return std::any_of(holes.begin(), holes.end(), [](const auto& h) { return h.kind() == ShapeKind::point; });
}

bool PlanarDomain::all_point_holes() const {
  return !holes.empty() &&
         std::all_of(holes.begin(), holes.end(), [](const auto& h) { return h.kind() == ShapeKind::point; });
}

ConvexShape PlanarDomain::hole_region(int j) const {
  const ConvexShape& h = holes.at(static_cast<std::size_t>(j));
  if (h.kind() == ShapeKind::point) return ConvexShape::disk(h.core()[0], pole_radius);
  return h;
}

bool PlanarDomain::contains(const Vec2& x) const {
  if (!fluxgap::contains(outer, x)) return false;
  for (int j = 0; j < n_holes(); ++j)
    if (signed_distance(hole_region(j), x) <= 0) return false;
  return true;
}

double PlanarDomain::area() const {
  double a = fluxgap::area(outer);
  for (int j = 0; j < n_holes(); ++j) a -= fluxgap::area(hole_region(j));
  return a;
}

PlanarDomain PlanarDomain::transformed(const Transform2& t) const {
  PlanarDomain d;
  d.outer = outer.transformed(t);
  for (const auto& h : holes) d.holes.push_back(h.transformed(t));
  d.pole_radius = pole_radius * t.scale;
  return d;
}

}  // namespace fluxgap
