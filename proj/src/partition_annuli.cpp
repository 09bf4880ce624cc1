#include "fluxgap/errors.hpp"
#include "fluxgap/partition.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace fluxgap {

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

double shape_scale(const ConvexShape& s) { return std::max(1.0, diameter(s)); }

Vec2 unit(double a) { return Vec2(std::cos(a), std::sin(a)); }

double signed_angle(const Vec2& from, const Vec2& to) { return std::atan2(cross(from, to), from.dot(to)); }

// Points where the boundaries of the two shapes of a pair cross, found by
// scanning rays from c and bisecting on the angle where the nearer exit
// changes owner.
std::vector<double> switch_angles(const ConvexPair& s, const Vec2& c, int n, double tol) {
  std::vector<double> out;
  if (!s.b) return out;
  auto diff = [&](double a) {
    const Vec2 u = unit(a);
    return ray_exit(s.a, c, u) - ray_exit(*s.b, c, u);
  };
  auto sgn = [&](double d) { return d > tol ? 1 : (d < -tol ? -1 : 0); };
  double a0 = 0.0;
  double d0 = diff(a0);
  for (int i = 1; i <= n; ++i) {
    const double a1 = kTwoPi * i / n;
    const double d1 = diff(a1);
    if (sgn(d0) * sgn(d1) < 0) {
      double lo = a0, hi = a1, dlo = d0;
      for (int it = 0; it < 100 && hi - lo > 1e-15; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double dm = diff(mid);
        if ((dm > 0) == (dlo > 0)) {
          lo = mid;
          dlo = dm;
        } else {
          hi = mid;
        }
      }
      out.push_back(0.5 * (lo + hi));
    }
    a0 = a1;
    d0 = d1;
  }
  return out;
}

// Corners of the pair: polygon vertices of either shape that lie on the
// boundary of the intersection.
std::vector<Vec2> pair_corners(const ConvexPair& s, double tol) {
  std::vector<Vec2> out;
  auto take = [&](const ConvexShape& x, const ConvexShape* other) {
    if (x.radius() != 0 || !x.polygonal_core()) return;
    for (const auto& v : x.core())
      if (!other || signed_distance(*other, v) <= tol) out.push_back(v);
  };
  take(s.a, s.b ? &*s.b : nullptr);
  if (s.b) take(*s.b, &s.a);
  return out;
}

std::vector<Vec2> sample_loop(const ConvexPair& s, const Vec2& c, int n, double tol) {
  std::vector<double> ang;
  for (int i = 0; i < n; ++i) ang.push_back(kTwoPi * i / n);
  for (double a : switch_angles(s, c, n, tol)) ang.push_back(a);
  for (const auto& v : pair_corners(s, tol)) {
    double a = std::atan2(v.y() - c.y(), v.x() - c.x());
    if (a < 0) a += kTwoPi;
    ang.push_back(a);
  }
  std::sort(ang.begin(), ang.end());
  ang.erase(std::unique(ang.begin(), ang.end(), [](double x, double y) { return y - x < 1e-14; }), ang.end());
  std::vector<Vec2> pts;
  pts.reserve(ang.size());
  for (double a : ang) {
    const Vec2 u = unit(a);
    pts.push_back(c + s.ray_exit(c, u) * u);
  }
  return pts;
}

// Is every point of `inner` within tol of `outer`? Exact for polygons; the
// boundary of rounded shapes is sampled densely.
bool shape_inside(const ConvexShape& inner, const ConvexShape& outer, double tol) {
  const auto pts = (inner.radius() == 0 && inner.polygonal_core()) ? inner.core() : boundary_polyline(inner, 4096);
  for (const auto& p : pts)
    if (signed_distance(outer, p) > tol) return false;
  return true;
}

// Outward normal of shape s at a boundary point p; two normals at a corner.
std::vector<Vec2> normals_at(const ConvexShape& s, const Vec2& p, double tol) {
  if (s.radius() == 0 && s.polygonal_core()) {
    std::vector<Vec2> out;
    const auto& q = s.core();
    for (std::size_t i = 0; i < q.size(); ++i) {
      const Vec2 nrm = outward_normal(q[i], q[(i + 1) % q.size()]);
      if (nrm.dot(p - q[i]) >= -tol) out.push_back(nrm);
    }
    return out;
  }
  if (!s.polygonal_core()) return {(p - s.core()[0]).normalized()};
  const DistanceResult d = distance_to_shape(p, s);
  return {d.gradient};
}

struct RayStats {
  double min = std::numeric_limits<double>::infinity();
  double max = 0.0;
  Segment min_ray, max_ray;
  void add(const Vec2& o, const Vec2& u, double t) {
    if (t < min) {
      min = t;
      min_ray = {o, o + t * u};
    }
    if (t > max) {
      max = t;
      max_ray = {o, o + t * u};
    }
  }
};

void fan(const Vec2& n0, const Vec2& n1, int samples, const std::function<void(const Vec2&)>& f) {
  const double sweep = signed_angle(n0, n1);
  const double a0 = std::atan2(n0.y(), n0.x());
  const int k = std::max(2, samples);
  for (int j = 0; j <= k; ++j) f(unit(a0 + sweep * j / k));
}

}  // namespace

double ConvexPair::signed_distance_bound(const Vec2& x) const {
  const double da = fluxgap::signed_distance(a, x);
  return b ? std::max(da, fluxgap::signed_distance(*b, x)) : da;
}

bool ConvexPair::contains(const Vec2& x) const { return signed_distance_bound(x) < 0; }

bool ConvexPair::contains_closed(const Vec2& x, double tol) const { return signed_distance_bound(x) <= tol; }

double ConvexPair::ray_exit(const Vec2& origin, const Vec2& dir) const {
  const double ta = fluxgap::ray_exit(a, origin, dir);
  return b ? std::min(ta, fluxgap::ray_exit(*b, origin, dir)) : ta;
}

namespace {

// Drops the second shape of a pair when one contains the other, so that
// tangent boundaries do not produce spurious crossings.
// `kept` tells which one survived: 0 = a, 1 = b, 2 = both.
ConvexPair simplify(ConvexShape a, std::optional<ConvexShape> b, double tol, int* kept = nullptr) {
  int k = 2;
  ConvexPair out;
  if (!b || shape_inside(a, *b, tol)) {
    k = 0;
    out = {std::move(a), std::nullopt};
  } else if (shape_inside(*b, a, tol)) {
    k = 1;
    out = {std::move(*b), std::nullopt};
  } else {
    out = {std::move(a), std::move(b)};
  }
  if (kept) *kept = k;
  return out;
}

void piece_widths(AnnulusPiece& piece, const Vec2& c, int ns, int nc, double tol) {
  RayStats st;
  auto shoot = [&](const Vec2& o, const Vec2& u) { st.add(o, u, piece.F.ray_exit(o, u)); };
  auto from_shape = [&](const ConvexShape& s, const ConvexShape* other) {
    for (const auto& grp : orthogonal_rays(s, ns, nc))
      for (const auto& r : grp)
        if (!other || signed_distance(*other, r.origin) <= tol) shoot(r.origin, r.dir);
  };
  const ConvexPair& g = piece.G;
  from_shape(g.a, g.b ? &*g.b : nullptr);
  if (g.b) {
    from_shape(*g.b, &g.a);
    for (double a : switch_angles(g, c, ns, tol)) {
      const Vec2 u = unit(a);
      const Vec2 p = c + g.ray_exit(c, u) * u;
      const auto na = normals_at(g.a, p, tol), nb = normals_at(*g.b, p, tol);
      fan(na.front(), nb.front(), nc, [&](const Vec2& d) { shoot(p, d); });
    }
  }
  piece.width_min = st.min;
  piece.width_max = st.max;
  piece.width_min_ray = st.min_ray;
  piece.width_max_ray = st.max_ray;
}

}  // namespace

AnnuliPartition annuli_partition(const PlanarDomain& domain, const PartitionOptions& opts) {
  domain.validate();
  if (domain.n_holes() != 1) throw ValidationError("annuli partition needs exactly one hole");
  if (domain.holes[0].kind() == ShapeKind::point)
    throw UnsupportedShapeError("annuli partition needs a hole with interior");
  if (opts.boundary_samples < 64) throw ValidationError("boundary_samples must be at least 64");

  const ConvexShape& F = domain.outer;
  const ConvexShape G = domain.hole_region(0);
  const double scale = shape_scale(F);
  const double tol = 1e-12 * scale;

  AnnuliPartition part;
  part.domain = domain;
  // For one hole the minimal width is the gap between the two boundaries:
  // the shortest segment between them is an orthogonal ray.
  double beta = boundary_gap(G, F);
  // A degenerate inner parallel set (an edge shrinking to a point exactly at
  // this level) is moved off by a tiny decrease of beta.
  if (auto ip = inner_parallel(F, beta); ip && ip->radius() == 0 && ip->polygonal_core()) {
    const auto& q = ip->core();
    for (std::size_t i = 0; i < q.size(); ++i)
      if ((q[(i + 1) % q.size()] - q[i]).norm() < 1e-9 * scale) {
        beta -= 1e-9;
        part.nudged = true;
        spdlog::info("annuli partition: beta nudged by -1e-9 off a degenerate parallel level");
        break;
      }
  }
  part.beta = beta;
  WidthOptions wo = opts.widths;
  wo.boundary_samples = opts.boundary_samples;
  wo.cone_samples = opts.cone_samples;
  part.B = widths(domain, wo).B;
  part.n = std::max(1, static_cast<int>(std::ceil(part.B / beta - 1e-12)));
  part.count_exceeds_bound = part.n > 2 * part.B / beta;
  if (part.count_exceeds_bound)
    spdlog::warn("annuli partition: ceil(B/beta) = {} exceeds 2B/beta = {}", part.n, 2 * part.B / beta);

  const Vec2 c = G.interior_point();
  const std::optional<ConvexShape> ip = inner_parallel(F, beta);
  for (int k = 1; k <= part.n; ++k) {
    AnnulusPiece piece;
    piece.k = k;
    piece.beta = beta;
    piece.F = simplify(F, G.dilated(k * beta), tol);
    if (k == 1 || !ip) {
      piece.G = {G, std::nullopt};
      piece.inner = InnerBoundary::hole;
    } else {
      int kept = 2;
      piece.G = simplify(G.dilated((k - 1) * beta), *ip, tol, &kept);
      piece.inner = kept == 0 ? InnerBoundary::offset : kept == 1 ? InnerBoundary::parallel : InnerBoundary::mixed;
    }
    piece.outer_loop = sample_loop(piece.F, c, opts.boundary_samples, tol);
    piece.inner_loop = sample_loop(piece.G, c, opts.boundary_samples, tol);
    piece.outer_perimeter = polyline_length(piece.outer_loop, true);
    piece_widths(piece, c, opts.boundary_samples, opts.cone_samples, 1e-9 * scale);
    part.pieces.push_back(std::move(piece));
  }
  return part;
}

std::string vertex_type_name(VertexType t) {
  switch (t) {
    case VertexType::hole_corner: return "hole-corner";
    case VertexType::parallel_mixed: return "type-1";
    case VertexType::cut_locus: return "type-2";
  }
  return "?";
}

std::vector<WedgeVertex> wedge_report(const AnnulusPiece& piece, const ConvexShape& outer, int cone_samples) {
  const double scale = shape_scale(outer);
  const double tol = 1e-9 * scale;
  const ConvexPair& g = piece.G;
  std::vector<WedgeVertex> out;

  auto finish = [&](WedgeVertex v) {
    v.cone_angle = std::abs(signed_angle(v.normal_lo, v.normal_hi));
    fan(v.normal_lo, v.normal_hi, cone_samples,
        [&](const Vec2& d) { v.B_p = std::max(v.B_p, piece.F.ray_exit(v.p, d)); });
    v.ratio = v.B_p > 0 ? piece.beta / v.B_p : 0.0;
    out.push_back(v);
  };
  auto dump = [&](const Vec2& p, const std::string& why) {
    std::ostringstream os;
    os.precision(17);
    os << "cannot classify inner-boundary vertex of piece " << piece.k << " at (" << p.x() << ", " << p.y()
       << "): " << why << "; sd(G-offset) = " << signed_distance(g.a, p);
    if (g.b) os << ", sd(parallel set) = " << signed_distance(*g.b, p);
    os << ", sd(outer) = " << signed_distance(outer, p);
    throw Error(os.str());
  };

  if (piece.k == 1) {
    // G itself: its corners, if it has any.
    if (g.a.kind() == ShapeKind::polygon)
      for (int i = 0; i < static_cast<int>(g.a.core().size()); ++i) {
        const NormalCone cone = normal_cone(g.a, i);
        WedgeVertex v;
        v.p = cone.vertex;
        v.type = VertexType::hole_corner;
        v.normal_lo = cone.dir_lo;
        v.normal_hi = cone.dir_hi;
        finish(v);
      }
    return out;
  }

  const Vec2 c = g.a.interior_point();
  std::vector<Vec2> seen;
  auto fresh = [&](const Vec2& p) {
    for (const auto& q : seen)
      if ((q - p).norm() < 1e-7 * scale) return false;
    seen.push_back(p);
    return true;
  };

  // Corners of the parallel set of the outer boundary lying on the inner
  // boundary: cut-locus vertices.
  const ConvexShape* offset = nullptr;
  const ConvexShape* parallel = nullptr;
  switch (piece.inner) {
    case InnerBoundary::hole: break;
    case InnerBoundary::offset: offset = &g.a; break;
    case InnerBoundary::parallel: parallel = &g.a; break;
    case InnerBoundary::mixed:
      offset = &g.a;
      parallel = &*g.b;
      break;
  }
  if (parallel && parallel->radius() == 0 && parallel->polygonal_core()) {
    const auto& q = parallel->core();
    const int m = static_cast<int>(q.size());
    for (int i = 0; i < m; ++i) {
      if (piece.inner == InnerBoundary::mixed && signed_distance(*offset, q[static_cast<std::size_t>(i)]) > -tol)
        continue;
      if (!fresh(q[static_cast<std::size_t>(i)])) continue;
      const NormalCone cone = normal_cone(*parallel, i);
      WedgeVertex v;
      v.p = cone.vertex;
      v.type = VertexType::cut_locus;
      v.normal_lo = cone.dir_lo;
      v.normal_hi = cone.dir_hi;
      finish(v);
    }
  }
  if (piece.inner == InnerBoundary::mixed) {
    for (double a : switch_angles(g, c, 4096, 1e-12 * scale)) {
      const Vec2 u = unit(a);
      const Vec2 p = c + g.ray_exit(c, u) * u;
      if (!fresh(p)) continue;
      const auto na = normals_at(g.a, p, tol);
      const auto nb = normals_at(*g.b, p, tol);
      if (na.size() != 1 || nb.size() > 2 || nb.empty()) dump(p, "unexpected number of incident arcs");
      if (!na.front().allFinite() || !nb.front().allFinite()) dump(p, "undefined normal");
      WedgeVertex v;
      v.p = p;
      v.type = VertexType::parallel_mixed;
      v.normal_lo = na.front();
      // At a corner of the parallel set the wedge is bounded by the normal
      // furthest from the offset normal.
      v.normal_hi = nb.front();
      for (const auto& nn : nb)
        if (nn.dot(na.front()) < v.normal_hi.dot(na.front())) v.normal_hi = nn;
      finish(v);
    }
  }
  return out;
}

}  // namespace fluxgap
