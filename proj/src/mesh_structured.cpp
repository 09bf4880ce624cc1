#include "fluxgap/errors.hpp"
#include "fluxgap/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace fluxgap {

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

// Split the quad (v00, v10, v11, v01), counter-clockwise, along the diagonal
// chosen by parity.
void split_quad(std::vector<std::array<int, 3>>& tris, int v00, int v10, int v11, int v01, bool parity) {
  if (parity) {
    tris.push_back({v00, v10, v11});
    tris.push_back({v00, v11, v01});
  } else {
    tris.push_back({v00, v10, v01});
    tris.push_back({v10, v11, v01});
  }
}

// Periodic-in-angle tensor mesh: ring i, spoke j -> i * nt + j. Ring 0 is
// the inner boundary (tag 0), ring nr the outer boundary.
TriMesh ring_mesh(std::vector<Vec2> verts, int nr, int nt, std::string name) {
  TriMesh m;
  m.mesher = std::move(name);
  m.vertices = std::move(verts);
  for (int i = 0; i < nr; ++i)
    for (int j = 0; j < nt; ++j) {
      const int jn = (j + 1) % nt;
      split_quad(m.triangles, i * nt + j, (i + 1) * nt + j, (i + 1) * nt + jn, i * nt + jn, (i + j) % 2 == 0);
    }
  for (const auto& e : free_edges(m)) {
    const int tag = (e[0] < nt && e[1] < nt) ? 0 : kOuterTag;
    m.boundary.push_back({e[0], e[1], tag});
  }
  return m;
}

}  // namespace

TriMesh mesh_polar_annulus(double r1, double r2, int nr, int ntheta, const Vec2& center) {
  if (!(r1 > 0) || !(r2 > r1)) throw ValidationError("polar annulus needs 0 < r1 < r2");
  if (nr < 2) throw ValidationError("polar annulus needs nr >= 2");
  if (ntheta < 8) throw ValidationError("polar annulus needs ntheta >= 8");
  std::vector<Vec2> v;
  v.reserve(static_cast<std::size_t>((nr + 1) * ntheta));
  for (int i = 0; i <= nr; ++i) {
    const double r = r1 + (r2 - r1) * i / nr;
    for (int j = 0; j < ntheta; ++j) {
      const double t = kTwoPi * j / ntheta;
      v.emplace_back(center + r * Vec2(std::cos(t), std::sin(t)));
    }
  }
  return ring_mesh(std::move(v), nr, ntheta, "polar");
}

TriMesh mesh_star_annulus(const PlanarDomain& d, int nr, int ntheta) {
  if (d.n_holes() != 1) throw ValidationError("star annulus mesher needs exactly one hole");
  if (nr < 2 || ntheta < 8) throw ValidationError("star annulus mesher needs nr >= 2 and ntheta >= 8");
  d.validate();
  const ConvexShape hole = d.hole_region(0);
  const Vec2 c = hole.interior_point();

  std::vector<double> corners;
  auto add_corners = [&](const ConvexShape& s) {
    if (s.kind() != ShapeKind::polygon) return;
    for (const auto& p : s.core()) {
      double a = std::atan2(p.y() - c.y(), p.x() - c.x());
      if (a < 0) a += kTwoPi;
      corners.push_back(a);
    }
  };
  add_corners(hole);
  add_corners(d.outer);
  std::sort(corners.begin(), corners.end());

  const double step = kTwoPi / ntheta;
  std::vector<double> ang = corners;
  for (int j = 0; j < ntheta; ++j) {
    const double a = step * j;
    bool near = false;
    for (double cn : corners) {
      double diff = std::abs(a - cn);
      diff = std::min(diff, kTwoPi - diff);
      if (diff < 0.3 * step) near = true;
    }
    if (!near) ang.push_back(a);
  }
  std::sort(ang.begin(), ang.end());
  ang.erase(std::unique(ang.begin(), ang.end(), [](double x, double y) { return y - x < 1e-12; }), ang.end());
  const int nt = static_cast<int>(ang.size());

  std::vector<Vec2> v(static_cast<std::size_t>((nr + 1) * nt));
  for (int j = 0; j < nt; ++j) {
    const Vec2 u(std::cos(ang[static_cast<std::size_t>(j)]), std::sin(ang[static_cast<std::size_t>(j)]));
    const double rin = ray_exit(hole, c, u);
    const double rout = ray_exit(d.outer, c, u);
    for (int i = 0; i <= nr; ++i) {
      const double s = static_cast<double>(i) / nr;
      v[static_cast<std::size_t>(i * nt + j)] = c + ((1 - s) * rin + s * rout) * u;
    }
  }
  return ring_mesh(std::move(v), nr, nt, "star");
}

std::vector<double> graded_lines(std::vector<double> breaks, double h, int min_layers, double grading) {
  if (!(h > 0)) throw ValidationError("target h must be positive");
  min_layers = std::max(min_layers, 1);
  grading = std::max(grading, 1.01);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  const std::size_t nb = breaks.size();
  if (nb < 2) throw ValidationError("graded grid needs at least two breakpoints");

  // Local spacing requested at each breakpoint.
  std::vector<double> sigma(nb, h);
  for (std::size_t k = 0; k + 1 < nb; ++k) {
    const double len = breaks[k + 1] - breaks[k];
    const double s = std::min(h, len / min_layers);
    sigma[k] = std::min(sigma[k], s);
    sigma[k + 1] = std::min(sigma[k + 1], s);
  }
  // Spacing may grow at most linearly with distance (geometric grading).
  const double slope = grading - 1.0;
  auto spacing = [&](double x) {
    double s = h;
    for (std::size_t k = 0; k < nb; ++k) s = std::min(s, sigma[k] + slope * std::abs(x - breaks[k]));
    return s;
  };

  std::vector<double> out{breaks[0]};
  for (std::size_t k = 0; k + 1 < nb; ++k) {
    const double a = breaks[k], b = breaks[k + 1];
    constexpr int kQuad = 2000;
    std::vector<double> cum(kQuad + 1, 0.0);
    for (int q = 0; q < kQuad; ++q) {
      const double x0 = a + (b - a) * q / kQuad, x1 = a + (b - a) * (q + 1) / kQuad;
      cum[static_cast<std::size_t>(q + 1)] =
          cum[static_cast<std::size_t>(q)] + (x1 - x0) / spacing(0.5 * (x0 + x1));
    }
    const int n = std::max(1, static_cast<int>(std::ceil(cum.back() - 1e-9)));
    for (int i = 1; i < n; ++i) {
      const double target = cum.back() * i / n;
      const auto it = std::lower_bound(cum.begin(), cum.end(), target);
      const auto q = static_cast<int>(it - cum.begin());
      const double c0 = cum[static_cast<std::size_t>(q - 1)], c1 = cum[static_cast<std::size_t>(q)];
      const double frac = (target - c0) / (c1 - c0);
      out.push_back(a + (b - a) * (q - 1 + frac) / kQuad);
    }
    out.push_back(b);
  }
  return out;
}

TriMesh mesh_rect_diff(const Rect& o, const Rect& in, double h, const RectDiffOptions& opts) {
  if (!(o.x1 > o.x0) || !(o.y1 > o.y0) || !(in.x1 > in.x0) || !(in.y1 > in.y0))
    throw ValidationError("rectangles must have positive size");
  const double gap = std::min({in.x0 - o.x0, o.x1 - in.x1, in.y0 - o.y0, o.y1 - in.y1});
  if (!(gap > 0)) throw ValidationError("inner rectangle must lie strictly inside the outer rectangle");

  std::vector<double> bx{o.x0, o.x1, in.x0, in.x1}, by{o.y0, o.y1, in.y0, in.y1};
  for (double x : opts.extra_x)
    if (x > o.x0 && x < o.x1) bx.push_back(x);
  for (double y : opts.extra_y)
    if (y > o.y0 && y < o.y1) by.push_back(y);
  const auto xs = graded_lines(bx, h, opts.min_layers, opts.grading);
  const auto ys = graded_lines(by, h, opts.min_layers, opts.grading);
  const int nx = static_cast<int>(xs.size()), ny = static_cast<int>(ys.size());

  std::vector<int> id(static_cast<std::size_t>(nx * ny), -1);
  TriMesh m;
  m.mesher = "rect_diff";
  auto node = [&](int i, int j) {
    int& k = id[static_cast<std::size_t>(j * nx + i)];
    if (k < 0) {
      k = static_cast<int>(m.vertices.size());
      m.vertices.emplace_back(xs[static_cast<std::size_t>(i)], ys[static_cast<std::size_t>(j)]);
    }
    return k;
  };
  for (int j = 0; j + 1 < ny; ++j)
    for (int i = 0; i + 1 < nx; ++i) {
      const double cx = 0.5 * (xs[static_cast<std::size_t>(i)] + xs[static_cast<std::size_t>(i + 1)]);
      const double cy = 0.5 * (ys[static_cast<std::size_t>(j)] + ys[static_cast<std::size_t>(j + 1)]);
      if (cx > in.x0 && cx < in.x1 && cy > in.y0 && cy < in.y1) continue;
      split_quad(m.triangles, node(i, j), node(i + 1, j), node(i + 1, j + 1), node(i, j + 1), (i + j) % 2 == 0);
    }
  for (const auto& e : free_edges(m)) {
    const Vec2 mid = 0.5 * (m.vertices[static_cast<std::size_t>(e[0])] + m.vertices[static_cast<std::size_t>(e[1])]);
    const bool on_outer = mid.x() == o.x0 || mid.x() == o.x1 || mid.y() == o.y0 || mid.y() == o.y1;
    m.boundary.push_back({e[0], e[1], on_outer ? kOuterTag : 0});
  }
  return m;
}

}  // namespace fluxgap
