#include "fluxgap/errors.hpp"
#include "fluxgap/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>

namespace fluxgap {

namespace {

struct Grid {
  double x0 = 0, y0 = 0, hx = 1, hy = 1;
  int nx = 0, ny = 0;  // cells
  Vec2 node(int i, int j) const { return {x0 + hx * i, y0 + hy * j}; }
};

Grid make_grid(const ConvexShape& outer, double h) {
  Vec2 lo = outer.core()[0], hi = lo;
  for (const auto& p : outer.core()) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  lo.array() -= outer.radius();
  hi.array() += outer.radius();
  Grid g;
  g.x0 = lo.x();
  g.y0 = lo.y();
  g.nx = std::max(1, static_cast<int>(std::ceil((hi.x() - lo.x()) / h - 1e-9)));
  g.ny = std::max(1, static_cast<int>(std::ceil((hi.y() - lo.y()) / h - 1e-9)));
  g.hx = (hi.x() - lo.x()) / g.nx;
  g.hy = (hi.y() - lo.y()) / g.ny;
  return g;
}

enum Cell : char { kOut = 0, kIn = 1, kBlock = 2 };

struct CellSet {
  const Grid& g;
  std::vector<char> state;
  explicit CellSet(const Grid& grid) : g(grid), state(static_cast<std::size_t>(grid.nx * grid.ny), kOut) {}
  char& at(int i, int j) { return state[static_cast<std::size_t>(j * g.nx + i)]; }
  char get(int i, int j) const {
    if (i < 0 || j < 0 || i >= g.nx || j >= g.ny) return kOut;
    return state[static_cast<std::size_t>(j * g.nx + i)];
  }
};

bool cell_inside_outer(const Grid& g, const ConvexShape& outer, int i, int j) {
  const double tol = 1e-12 * std::max(g.hx, g.hy);
  for (int di = 0; di <= 1; ++di)
    for (int dj = 0; dj <= 1; ++dj)
      if (signed_distance(outer, g.node(i + di, j + dj)) > tol) return false;
  return true;
}

ConvexShape cell_shape(const Grid& g, int i, int j) {
  return ConvexShape::polygon({g.node(i, j), g.node(i + 1, j), g.node(i + 1, j + 1), g.node(i, j + 1)});
}

// Removes cells meeting the rest only at a corner (non-manifold vertices),
// then keeps the largest edge-connected component.
void clean_cells(CellSet& cs) {
  const Grid& g = cs.g;
  bool changed = true;
  while (changed) {
    changed = false;
    for (int j = 0; j <= g.ny; ++j)
      for (int i = 0; i <= g.nx; ++i) {
        const bool a = cs.get(i - 1, j - 1) != kOut, b = cs.get(i, j - 1) != kOut;
        const bool c = cs.get(i - 1, j) != kOut, d = cs.get(i, j) != kOut;
        std::pair<int, int> victim{-1, -1};
        if (a && d && !b && !c) victim = cs.get(i - 1, j - 1) == kBlock ? std::pair{i, j} : std::pair{i - 1, j - 1};
        else if (b && c && !a && !d) victim = cs.get(i, j - 1) == kBlock ? std::pair{i - 1, j} : std::pair{i, j - 1};
        if (victim.first >= 0) {
          if (cs.get(victim.first, victim.second) == kBlock)
            throw ResolutionError("polar patches touch diagonally; decrease h");
          cs.at(victim.first, victim.second) = kOut;
          changed = true;
        }
      }
  }
  std::vector<int> comp(cs.state.size(), -1);
  int best = -1, best_size = 0, ncomp = 0;
  for (int s = 0; s < static_cast<int>(cs.state.size()); ++s) {
    if (cs.state[static_cast<std::size_t>(s)] == kOut || comp[static_cast<std::size_t>(s)] >= 0) continue;
    int size = 0;
    std::queue<int> q;
    q.push(s);
    comp[static_cast<std::size_t>(s)] = ncomp;
    while (!q.empty()) {
      const int c = q.front();
      q.pop();
      ++size;
      const int ci = c % g.nx, cj = c / g.nx;
      const int nb[4][2] = {{ci - 1, cj}, {ci + 1, cj}, {ci, cj - 1}, {ci, cj + 1}};
      for (const auto& n : nb) {
        if (cs.get(n[0], n[1]) == kOut) continue;
        const int k = n[1] * g.nx + n[0];
        if (comp[static_cast<std::size_t>(k)] < 0) {
          comp[static_cast<std::size_t>(k)] = ncomp;
          q.push(k);
        }
      }
    }
    if (size > best_size) {
      best_size = size;
      best = ncomp;
    }
    ++ncomp;
  }
  for (std::size_t s = 0; s < cs.state.size(); ++s)
    if (comp[s] != best) {
      if (cs.state[s] == kBlock) throw ResolutionError("a polar patch is disconnected from the mesh");
      cs.state[s] = kOut;
    }
}

class NodeMap {
 public:
  NodeMap(const Grid& g, TriMesh& m) : g_(g), m_(m), id_(static_cast<std::size_t>((g.nx + 1) * (g.ny + 1)), -1) {}
  int operator()(int i, int j) {
    int& k = id_[static_cast<std::size_t>(j * (g_.nx + 1) + i)];
    if (k < 0) {
      k = static_cast<int>(m_.vertices.size());
      m_.vertices.push_back(g_.node(i, j));
    }
    return k;
  }

 private:
  const Grid& g_;
  TriMesh& m_;
  std::vector<int> id_;
};

void add_cell(TriMesh& m, NodeMap& node, int i, int j) {
  const int v00 = node(i, j), v10 = node(i + 1, j), v11 = node(i + 1, j + 1), v01 = node(i, j + 1);
  if ((i + j) % 2 == 0) {
    m.triangles.push_back({v00, v10, v11});
    m.triangles.push_back({v00, v11, v01});
  } else {
    m.triangles.push_back({v00, v10, v01});
    m.triangles.push_back({v10, v11, v01});
  }
}

void check_topology(const TriMesh& m, const PlanarDomain& d) {
  if (m.triangles.empty()) throw ResolutionError("mesh is empty; decrease h");
  const int chi = m.euler_characteristic();
  if (chi != 1 - d.n_holes())
    throw ResolutionError("mesh has Euler characteristic " + std::to_string(chi) + ", expected " +
                          std::to_string(1 - d.n_holes()) + "; a hole is not resolved");
}

}  // namespace

TriMesh mesh_staircase(const PlanarDomain& d, double h) {
  d.validate();
  if (!(h > 0)) throw ValidationError("h must be positive");
  const double bt = beta_tilde(d);
  if (d.n_holes() > 0 && !(h < bt / 4))
    throw ResolutionError("staircase mesh needs h < beta_tilde/4 = " + std::to_string(bt / 4));
  if (d.has_point_holes() && h > d.pole_radius)
    throw ResolutionError("staircase mesh needs h <= pole_radius to resolve the poles");

  const Grid g = make_grid(d.outer, h);
  std::vector<ConvexShape> regions;
  for (int j = 0; j < d.n_holes(); ++j) regions.push_back(d.hole_region(j));
  CellSet cs(g);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      if (!cell_inside_outer(g, d.outer, i, j)) continue;
      const ConvexShape cell = cell_shape(g, i, j);
      bool clear = true;
      for (const auto& r : regions)
        if (!(shape_distance(cell, r) > 0)) clear = false;
      if (clear) cs.at(i, j) = kIn;
    }
  clean_cells(cs);

  TriMesh m;
  m.mesher = "staircase";
  NodeMap node(g, m);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      if (cs.get(i, j) == kIn) add_cell(m, node, i, j);
  check_topology(m, d);
  tag_boundary(m, d);
  return m;
}

TriMesh mesh_block(const PlanarDomain& d, double h, const BlockOptions& opts) {
  d.validate();
  if (!(h > 0)) throw ValidationError("h must be positive");
  const Grid g = make_grid(d.outer, h);
  const double hmin = std::min(g.hx, g.hy), hmax = std::max(g.hx, g.hy);

  CellSet cs(g);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      if (cell_inside_outer(g, d.outer, i, j)) cs.at(i, j) = kIn;

  struct Patch {
    Vec2 c;
    double rho;
    int ic, jc, b;
  };
  std::vector<Patch> patches;
  for (int k = 0; k < d.n_holes(); ++k) {
    const ConvexShape hole = d.hole_region(k);
    if (hole.polygonal_core()) throw UnsupportedShapeError("block mesher supports disk and point holes only");
    Patch p;
    p.c = hole.core()[0];
    p.rho = hole.radius();
    p.ic = static_cast<int>(std::lround((p.c.x() - g.x0) / g.hx));
    p.jc = static_cast<int>(std::lround((p.c.y() - g.y0) / g.hy));
    p.b = opts.block_cells > 0 ? opts.block_cells
                               : std::max(4, static_cast<int>(std::ceil((p.rho + 2.5 * hmax) / hmin)));
    const double clearance = std::min({p.c.x() - g.node(p.ic - p.b, 0).x(), g.node(p.ic + p.b, 0).x() - p.c.x(),
                                       p.c.y() - g.node(0, p.jc - p.b).y(), g.node(0, p.jc + p.b).y() - p.c.y()});
    if (!(clearance > p.rho + 0.5 * hmin))
      throw ResolutionError("polar patch of hole " + std::to_string(k) + " does not enclose the hole");
    for (int j = p.jc - p.b; j < p.jc + p.b; ++j)
      for (int i = p.ic - p.b; i < p.ic + p.b; ++i) {
        if (cs.get(i, j) == kOut)
          throw ResolutionError("polar patch of hole " + std::to_string(k) + " leaves the domain; decrease h");
        if (cs.get(i, j) == kBlock) throw ResolutionError("polar patches overlap; decrease h");
        cs.at(i, j) = kBlock;
      }
    patches.push_back(p);
  }
  clean_cells(cs);

  TriMesh m;
  m.mesher = "block";
  NodeMap node(g, m);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      if (cs.get(i, j) == kIn) add_cell(m, node, i, j);

  for (const auto& p : patches) {
    std::vector<std::pair<int, int>> perim;
    const int i0 = p.ic - p.b, i1 = p.ic + p.b, j0 = p.jc - p.b, j1 = p.jc + p.b;
    for (int i = i0; i < i1; ++i) perim.emplace_back(i, j0);
    for (int j = j0; j < j1; ++j) perim.emplace_back(i1, j);
    for (int i = i1; i > i0; --i) perim.emplace_back(i, j1);
    for (int j = j1; j > j0; --j) perim.emplace_back(i0, j);
    const int ns = static_cast<int>(perim.size());

    double lmax = 0;
    for (const auto& [i, j] : perim) lmax = std::max(lmax, (g.node(i, j) - p.c).norm());
    const double ratio = 1.0 + 2 * std::numbers::pi / ns;
    const int rings = std::max({opts.rings, 8, static_cast<int>(std::ceil(std::log(lmax / p.rho) / std::log(ratio)))});

    // ids[m * ns + s]: ring m (0 = hole boundary, rings = block perimeter).
    std::vector<int> ids(static_cast<std::size_t>((rings + 1) * ns));
    for (int s = 0; s < ns; ++s) {
      const Vec2 q = g.node(perim[static_cast<std::size_t>(s)].first, perim[static_cast<std::size_t>(s)].second);
      const double l = (q - p.c).norm();
      const Vec2 u = (q - p.c) / l;
      for (int r = 0; r < rings; ++r) {
        const double rad = p.rho * std::pow(l / p.rho, static_cast<double>(r) / rings);
        ids[static_cast<std::size_t>(r * ns + s)] = static_cast<int>(m.vertices.size());
        m.vertices.push_back(p.c + rad * u);
      }
      ids[static_cast<std::size_t>(rings * ns + s)] =
          node(perim[static_cast<std::size_t>(s)].first, perim[static_cast<std::size_t>(s)].second);
    }
    for (int r = 0; r < rings; ++r)
      for (int s = 0; s < ns; ++s) {
        const int sn = (s + 1) % ns;
        const int v00 = ids[static_cast<std::size_t>(r * ns + s)], v10 = ids[static_cast<std::size_t>((r + 1) * ns + s)];
        const int v11 = ids[static_cast<std::size_t>((r + 1) * ns + sn)], v01 = ids[static_cast<std::size_t>(r * ns + sn)];
        if ((r + s) % 2 == 0) {
          m.triangles.push_back({v00, v10, v11});
          m.triangles.push_back({v00, v11, v01});
        } else {
          m.triangles.push_back({v00, v10, v01});
          m.triangles.push_back({v10, v11, v01});
        }
      }
  }
  check_topology(m, d);
  tag_boundary(m, d);
  return m;
}

}  // namespace fluxgap
