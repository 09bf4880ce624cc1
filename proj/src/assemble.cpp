#include "fluxgap/errors.hpp"
#include "fluxgap/solver.hpp"

#include <spdlog/spdlog.h>

#include <cmath>
#include <cstdint>
#include <unordered_map>

namespace fluxgap {

namespace {

struct P1Element {
  double area;
  Vec2 grad[3];
};

P1Element p1_element(const Vec2& a, const Vec2& b, const Vec2& c) {
  P1Element e;
  e.area = triangle_area(a, b, c);
  const double two_a = 2 * e.area;
  // grad phi_i = perp(opposite edge) / (2 area), pointing toward vertex i.
  e.grad[0] = Vec2(b.y() - c.y(), c.x() - b.x()) / two_a;
  e.grad[1] = Vec2(c.y() - a.y(), a.x() - c.x()) / two_a;
  e.grad[2] = Vec2(a.y() - b.y(), b.x() - a.x()) / two_a;
  return e;
}

bool in_closed_triangle(const Vec2& p, const Vec2& a, const Vec2& b, const Vec2& c) {
  return cross(b - a, p - a) >= 0 && cross(c - b, p - b) >= 0 && cross(a - c, p - c) >= 0;
}

void check_poles(const SpectralProblem& pb) {
  const TriMesh& m = *pb.mesh;
  const double h = m.h();
  for (const auto& pole : pb.potential.poles) {
    double dmin = std::numeric_limits<double>::infinity();
    for (const auto& t : m.triangles) {
      const Vec2& a = m.vertices[static_cast<std::size_t>(t[0])];
      const Vec2& b = m.vertices[static_cast<std::size_t>(t[1])];
      const Vec2& c = m.vertices[static_cast<std::size_t>(t[2])];
      if (in_closed_triangle(pole.at, a, b, c)) throw SingularityError("a pole lies inside the meshed region");
      dmin = std::min({dmin, point_segment_distance(pole.at, a, b), point_segment_distance(pole.at, b, c),
                       point_segment_distance(pole.at, c, a)});
    }
    if (dmin < 2 * h)
      spdlog::warn("pole at ({}, {}) is {:.3g} from the mesh, closer than 2h = {:.3g}", pole.at.x(), pole.at.y(), dmin,
                   2 * h);
  }
}

}  // namespace

Pencil assemble(const SpectralProblem& pb) {
  if (!pb.mesh) throw ValidationError("spectral problem has no mesh");
  const TriMesh& m = *pb.mesh;
  pb.potential.validate();
  check_poles(pb);

  const int n = m.n_vertices();
  std::vector<Eigen::Triplet<cplx>> tk, tm;
  tk.reserve(m.triangles.size() * 9);
  tm.reserve(m.triangles.size() * 9);

  // Link phases theta_vw = integral of A from v to w, cached per edge.
  std::unordered_map<std::uint64_t, double> phase;
  auto link = [&](int v, int w) {
    const int lo = std::min(v, w), hi = std::max(v, w);
    const auto key = (static_cast<std::uint64_t>(lo) << 32) | static_cast<std::uint64_t>(hi);
    auto it = phase.find(key);
    if (it == phase.end())
      it = phase.emplace(key, line_integral(pb.potential, m.vertices[static_cast<std::size_t>(lo)],
                                            m.vertices[static_cast<std::size_t>(hi)]))
               .first;
    return v == lo ? it->second : -it->second;
  };

  for (const auto& t : m.triangles) {
    const Vec2& a = m.vertices[static_cast<std::size_t>(t[0])];
    const Vec2& b = m.vertices[static_cast<std::size_t>(t[1])];
    const Vec2& c = m.vertices[static_cast<std::size_t>(t[2])];
    const P1Element e = p1_element(a, b, c);

    if (pb.scheme == Discretization::peierls) {
      for (int w = 0; w < 3; ++w)
        for (int v = 0; v < 3; ++v) {
          const double k0 = e.area * e.grad[v].dot(e.grad[w]);
          const double m0 = e.area / 12.0 * (v == w ? 2.0 : 1.0);
          cplx ph(1.0, 0.0);
          if (v != w) ph = std::polar(1.0, link(t[static_cast<std::size_t>(v)], t[static_cast<std::size_t>(w)]));
          tk.emplace_back(t[static_cast<std::size_t>(w)], t[static_cast<std::size_t>(v)], k0 * ph);
          tm.emplace_back(t[static_cast<std::size_t>(w)], t[static_cast<std::size_t>(v)], m0 * ph);
        }
      continue;
    }

    // Midpoint rule for the A-dependent terms.
    const Vec2 mids[3] = {0.5 * (a + b), 0.5 * (b + c), 0.5 * (c + a)};
    // phi_i at midpoint q: 1/2 if vertex i is an endpoint of edge q.
    const double phi[3][3] = {{0.5, 0.5, 0.0}, {0.0, 0.5, 0.5}, {0.5, 0.0, 0.5}};
    Vec2 Aq[3];
    for (int q = 0; q < 3; ++q) Aq[q] = eval(pb.potential, mids[q]);
    const double wq = e.area / 3.0;
    for (int w = 0; w < 3; ++w)
      for (int v = 0; v < 3; ++v) {
        double re = e.area * e.grad[v].dot(e.grad[w]);
        double im = 0.0;
        for (int q = 0; q < 3; ++q) {
          re += wq * Aq[q].squaredNorm() * phi[q][v] * phi[q][w];
          im += wq * (phi[q][w] * Aq[q].dot(e.grad[v]) - phi[q][v] * Aq[q].dot(e.grad[w]));
        }
        tk.emplace_back(t[static_cast<std::size_t>(w)], t[static_cast<std::size_t>(v)], cplx(re, im));
        tm.emplace_back(t[static_cast<std::size_t>(w)], t[static_cast<std::size_t>(v)],
                        cplx(e.area / 12.0 * (v == w ? 2.0 : 1.0), 0.0));
      }
  }

  Pencil p;
  p.K.resize(n, n);
  p.M.resize(n, n);
  p.K.setFromTriplets(tk.begin(), tk.end());
  p.M.setFromTriplets(tm.begin(), tm.end());
  p.K.makeCompressed();
  p.M.makeCompressed();
  return p;
}

}  // namespace fluxgap
