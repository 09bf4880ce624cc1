#include "fluxgap/potential.hpp"

#include "fluxgap/errors.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <set>
#include <stack>
#include <queue>

namespace fluxgap {

namespace {

constexpr double kSingular = 1e-12;

// Signed angle subtended at p by the segment a -> b, in (-pi, pi).
double subtended(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 u = a - p, v = b - p;
  return std::atan2(cross(u, v), u.dot(v));
}

}  // namespace

void ClosedPotential::validate() const {
  for (const auto& p : poles) {
    if (!p.at.allFinite()) throw ValidationError("pole position is not finite");
    if (!std::isfinite(p.flux)) throw ValidationError("pole flux is not finite");
  }
}

void ClosedPotential::validate_against(const PlanarDomain& d) const {
  validate();
  for (std::size_t k = 0; k < poles.size(); ++k) {
    bool ok = false;
    for (int j = 0; j < d.n_holes(); ++j) {
      const ConvexShape& h = d.holes[static_cast<std::size_t>(j)];
      if (h.kind() == ShapeKind::point) {
        if ((h.core()[0] - poles[k].at).norm() <= kSingular) ok = true;
      } else if (contains(h, poles[k].at)) {
        ok = true;
      }
    }
    if (!ok) throw ValidationError("pole " + std::to_string(k) + " is not inside a hole of the domain");
  }
}

Vec2 eval(const ClosedPotential& A, const Vec2& x) {
  Vec2 out = Vec2::Zero();
  for (const auto& p : A.poles) {
    const Vec2 d = x - p.at;
    const double r2 = d.squaredNorm();
    if (std::sqrt(r2) <= kSingular) throw SingularityError("potential evaluated at a pole");
    out += p.flux * Vec2(-d.y(), d.x()) / r2;
  }
  if (A.exact_grad) out += A.exact_grad(x);
  return out;
}

double line_integral(const ClosedPotential& A, const Vec2& a, const Vec2& b) {
  double s = 0.0;
  for (const auto& p : A.poles) {
    if (point_segment_distance(p.at, a, b) <= kSingular) throw SingularityError("segment passes through a pole");
    s += p.flux * subtended(p.at, a, b);
  }
  if (A.exact_f) s += A.exact_f(b) - A.exact_f(a);
  return s;
}

double flux_around(const ClosedPotential& A, std::span<const Vec2> loop) {
  if (loop.size() < 2) return 0.0;
  double total = 0.0;
  for (const auto& p : A.poles) {
    double w = 0.0;
    for (std::size_t i = 0; i < loop.size(); ++i) {
      const Vec2& a = loop[i];
      const Vec2& b = loop[(i + 1) % loop.size()];
      if (point_segment_distance(p.at, a, b) <= kSingular) throw SingularityError("loop passes through a pole");
      w += subtended(p.at, a, b);
    }
    // The winding number is an integer; rounding removes accumulated error.
    total += p.flux * std::round(w / (2 * std::numbers::pi));
  }
  return total;
}

std::vector<double> hole_fluxes(const ClosedPotential& A, const PlanarDomain& d) {
  A.validate_against(d);
  std::vector<double> flux(static_cast<std::size_t>(d.n_holes()), 0.0);
  for (const auto& p : A.poles)
    for (int j = 0; j < d.n_holes(); ++j) {
      const ConvexShape& h = d.holes[static_cast<std::size_t>(j)];
      const bool inside = h.kind() == ShapeKind::point ? (h.core()[0] - p.at).norm() <= kSingular : contains(h, p.at);
      if (inside) {
        flux[static_cast<std::size_t>(j)] += p.flux;
        break;
      }
    }
  return flux;
}

std::vector<double> gauge_scalar(const ClosedPotential& A, const TriMesh& mesh, const std::vector<int>& region,
                                 int root, TreeOrder order) {
  std::vector<double> f(mesh.vertices.size(), std::numeric_limits<double>::quiet_NaN());
  if (region.empty()) return f;

  std::vector<std::vector<int>> adj(mesh.vertices.size());
  std::set<std::pair<int, int>> edges;
  std::set<int> verts;
  for (int ti : region) {
    const auto& t = mesh.triangles.at(static_cast<std::size_t>(ti));
    for (int k = 0; k < 3; ++k) {
      const int a = t[static_cast<std::size_t>(k)], b = t[static_cast<std::size_t>((k + 1) % 3)];
      verts.insert(a);
      if (edges.insert({std::min(a, b), std::max(a, b)}).second) {
        adj[static_cast<std::size_t>(a)].push_back(b);
        adj[static_cast<std::size_t>(b)].push_back(a);
      }
    }
    // A pole in the closed triangle makes the region non-simply connected for A.
    const Vec2& p0 = mesh.vertices[static_cast<std::size_t>(t[0])];
    const Vec2& p1 = mesh.vertices[static_cast<std::size_t>(t[1])];
    const Vec2& p2 = mesh.vertices[static_cast<std::size_t>(t[2])];
    for (const auto& p : A.poles) {
      if (cross(p1 - p0, p.at - p0) >= 0 && cross(p2 - p1, p.at - p1) >= 0 && cross(p0 - p2, p.at - p2) >= 0)
        throw SingularityError("a pole lies inside the gauge region");
    }
  }
  const long chi = static_cast<long>(verts.size()) - static_cast<long>(edges.size()) + static_cast<long>(region.size());
  if (chi != 1) throw TopologyError("gauge region is not simply connected (Euler characteristic " +
                                    std::to_string(chi) + ")");

  if (root < 0) root = *verts.begin();
  if (!verts.count(root)) throw ValidationError("gauge root is not a vertex of the region");
  f[static_cast<std::size_t>(root)] = 0.0;
  std::size_t reached = 1;
  auto visit = [&](int u, int v) {
    if (!std::isnan(f[static_cast<std::size_t>(v)])) return false;
    f[static_cast<std::size_t>(v)] = f[static_cast<std::size_t>(u)] +
                                     line_integral(A, mesh.vertices[static_cast<std::size_t>(u)],
                                                   mesh.vertices[static_cast<std::size_t>(v)]);
    ++reached;
    return true;
  };
  if (order == TreeOrder::breadth_first) {
    std::queue<int> q;
    q.push(root);
    while (!q.empty()) {
      const int u = q.front();
      q.pop();
      for (int v : adj[static_cast<std::size_t>(u)])
        if (visit(u, v)) q.push(v);
    }
  } else {
    std::stack<int> st;
    st.push(root);
    while (!st.empty()) {
      const int u = st.top();
      st.pop();
      const auto& nb = adj[static_cast<std::size_t>(u)];
      for (auto it = nb.rbegin(); it != nb.rend(); ++it)
        if (visit(u, *it)) st.push(*it);
    }
  }
  if (reached != verts.size()) throw TopologyError("gauge region is not connected");
  return f;
}

}  // namespace fluxgap
