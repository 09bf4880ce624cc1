#include "fluxgap/mesh.hpp"

#include "fluxgap/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <unordered_map>

namespace fluxgap {

namespace {

std::uint64_t edge_key(int a, int b) {
  const auto lo = static_cast<std::uint64_t>(std::min(a, b));
  const auto hi = static_cast<std::uint64_t>(std::max(a, b));
  return (lo << 32) | hi;
}

struct EdgeInfo {
  int count = 0;
  int a = 0, b = 0;  // orientation in the first triangle that uses it
  int second_a = 0;
};

std::unordered_map<std::uint64_t, EdgeInfo> edge_table(const TriMesh& m) {
  std::unordered_map<std::uint64_t, EdgeInfo> t;
  t.reserve(m.triangles.size() * 2);
  for (const auto& tri : m.triangles) {
    for (int e = 0; e < 3; ++e) {
      const int a = tri[static_cast<std::size_t>(e)], b = tri[static_cast<std::size_t>((e + 1) % 3)];
      auto& info = t[edge_key(a, b)];
      if (info.count == 0) {
        info.a = a;
        info.b = b;
      } else {
        info.second_a = a;
      }
      ++info.count;
    }
  }
  return t;
}

}  // namespace

double triangle_area(const Vec2& a, const Vec2& b, const Vec2& c) { return 0.5 * cross(b - a, c - a); }

double TriMesh::h() const {
  double h = 0;
  for (const auto& t : triangles)
    for (int e = 0; e < 3; ++e)
      h = std::max(h, (vertices[static_cast<std::size_t>(t[static_cast<std::size_t>(e)])] -
                       vertices[static_cast<std::size_t>(t[static_cast<std::size_t>((e + 1) % 3)])])
                          .norm());
  return h;
}

double TriMesh::area() const {
  double a = 0;
  for (const auto& t : triangles)
    a += triangle_area(vertices[static_cast<std::size_t>(t[0])], vertices[static_cast<std::size_t>(t[1])],
                       vertices[static_cast<std::size_t>(t[2])]);
  return a;
}

int TriMesh::n_edges() const { return static_cast<int>(edge_table(*this).size()); }

int TriMesh::euler_characteristic() const { return n_vertices() - n_edges() + n_triangles(); }

std::vector<std::array<int, 2>> free_edges(const TriMesh& m) {
  const auto table = edge_table(m);
  std::vector<std::array<int, 2>> out;
  for (const auto& t : m.triangles)
    for (int e = 0; e < 3; ++e) {
      const int a = t[static_cast<std::size_t>(e)], b = t[static_cast<std::size_t>((e + 1) % 3)];
      if (table.at(edge_key(a, b)).count == 1) out.push_back({a, b});
    }
  return out;
}

void TriMesh::validate() const {
  const int nv = n_vertices();
  for (const auto& v : vertices)
    if (!v.allFinite()) throw ValidationError("mesh vertex is not finite");
  for (std::size_t i = 0; i < triangles.size(); ++i) {
    const auto& t = triangles[i];
    for (int k : t)
      if (k < 0 || k >= nv) throw ValidationError("triangle " + std::to_string(i) + " has a bad vertex index");
    if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2])
      throw ValidationError("triangle " + std::to_string(i) + " repeats a vertex");
    const double a = triangle_area(vertices[static_cast<std::size_t>(t[0])], vertices[static_cast<std::size_t>(t[1])],
                                   vertices[static_cast<std::size_t>(t[2])]);
    if (!(a > 0)) throw ValidationError("inverted triangle " + std::to_string(i));
  }
  const auto table = edge_table(*this);
  for (const auto& [key, info] : table) {
    if (info.count > 2) throw ValidationError("non-conforming mesh: edge shared by more than two triangles");
    if (info.count == 2 && info.second_a != info.b)
      throw ValidationError("non-conforming mesh: inconsistent triangle orientation");
  }
  std::unordered_map<std::uint64_t, int> tagged;
  for (const auto& e : boundary) {
    const auto it = table.find(edge_key(e.a, e.b));
    if (it == table.end() || it->second.count != 1)
      throw ValidationError("boundary edge " + std::to_string(e.a) + "-" + std::to_string(e.b) +
                            " is not a free edge of the mesh");
    if (++tagged[edge_key(e.a, e.b)] > 1) throw ValidationError("boundary edge listed twice");
  }
  for (const auto& [key, info] : table)
    if (info.count == 1 && !tagged.count(key))
      throw ValidationError("untagged boundary edge " + std::to_string(info.a) + "-" + std::to_string(info.b));
}

MeshQuality quality(const TriMesh& m) {
  MeshQuality q;
  q.min_angle_deg = 180.0;
  q.max_angle_deg = 0.0;
  for (const auto& t : m.triangles) {
    for (int k = 0; k < 3; ++k) {
      const Vec2& p = m.vertices[static_cast<std::size_t>(t[static_cast<std::size_t>(k)])];
      const Vec2& a = m.vertices[static_cast<std::size_t>(t[static_cast<std::size_t>((k + 1) % 3)])];
      const Vec2& b = m.vertices[static_cast<std::size_t>(t[static_cast<std::size_t>((k + 2) % 3)])];
      const double ang = std::atan2(std::abs(cross(a - p, b - p)), (a - p).dot(b - p)) * 180.0 / std::numbers::pi;
      q.min_angle_deg = std::min(q.min_angle_deg, ang);
      q.max_angle_deg = std::max(q.max_angle_deg, ang);
    }
  }
  q.h = m.h();
  q.area = m.area();
  const auto table = edge_table(m);
  std::unordered_map<std::uint64_t, int> tagged;
  for (const auto& e : m.boundary) tagged[edge_key(e.a, e.b)]++;
  for (const auto& [key, info] : table) {
    if (info.count > 2 || (info.count == 2 && info.second_a != info.b)) q.conforming = false;
    if (info.count == 1) {
      ++q.n_boundary_edges;
      if (!tagged.count(key)) ++q.n_untagged;
    }
  }
  return q;
}

TriMesh submesh(const TriMesh& m, const std::vector<int>& tris, std::vector<int>* vertex_map) {
  TriMesh out;
  out.mesher = m.mesher + "/sub";
  std::vector<int> local(m.vertices.size(), -1);
  std::vector<int> parent;
  for (int ti : tris) {
    const auto& t = m.triangles.at(static_cast<std::size_t>(ti));
    std::array<int, 3> nt{};
    for (int k = 0; k < 3; ++k) {
      const int v = t[static_cast<std::size_t>(k)];
      if (local[static_cast<std::size_t>(v)] < 0) {
        local[static_cast<std::size_t>(v)] = static_cast<int>(parent.size());
        parent.push_back(v);
        out.vertices.push_back(m.vertices[static_cast<std::size_t>(v)]);
      }
      nt[static_cast<std::size_t>(k)] = local[static_cast<std::size_t>(v)];
    }
    out.triangles.push_back(nt);
  }
  std::unordered_map<std::uint64_t, int> parent_tags;
  for (const auto& e : m.boundary) parent_tags[edge_key(e.a, e.b)] = e.tag;
  for (const auto& e : free_edges(out)) {
    const int pa = parent[static_cast<std::size_t>(e[0])], pb = parent[static_cast<std::size_t>(e[1])];
    const auto it = parent_tags.find(edge_key(pa, pb));
    out.boundary.push_back({e[0], e[1], it == parent_tags.end() ? kCutTag : it->second});
  }
  if (vertex_map) *vertex_map = std::move(parent);
  return out;
}

void tag_boundary(TriMesh& m, const PlanarDomain& d) {
  std::vector<ConvexShape> regions;
  for (int j = 0; j < d.n_holes(); ++j) regions.push_back(d.hole_region(j));
  m.boundary.clear();
  for (const auto& e : free_edges(m)) {
    const Vec2 mid = 0.5 * (m.vertices[static_cast<std::size_t>(e[0])] + m.vertices[static_cast<std::size_t>(e[1])]);
    double best = std::abs(signed_distance(d.outer, mid));
    int tag = kOuterTag;
    for (std::size_t j = 0; j < regions.size(); ++j) {
      const double dj = std::abs(signed_distance(regions[j], mid));
      if (dj < best) {
        best = dj;
        tag = static_cast<int>(j);
      }
    }
    m.boundary.push_back({e[0], e[1], tag});
  }
}

}  // namespace fluxgap
