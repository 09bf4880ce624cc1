#include "fluxgap/errors.hpp"
#include "fluxgap/mesh.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace fluxgap {

namespace {

std::string tag_name(int tag) {
  if (tag == kOuterTag) return "outer";
  if (tag == kCutTag) return "cut";
  return "hole" + std::to_string(tag);
}

int parse_tag(const std::string& s) {
  if (s == "outer") return kOuterTag;
  if (s == "cut") return kCutTag;
  if (s.rfind("hole", 0) == 0 && s.size() > 4) {
    std::size_t pos = 0;
    const int j = std::stoi(s.substr(4), &pos);
    if (pos == s.size() - 4 && j >= 0) return j;
  }
  throw ValidationError("untagged boundary edge (bad tag '" + s + "')");
}

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// Reads the next non-empty, non-comment line.
bool next_line(std::istream& is, std::string& line, int& lineno) {
  while (std::getline(is, line)) {
    ++lineno;
    const auto p = line.find_first_not_of(" \t\r");
    if (p == std::string::npos || line[p] == '#') continue;
    return true;
  }
  return false;
}

int read_header(std::istream& is, const char* key, int& lineno, std::string& line) {
  if (!next_line(is, line, lineno)) throw ParseError(std::string("missing '") + key + "' section", lineno);
  std::istringstream ss(line);
  std::string k;
  long n = -1;
  ss >> k >> n;
  if (k != key || n < 0) throw ParseError(std::string("expected '") + key + " <count>'", lineno);
  return static_cast<int>(n);
}

}  // namespace

void write_mesh(std::ostream& os, const TriMesh& m) {
  if (!m.mesher.empty()) os << "# mesher " << m.mesher << "\n";
  os << "vertices " << m.vertices.size() << "\n";
  for (const auto& v : m.vertices) os << fmt17(v.x()) << " " << fmt17(v.y()) << "\n";
  os << "triangles " << m.triangles.size() << "\n";
  for (const auto& t : m.triangles) os << t[0] << " " << t[1] << " " << t[2] << "\n";
  os << "boundary " << m.boundary.size() << "\n";
  for (const auto& e : m.boundary) os << e.a << " " << e.b << " " << tag_name(e.tag) << "\n";
}

TriMesh read_mesh(std::istream& is) {
  TriMesh m;
  int lineno = 0;
  std::string line;

  // The optional mesher comment must be the first line.
  if (is.peek() == '#') {
    std::getline(is, line);
    ++lineno;
    const std::string prefix = "# mesher ";
    if (line.rfind(prefix, 0) == 0) m.mesher = line.substr(prefix.size());
  }

  const int nv = read_header(is, "vertices", lineno, line);
  m.vertices.reserve(static_cast<std::size_t>(nv));
  for (int i = 0; i < nv; ++i) {
    if (!next_line(is, line, lineno)) throw ParseError("truncated vertex list", lineno);
    std::istringstream ss(line);
    double x, y;
    if (!(ss >> x >> y)) throw ParseError("bad vertex line", lineno);
    m.vertices.emplace_back(x, y);
  }
  const int nt = read_header(is, "triangles", lineno, line);
  m.triangles.reserve(static_cast<std::size_t>(nt));
  for (int i = 0; i < nt; ++i) {
    if (!next_line(is, line, lineno)) throw ParseError("truncated triangle list", lineno);
    std::istringstream ss(line);
    std::array<int, 3> t{};
    if (!(ss >> t[0] >> t[1] >> t[2])) throw ParseError("bad triangle line", lineno);
    m.triangles.push_back(t);
  }
  const int nb = read_header(is, "boundary", lineno, line);
  for (int i = 0; i < nb; ++i) {
    if (!next_line(is, line, lineno)) throw ParseError("truncated boundary list", lineno);
    std::istringstream ss(line);
    BoundaryEdge e;
    std::string tag;
    if (!(ss >> e.a >> e.b >> tag)) throw ParseError("bad boundary line", lineno);
    e.tag = parse_tag(tag);
    m.boundary.push_back(e);
  }
  m.validate();
  return m;
}

void export_mesh(const TriMesh& m, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw Error("cannot write mesh file " + path);
  write_mesh(os, m);
}

TriMesh import_mesh(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error("cannot open mesh file " + path);
  return read_mesh(is);
}

}  // namespace fluxgap
