#include "fluxgap/errors.hpp"
#include "fluxgap/harness.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fluxgap {

namespace {

Vec2 point_from(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw ValidationError(std::string(what) + ": expected [x, y]");
  return Vec2(j[0].get<double>(), j[1].get<double>());
}

std::vector<Vec2> points_from(const json& j, const char* what) {
  if (!j.is_array()) throw ValidationError(std::string(what) + ": expected a list of points");
  std::vector<Vec2> out;
  for (const auto& p : j) out.push_back(point_from(p, what));
  return out;
}

double number_from(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number()) throw ValidationError(std::string("missing number '") + key + "'");
  return j[key].get<double>();
}

json point_json(const Vec2& p) { return json::array({p.x(), p.y()}); }

}  // namespace

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    const int line = 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<long>(end), '\n'));
    throw ParseError("line " + std::to_string(line) + ": " + e.what(), line);
  }
}

json read_json_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ValidationError("cannot open " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  try {
    return parse_json(ss.str());
  } catch (const ParseError& e) {
    throw ParseError(path + ":" + e.what(), e.line());
  }
}

ConvexShape shape_from_json(const json& j) {
  if (!j.is_object() || !j.contains("type") || !j["type"].is_string())
    throw ValidationError("shape needs a string 'type'");
  const std::string type = j["type"];
  if (type == "polygon") {
    if (!j.contains("vertices")) throw ValidationError("polygon needs 'vertices'");
    return ConvexShape::polygon(points_from(j["vertices"], "vertices"));
  }
  if (type == "disk") {
    if (!j.contains("center")) throw ValidationError("disk needs 'center'");
    return ConvexShape::disk(point_from(j["center"], "center"), number_from(j, "radius"));
  }
  if (type == "point") {
    if (!j.contains("at")) throw ValidationError("point needs 'at'");
    return ConvexShape::point(point_from(j["at"], "at"));
  }
  if (type == "rounded") {
    if (!j.contains("core")) throw ValidationError("rounded shape needs 'core'");
    return ConvexShape::rounded(points_from(j["core"], "core"), number_from(j, "radius"));
  }
  throw ValidationError("unknown shape type '" + type + "'");
}

json shape_to_json(const ConvexShape& s) {
  json j;
  json core = json::array();
  for (const Vec2& p : s.core()) core.push_back(point_json(p));
  switch (s.kind()) {
    case ShapeKind::polygon:
      j["type"] = "polygon";
      j["vertices"] = core;
      break;
    case ShapeKind::disk:
      j["type"] = "disk";
      j["center"] = point_json(s.core()[0]);
      j["radius"] = s.radius();
      break;
    case ShapeKind::point:
      j["type"] = "point";
      j["at"] = point_json(s.core()[0]);
      break;
    case ShapeKind::rounded:
      j["type"] = "rounded";
      j["core"] = core;
      j["radius"] = s.radius();
      break;
  }
  return j;
}

PlanarDomain domain_from_json(const json& j) {
  if (!j.is_object() || !j.contains("outer")) throw ValidationError("domain needs 'outer'");
  PlanarDomain d;
  d.outer = shape_from_json(j["outer"]);
  if (j.contains("holes")) {
    if (!j["holes"].is_array()) throw ValidationError("'holes' must be a list");
    for (const auto& h : j["holes"]) d.holes.push_back(shape_from_json(h));
  }
  if (j.contains("pole_radius")) d.pole_radius = number_from(j, "pole_radius");
  d.validate();
  return d;
}

json domain_to_json(const PlanarDomain& d) {
  json j;
  j["outer"] = shape_to_json(d.outer);
  j["holes"] = json::array();
  for (const auto& h : d.holes) j["holes"].push_back(shape_to_json(h));
  if (d.pole_radius > 0) j["pole_radius"] = d.pole_radius;
  return j;
}

ClosedPotential potential_from_json(const json& j) {
  if (!j.is_object() || !j.contains("poles") || !j["poles"].is_array())
    throw ValidationError("potential needs a 'poles' list");
  ClosedPotential A;
  for (const auto& p : j["poles"]) {
    if (!p.is_object() || !p.contains("at")) throw ValidationError("pole needs 'at'");
    A.poles.push_back(Pole{point_from(p["at"], "at"), number_from(p, "flux")});
  }
  A.validate();
  return A;
}

json potential_to_json(const ClosedPotential& A) {
  json j;
  j["poles"] = json::array();
  for (const Pole& p : A.poles) j["poles"].push_back({{"at", point_json(p.at)}, {"flux", p.flux}});
  return j;
}

PlanarDomain load_domain(const std::string& path) {
  const json j = read_json_file(path);
  if (!j.contains("domain")) return domain_from_json(j);
  // A scenario file: the domain is inline or a path relative to it.
  if (j["domain"].is_string())
    return load_domain((std::filesystem::path(path).parent_path() / j["domain"].get<std::string>()).string());
  return domain_from_json(j["domain"]);
}

}  // namespace fluxgap
