#include "fluxgap/errors.hpp"
#include "fluxgap/harness.hpp"

#include <spdlog/fmt/fmt.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>

namespace fluxgap {

namespace {

constexpr double kPi = std::numbers::pi;

std::optional<Rect> axis_rect(const ConvexShape& s) {
  if (s.kind() != ShapeKind::polygon || s.core().size() != 4) return std::nullopt;
  Rect r{s.core()[0].x(), s.core()[0].y(), s.core()[0].x(), s.core()[0].y()};
  for (const Vec2& v : s.core()) {
    r.x0 = std::min(r.x0, v.x());
    r.y0 = std::min(r.y0, v.y());
    r.x1 = std::max(r.x1, v.x());
    r.y1 = std::max(r.y1, v.y());
  }
  for (const Vec2& v : s.core())
    if ((v.x() != r.x0 && v.x() != r.x1) || (v.y() != r.y0 && v.y() != r.y1)) return std::nullopt;
  return r;
}

bool concentric_disks(const PlanarDomain& d) {
  return d.n_holes() == 1 && d.outer.kind() == ShapeKind::disk && d.holes[0].kind() == ShapeKind::disk &&
         (d.outer.core()[0] - d.holes[0].core()[0]).norm() <= 1e-12 * d.outer.radius();
}

std::optional<double> sharpness_family(const PlanarDomain& d) {
  if (d.n_holes() != 1) return std::nullopt;
  const auto o = axis_rect(d.outer);
  const auto g = axis_rect(d.holes[0]);
  if (!o || !g) return std::nullopt;
  if (o->x0 != -4 || o->x1 != 4 || o->y0 != 0 || o->y1 != 4 || g->x0 != -3 || g->x1 != 3 || g->y1 != 2)
    return std::nullopt;
  return g->y0;
}

MesherKind mesher_from(const std::string& s) {
  if (s == "auto") return MesherKind::automatic;
  if (s == "polar") return MesherKind::polar;
  if (s == "star") return MesherKind::star;
  if (s == "rect_diff") return MesherKind::rect_diff;
  if (s == "block") return MesherKind::block;
  if (s == "staircase") return MesherKind::staircase;
  throw ValidationError("unknown mesher '" + s + "'");
}

SweepAxis axis_from(const std::string& s) {
  if (s == "none") return SweepAxis::none;
  if (s == "flux") return SweepAxis::flux;
  if (s == "epsilon") return SweepAxis::epsilon;
  if (s == "delta") return SweepAxis::delta;
  throw ValidationError("unknown sweep axis '" + s + "'");
}

std::string resolve(const std::string& base, const std::string& p) {
  if (p.empty() || std::filesystem::path(p).is_absolute()) return p;
  return (std::filesystem::path(base) / p).string();
}

}  // namespace

std::string mesher_name(MesherKind m) {
  switch (m) {
    case MesherKind::automatic: return "auto";
    case MesherKind::polar: return "polar";
    case MesherKind::star: return "star";
    case MesherKind::rect_diff: return "rect_diff";
    case MesherKind::block: return "block";
    case MesherKind::staircase: return "staircase";
  }
  return "?";
}

std::string axis_name(SweepAxis a) {
  switch (a) {
    case SweepAxis::none: return "none";
    case SweepAxis::flux: return "flux";
    case SweepAxis::epsilon: return "epsilon";
    case SweepAxis::delta: return "delta";
  }
  return "?";
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return fmt::format("{:016x}", h);
}

void write_text_file(const std::string& path, const std::string& text) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot write " + path);
  os << text;
}

Scenario scenario_from_json(const json& j, const std::string& base_dir) {
  if (!j.is_object()) throw ValidationError("scenario must be a JSON object");
  Scenario sc;
  sc.name = j.value("name", std::string("scenario"));

  if (!j.contains("domain")) throw ValidationError("scenario needs 'domain'");
  const json dom = j["domain"].is_string() ? read_json_file(resolve(base_dir, j["domain"])) : j["domain"];
  sc.domain = domain_from_json(dom);
  if (!j.contains("potential")) throw ValidationError("scenario needs 'potential'");
  const json pot = j["potential"].is_string() ? read_json_file(resolve(base_dir, j["potential"])) : j["potential"];
  sc.potential = potential_from_json(pot);
  sc.potential.validate_against(sc.domain);

  sc.mesher = mesher_from(j.value("mesher", std::string("auto")));
  if (!j.contains("resolution") || !j["resolution"].is_array() || j["resolution"].empty())
    throw ValidationError("scenario needs a non-empty 'resolution' ladder of mesh sizes");
  for (const auto& h : j["resolution"]) {
    if (!h.is_number() || !(h.get<double>() > 0)) throw ValidationError("mesh sizes must be positive numbers");
    sc.ladder.push_back(h.get<double>());
  }
  for (std::size_t i = 1; i < sc.ladder.size(); ++i)
    if (!(sc.ladder[i] < sc.ladder[i - 1])) throw ValidationError("resolution ladder must strictly decrease");

  if (j.contains("solver")) {
    const json& s = j["solver"];
    sc.solver.tol = s.value("tol", sc.solver.tol);
    sc.solver.seed = s.value("seed", sc.solver.seed);
    sc.solver.max_iter = s.value("max_iter", sc.solver.max_iter);
    const std::string scheme = s.value("scheme", std::string("peierls"));
    if (scheme == "peierls") sc.scheme = Discretization::peierls;
    else if (scheme == "midpoint") sc.scheme = Discretization::midpoint;
    else throw ValidationError("unknown scheme '" + scheme + "'");
  }
  if (j.contains("widths")) {
    sc.widths.boundary_samples = j["widths"].value("boundary_samples", sc.widths.boundary_samples);
    sc.widths.cone_samples = j["widths"].value("cone_samples", sc.widths.cone_samples);
  }
  if (j.contains("sweep")) {
    sc.axis = axis_from(j["sweep"].value("axis", std::string("none")));
    if (j["sweep"].contains("values"))
      for (const auto& v : j["sweep"]["values"]) {
        if (!v.is_number() || !std::isfinite(v.get<double>())) throw ValidationError("sweep values must be finite");
        sc.grid.push_back(v.get<double>());
      }
    std::sort(sc.grid.begin(), sc.grid.end());
    if (std::adjacent_find(sc.grid.begin(), sc.grid.end()) != sc.grid.end())
      throw ValidationError("sweep values must be distinct");
    if (sc.axis != SweepAxis::none && sc.grid.empty()) throw ValidationError("sweep needs 'values'");
  }
  sc.excision = j.value("excision", false);
  if (j.contains("outputs")) {
    sc.csv = resolve(base_dir, j["outputs"].value("csv", std::string()));
    sc.json_out = resolve(base_dir, j["outputs"].value("json", std::string()));
    sc.svg = resolve(base_dir, j["outputs"].value("svg", std::string()));
  }
  // The hash covers the resolved inputs, not the file layout.
  json canon = j;
  canon["domain"] = domain_to_json(sc.domain);
  canon["potential"] = potential_to_json(sc.potential);
  canon.erase("outputs");
  sc.hash = fnv1a_hex(canon.dump());
  return sc;
}

Scenario load_scenario(const std::string& path) {
  return scenario_from_json(read_json_file(path), std::filesystem::path(path).parent_path().string());
}

MesherKind resolve_mesher(const PlanarDomain& d, MesherKind m) {
  if (m != MesherKind::automatic) return m;
  if (concentric_disks(d)) return MesherKind::polar;
  if (d.n_holes() == 1 && axis_rect(d.outer) && axis_rect(d.holes[0])) return MesherKind::rect_diff;
  if (std::all_of(d.holes.begin(), d.holes.end(), [](const ConvexShape& h) { return !h.polygonal_core(); }))
    return MesherKind::block;
  if (d.n_holes() == 1) return MesherKind::star;
  return MesherKind::staircase;
}

TriMesh build_mesh(const PlanarDomain& d, MesherKind mesher, double h, int level) {
  if (level < 0) throw ValidationError("mesh level must be non-negative");
  if (!(h > 0)) throw ValidationError("mesh size must be positive");
  switch (resolve_mesher(d, mesher)) {
    case MesherKind::polar: {
      if (!concentric_disks(d)) throw ValidationError("polar mesher needs two concentric disks");
      const double r1 = d.holes[0].radius(), r2 = d.outer.radius();
      const int nr = std::max(1, static_cast<int>(std::lround((r2 - r1) / h)));
      const int nt = 4 * std::max(2, static_cast<int>(std::ceil(2 * kPi * 0.5 * (r1 + r2) / (4 * h))));
      return mesh_polar_annulus(r1, r2, nr, nt, d.outer.core()[0]);
    }
    case MesherKind::star: {
      const ConvexShape g = d.hole_region(0);
      const Vec2 c = g.interior_point();
      double span = 0;
      for (int i = 0; i < 256; ++i) {
        const Vec2 u(std::cos(2 * kPi * i / 256), std::sin(2 * kPi * i / 256));
        span = std::max(span, ray_exit(d.outer, c, u) - ray_exit(g, c, u));
      }
      const int nr = std::max(2, static_cast<int>(std::ceil(span / h)));
      const int nt = std::max(8, static_cast<int>(std::ceil(perimeter(d.outer) / h)));
      return mesh_star_annulus(d, nr, nt);
    }
    case MesherKind::rect_diff: {
      const auto o = axis_rect(d.outer);
      const auto g = d.n_holes() == 1 ? axis_rect(d.holes[0]) : std::nullopt;
      if (!o || !g) throw ValidationError("rect_diff mesher needs axis-parallel rectangles");
      RectDiffOptions ro;
      ro.min_layers = 3 << level;
      ro.grading = 1 + 0.5 / (1 << level);
      // Lines for the excision test function of the sharpness family.
      if (sharpness_family(d)) ro.extra_x = {-2, -1, 1, 2};
      return mesh_rect_diff(*o, *g, h, ro);
    }
    case MesherKind::block: {
      BlockOptions bo;
      bo.rings = 8 << level;
      return mesh_block(d, h, bo);
    }
    case MesherKind::staircase: return mesh_staircase(d, h);
    case MesherKind::automatic: break;
  }
  throw ValidationError("no mesher resolved");
}

LadderResult solve_ladder(const PlanarDomain& d, const ClosedPotential& A, MesherKind mesher,
                          const std::vector<double>& ladder, const SolverOptions& opts, Discretization scheme) {
  if (ladder.empty()) throw ValidationError("missing mesh resolution");
  LadderResult r;
  const bool halving = ladder.size() == 3 && std::abs(ladder[0] / ladder[1] - 2) < 1e-9 &&
                       std::abs(ladder[1] / ladder[2] - 2) < 1e-9;
  for (std::size_t i = 0; i < ladder.size(); ++i) {
    const double h = ladder[i];
    const TriMesh mesh = build_mesh(d, mesher, h, halving ? static_cast<int>(i) : 0);
    const SpectralProblem p{&mesh, A, scheme};
    EigenResult e = solve_problem(p, opts, &d);
    spdlog::info("{} h={:.4g} dof={} lambda1={:.10g}", mesh.mesher, e.h, e.dof, e.lambda1());
    r.levels.push_back(std::move(e));
  }
  const EigenResult& fine = r.levels.back();
  r.exact_zero = fine.exact_zero;
  LambdaInfo& li = r.lambda;
  li.computed = true;
  li.finest = fine.lambda1();
  li.value = li.finest;
  li.h = fine.h;
  li.mesher = fine.mesher;
  li.residual = fine.residuals.empty() ? 0.0 : fine.residuals[0];
  li.dof = fine.dof;
  li.order = std::numeric_limits<double>::quiet_NaN();
  if (halving && !r.exact_zero) {
    std::vector<double> lv;
    for (const auto& e : r.levels) lv.push_back(e.raw_eigenvalues.at(0));
    const Extrapolation ex = richardson(lv);
    li.order = ex.order;
    if (ex.extrapolated && ex.order >= 1.5 && ex.order <= 3) {
      li.extrapolated = true;
      li.value = ex.value;
    }
  }
  return r;
}

PlanarDomain sharpness_domain(double eps) {
  if (!(eps > 0 && eps < 2)) throw ValidationError("sharpness family needs 0 < eps < 2");
  PlanarDomain d;
  d.outer = ConvexShape::polygon({{-4, 0}, {4, 0}, {4, 4}, {-4, 4}});
  d.holes = {ConvexShape::polygon({{-3, eps}, {3, eps}, {3, 2}, {-3, 2}})};
  return d;
}

TriMesh sharpness_mesh(double eps, double h) {
  return build_mesh(sharpness_domain(eps), MesherKind::rect_diff, h);
}

double sharpness_excision(const TriMesh& mesh, const ClosedPotential& A, double eps, Discretization scheme) {
  const double tol = 1e-12;
  std::vector<int> region;
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const auto& tri = mesh.triangles[static_cast<std::size_t>(t)];
    const Vec2 c = (mesh.vertices[static_cast<std::size_t>(tri[0])] + mesh.vertices[static_cast<std::size_t>(tri[1])] +
                    mesh.vertices[static_cast<std::size_t>(tri[2])]) /
                   3.0;
    if (!(std::abs(c.x()) < 1 && c.y() < eps)) region.push_back(t);
  }
  std::vector<double> phi(mesh.vertices.size(), 1.0);
  for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
    const Vec2& p = mesh.vertices[v];
    if (p.y() <= eps + tol && std::abs(p.x()) <= 2 + tol) phi[v] = std::max(0.0, std::abs(p.x()) - 1);
  }
  std::vector<std::array<int, 2>> dirichlet;
  for (const auto& tri : mesh.triangles)
    for (int k = 0; k < 3; ++k) {
      const int a = tri[static_cast<std::size_t>(k)], b = tri[static_cast<std::size_t>((k + 1) % 3)];
      const Vec2 &pa = mesh.vertices[static_cast<std::size_t>(a)], &pb = mesh.vertices[static_cast<std::size_t>(b)];
      for (double x : {-1.0, 1.0})
        if (std::abs(pa.x() - x) < tol && std::abs(pb.x() - x) < tol && pa.y() <= eps + tol && pb.y() <= eps + tol)
          dirichlet.push_back({a, b});
    }
  if (dirichlet.empty()) throw ValidationError("mesh has no grid line at x = +-1 across the strip");
  const SpectralProblem p{&mesh, A, scheme};
  return excision_upper(p, assemble(p), region, dirichlet, phi);
}

Verification verify(const Scenario& sc, const ReportOptions& opts) {
  Verification v;
  v.ladder = solve_ladder(sc.domain, sc.potential, sc.mesher, sc.ladder, sc.solver, sc.scheme);
  ReportOptions o = opts;
  o.widths = sc.widths;
  v.report = compose_report(sc.domain, sc.potential, v.ladder.lambda, o);
  if (sc.excision) {
    const auto eps = sharpness_family(sc.domain);
    if (!eps) throw ValidationError("excision bound is only defined for the sharpness family");
    const int level = static_cast<int>(v.ladder.levels.size()) - 1;
    const TriMesh mesh = build_mesh(sc.domain, sc.mesher, sc.ladder.back(), sc.ladder.size() == 3 ? level : 0);
    v.excision = sharpness_excision(mesh, sc.potential, *eps, sc.scheme);
  }
  return v;
}

std::string verification_json(const Scenario& sc, const Verification& v) {
  nlohmann::ordered_json doc;
  doc["scenario"] = sc.name;
  doc["hash"] = sc.hash;
  doc["seed"] = sc.solver.seed;
  json levels = json::array();
  for (const auto& e : v.ladder.levels)
    levels.push_back({{"h", e.h},
                      {"dof", e.dof},
                      {"mesher", e.mesher},
                      {"lambda1", e.lambda1()},
                      {"residual", e.residuals.empty() ? 0.0 : e.residuals[0]},
                      {"iterations", e.iterations}});
  doc["levels"] = levels;
  if (!std::isnan(v.excision)) doc["excision_upper"] = v.excision;
  doc["report"] = nlohmann::ordered_json::parse(report_json(v.report));
  return doc.dump(2) + "\n";
}

std::string invariants_table(const PlanarDomain& d, const WidthOptions& wo) {
  d.validate();
  std::string out;
  auto row = [&](const char* name, double x) { out += fmt::format("{:<12} {:.10g}\n", name, x); };
  row("area", area(d.outer));
  row("perimeter", perimeter(d.outer));
  row("diameter", diameter(d.outer));
  if (d.n_holes() > 0 && (!d.has_point_holes() || d.pole_radius > 0)) {
    const WidthReport w = widths(d, wo);
    row("beta", w.beta);
    row("B", w.B);
    row("beta_lo", w.beta_lo);
    row("B_hi", w.B_hi);
    row("beta_tilde", w.beta_tilde);
    out += fmt::format("{:<12} {}\n", "samples", w.n_samples);
  }
  row("inj", d.outer.smooth() ? injectivity_radius(d.outer) : 0.0);
  return out;
}

std::string oracle_table(double r1, double r2, double phi, int k_max) {
  std::vector<AnnulusMode> modes;
  const double lam = annulus_oracle(r1, r2, phi, k_max, 1e-12, &modes);
  std::string out = fmt::format("{:>4} {:>20}\n", "k", "lambda");
  for (const auto& m : modes) out += fmt::format("{:>4} {:>20.14g}\n", m.k, m.lambda);
  out += fmt::format("{:>4} {:>20.14g}\n", "min", lam);
  return out;
}

}  // namespace fluxgap
