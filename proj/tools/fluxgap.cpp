// fluxgap command line: invariants | solve | verify | sweep | partition | oracle.
#include "fluxgap/errors.hpp"
#include "fluxgap/harness.hpp"

#include <CLI11.hpp>
#include <spdlog/fmt/fmt.h>
#include <spdlog/spdlog.h>

#include <filesystem>
#include <iostream>

using namespace fluxgap;

namespace {

struct Globals {
  std::string config;
  std::string out_dir;
  int jobs = 1;
  std::optional<std::uint64_t> seed;
};

Scenario scenario(const Globals& g) {
  if (g.config.empty()) throw ValidationError("--config <scenario.json> is required");
  Scenario sc = load_scenario(g.config);
  if (g.seed) sc.solver.seed = *g.seed;
  return sc;
}

// Output path: the scenario's own, else <out-dir>/<name>.<ext>, else none.
std::string output_path(const Globals& g, const Scenario& sc, const std::string& declared, const std::string& ext) {
  if (!g.out_dir.empty()) {
    const std::string file =
        declared.empty() ? sc.name + "." + ext : std::filesystem::path(declared).filename().string();
    return (std::filesystem::path(g.out_dir) / file).string();
  }
  return declared;
}

int cmd_invariants(const Globals& g, const std::string& file) {
  const std::string path = file.empty() ? g.config : file;
  if (path.empty()) throw ValidationError("invariants needs a domain file");
  std::cout << invariants_table(load_domain(path));
  return 0;
}

int cmd_solve(const Globals& g) {
  const Scenario sc = scenario(g);
  const LadderResult r = solve_ladder(sc.domain, sc.potential, sc.mesher, sc.ladder, sc.solver, sc.scheme);
  std::cout << fmt::format("{:<10} {:>12} {:>8} {:>20} {:>12} {:>6}\n", "mesher", "h", "dof", "lambda1", "residual",
                           "iters");
  for (const auto& e : r.levels)
    std::cout << fmt::format("{:<10} {:>12.6g} {:>8} {:>20.14g} {:>12.3e} {:>6}\n", e.mesher, e.h, e.dof, e.lambda1(),
                             e.residuals.empty() ? 0.0 : e.residuals[0], e.iterations);
  if (r.lambda.extrapolated)
    std::cout << fmt::format("extrapolated lambda1 = {:.14g} (observed order {:.3f})\n", r.lambda.value,
                             r.lambda.order);
  if (r.exact_zero) std::cout << "all fluxes integral: lambda1 = 0 exactly\n";
  return 0;
}

int cmd_verify(const Globals& g, double scale_rhs) {
  const Scenario sc = scenario(g);
  ReportOptions opts;
  opts.scale_rhs = scale_rhs;
  const Verification v = verify(sc, opts);
  std::cout << report_table(v.report);
  if (!std::isnan(v.excision)) std::cout << fmt::format("excision upper bound = {:.10g}\n", v.excision);
  const std::string out = output_path(g, sc, sc.json_out, "json");
  if (!out.empty()) write_text_file(out, verification_json(sc, v));
  const bool ok = v.report.all_pass();
  std::cout << (ok ? "PASS" : "FAIL") << "\n";
  return ok ? 0 : 1;
}

int cmd_sweep(const Globals& g) {
  const Scenario sc = scenario(g);
  const auto pts = run_sweep(sc, g.jobs);
  const std::string csv = sweep_csv(sc, pts);
  const std::string out = output_path(g, sc, sc.csv, "csv");
  if (out.empty()) std::cout << csv;
  else write_text_file(out, csv);
  int failed = 0;
  for (const auto& p : pts) failed += p.ok ? 0 : 1;
  if (failed) spdlog::warn("{} of {} sweep points failed", failed, pts.size());
  return 0;
}

int cmd_partition(const Globals& g, const std::string& file, const std::string& svg) {
  const std::string path = file.empty() ? g.config : file;
  if (path.empty()) throw ValidationError("partition needs a domain file");
  const PlanarDomain d = load_domain(path);
  std::string figure;
  if (d.n_holes() == 1) {
    const AnnuliPartition part = annuli_partition(d);
    std::cout << fmt::format("beta = {:.10g}  B = {:.10g}  pieces = {}  (2B/beta = {:.6g})\n", part.beta, part.B,
                             part.n, 2 * part.B / part.beta);
    std::cout << fmt::format("{:>3} {:>10} {:>14} {:>14} {:>14}\n", "k", "inner", "|dF_k|", "beta_k", "B_k");
    const char* inner[] = {"hole", "offset", "parallel", "mixed"};
    std::vector<std::vector<WedgeVertex>> wedges;
    for (const auto& p : part.pieces) {
      std::cout << fmt::format("{:>3} {:>10} {:>14.8g} {:>14.8g} {:>14.8g}\n", p.k, inner[static_cast<int>(p.inner)],
                               p.outer_perimeter, p.width_min, p.width_max);
      wedges.push_back(wedge_report(p, d.outer));
      for (const auto& w : wedges.back())
        std::cout << fmt::format("      vertex ({:.5f}, {:.5f}) {:<14} cone {:.4f}  beta/B(p) = {:.6g}\n", w.p.x(),
                                 w.p.y(), vertex_type_name(w.type), w.cone_angle, w.ratio);
    }
    figure = annuli_svg(part, wedges);
  } else {
    const auto cs = cells(d);
    std::vector<EquidistantCurve> curves;
    Rect box{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
             -std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (const Vec2& p : boundary_polyline(d.outer, 512)) {
      box.x0 = std::min(box.x0, p.x());
      box.y0 = std::min(box.y0, p.y());
      box.x1 = std::max(box.x1, p.x());
      box.y1 = std::max(box.y1, p.y());
    }
    for (int i = 0; i < d.n_holes(); ++i)
      for (int j = i + 1; j < d.n_holes(); ++j) {
        EquidistantCurve c = equidistant_curve(d.hole_region(i), d.hole_region(j), box, 200);
        // Only the part inside the domain separates cells.
        for (auto& pl : c.polylines)
          pl.erase(std::remove_if(pl.begin(), pl.end(), [&](const Vec2& x) { return !d.contains(x); }), pl.end());
        curves.push_back(std::move(c));
      }
    std::cout << fmt::format("{:>3} {:>14} {:>14} {:>14} {:>10}\n", "j", "|dF_j|", "beta_j", "B_j", "m_j");
    for (const auto& c : cs)
      std::cout << fmt::format("{:>3} {:>14.8g} {:>14.8g} {:>14.8g} {:>10.6g}\n", c.j, c.perimeter, c.width_min,
                               c.width_max, star_cosine(d, c));
    figure = cells_svg(d, cs, curves);
  }
  std::string out = svg;
  if (out.empty() && !g.out_dir.empty())
    out = (std::filesystem::path(g.out_dir) / (std::filesystem::path(path).stem().string() + "_partition.svg")).string();
  if (!out.empty()) write_text_file(out, figure);
  return 0;
}

int cmd_oracle(double r1, double r2, double phi, int kmax) {
  std::cout << oracle_table(r1, r2, phi, kmax);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  init_logging();
  CLI::App app{"Magnetic Neumann eigenvalues on multiply connected planar domains"};
  app.require_subcommand(1);
  Globals g;
  std::uint64_t seed = 0;
  app.add_option("--config", g.config, "Scenario (or domain) JSON file");
  app.add_option("--jobs", g.jobs, "Concurrent sweep points")->check(CLI::PositiveNumber);
  app.add_option("--out-dir", g.out_dir, "Directory for CSV / JSON / SVG outputs");
  auto* seed_opt = app.add_option("--seed", seed, "Solver seed (overrides the scenario)");

  std::string file;
  auto* inv = app.add_subcommand("invariants", "Geometric invariants of a domain");
  inv->add_option("file", file, "Domain JSON");
  auto* solve = app.add_subcommand("solve", "Lowest eigenvalue on the scenario's mesh ladder");
  double scale_rhs = 1.0;
  auto* ver = app.add_subcommand("verify", "Bound report; exit code 0 iff every applicable bound holds");
  ver->add_option("--scale-rhs", scale_rhs, "Multiply every right-hand side (testing the exit code)");
  auto* sweep = app.add_subcommand("sweep", "Sweep flux, epsilon or pole radius; CSV output");
  std::string svg;
  auto* part = app.add_subcommand("partition", "Partition of a domain into annuli or cells");
  part->add_option("file", file, "Domain JSON");
  part->add_option("--svg", svg, "SVG output path");
  double r1 = 1, r2 = 2, phi = 0.5;
  int kmax = 8;
  auto* orc = app.add_subcommand("oracle", "Annulus eigenvalues by angular mode");
  orc->add_option("r1", r1)->required();
  orc->add_option("r2", r2)->required();
  orc->add_option("phi", phi)->required();
  orc->add_option("--kmax", kmax);

  // Options are accepted before or after the subcommand.
  for (auto* sub : {inv, solve, ver, sweep, part, orc}) sub->fallthrough();

  CLI11_PARSE(app, argc, argv);
  if (*seed_opt) g.seed = seed;

  try {
    if (*inv) return cmd_invariants(g, file);
    if (*solve) return cmd_solve(g);
    if (*ver) return cmd_verify(g, scale_rhs);
    if (*sweep) return cmd_sweep(g);
    if (*part) return cmd_partition(g, file, svg);
    if (*orc) return cmd_oracle(r1, r2, phi, kmax);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
