// Acceptance run: one line per criterion, exit status 0 iff every line passes.

#include "fluxgap/errors.hpp"
#include "fluxgap/harness.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include <unistd.h>

using namespace fluxgap;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;
const std::string kSource = FLUXGAP_SOURCE_DIR;

struct Outcome {
  bool pass = false;
  std::string detail;
};

// Finite-volume radial eigenvalue of angular mode k (Sturm bisection), an
// oracle independent of the library's shooting solver.
double radial_fv(double r1, double r2, double phi, int k, int n) {
  const double dr = (r2 - r1) / n;
  std::vector<double> diag(n + 1, 0.0), off(n), w(n + 1);
  for (int i = 0; i <= n; ++i) {
    const double r = r1 + i * dr;
    w[i] = r * dr * ((i == 0 || i == n) ? 0.5 : 1.0);
    diag[i] = w[i] * (k - phi) * (k - phi) / (r * r);
  }
  for (int i = 0; i < n; ++i) {
    const double c = (r1 + (i + 0.5) * dr) / dr;
    diag[i] += c;
    diag[i + 1] += c;
    off[i] = -c;
  }
  for (int i = 0; i <= n; ++i) diag[i] /= w[i];
  for (int i = 0; i < n; ++i) off[i] /= std::sqrt(w[i] * w[i + 1]);
  auto below = [&](double x) {
    int count = 0;
    double q = diag[0] - x;
    for (int i = 0;; ++i) {
      if (q < 0) ++count;
      if (i == n) break;
      if (q == 0) q = 1e-300;
      q = diag[i + 1] - x - off[i] * off[i] / q;
    }
    return count;
  };
  double lo = -1, hi = 1;
  while (below(hi) == 0) hi *= 2;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (below(mid) > 0 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

double radial_oracle(double r1, double r2, double phi) {
  double best = std::numeric_limits<double>::infinity();
  // Second order in the cell size; one Richardson step on n and 2n cells.
  for (int k = -4; k <= 4; ++k)
    best = std::min(best, (4 * radial_fv(r1, r2, phi, k, 4000) - radial_fv(r1, r2, phi, k, 2000)) / 3);
  return best;
}

ClosedPotential pole(const Vec2& at, double flux) {
  ClosedPotential A;
  A.poles = {{at, flux}};
  return A;
}

// One pole of the given flux in every hole.
ClosedPotential uniform_flux(const PlanarDomain& d, double flux) {
  ClosedPotential A;
  for (const auto& h : d.holes) A.poles.push_back({h.interior_point(), flux});
  return A;
}

ConvexShape rect(double x0, double y0, double x1, double y1) {
  return ConvexShape::polygon({{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}});
}

PlanarDomain one_hole(ConvexShape outer, ConvexShape hole) {
  PlanarDomain d;
  d.outer = std::move(outer);
  d.holes = {std::move(hole)};
  return d;
}

Scenario make_scenario(const std::string& name, const PlanarDomain& d, const ClosedPotential& A, MesherKind m,
                       std::vector<double> ladder) {
  Scenario sc;
  sc.name = name;
  sc.domain = d;
  sc.potential = A;
  sc.mesher = m;
  sc.ladder = std::move(ladder);
  sc.solver.tol = 1e-9;
  return sc;
}

// --- criteria ----------------------------------------------------------------

Outcome ac1() {
  double worst = 0;
  for (double phi : {0.0, 1.0, 2.0}) {
    const int nr = 32, nt = 4 * static_cast<int>(std::ceil(2 * kPi * 1.5 * nr / 4));
    const TriMesh m = mesh_polar_annulus(1, 2, nr, nt);
    const EigenResult r = solve_problem({&m, pole({0, 0}, phi)});
    worst = std::max({worst, std::abs(r.raw_eigenvalues.at(0)), r.lambda1()});
  }
  return {worst <= 1e-7, fmt::format("max |lambda1| over flux 0,1,2 at nr=32: {:.3e} (<= 1e-7)", worst)};
}

Outcome ac2() {
  bool ok = true;
  std::string d;
  for (double phi : {0.1, 0.3, 0.5}) {
    const Extrapolation e = refine_extrapolate(
        [](int level) { return mesh_polar_annulus(1, 2, 8 << level, 64 << level); }, pole({0, 0}, phi));
    const double shoot = annulus_oracle(1, 2, phi);
    const double fv = radial_oracle(1, 2, phi);
    const double err = std::abs(e.value - shoot) / shoot;
    const bool agree = std::abs(shoot - fv) / fv < 1e-6;
    const bool pass = e.extrapolated && err <= 0.01 && e.order >= 1.7 && e.order <= 2.3 && agree;
    ok = ok && pass;
    d += fmt::format("phi={} err={:.2e} order={:.3f} oracles differ by {:.1e}; ", phi, err, e.order,
                     std::abs(shoot - fv) / fv);
  }
  return {ok, d + "(err <= 1%, order in [1.7, 2.3], shooting = finite-volume oracle)"};
}

Outcome ac3() {
  bool ok = true;
  std::string d;
  double last_gap = std::numeric_limits<double>::infinity();
  for (double r2 : {1.1, 1.05, 1.025}) {
    const double w = r2 - 1, rmid = 0.5 * (1 + r2);
    const PlanarDomain dom = one_hole(ConvexShape::disk({0, 0}, r2), ConvexShape::disk({0, 0}, 1));
    const LadderResult lr = solve_ladder(dom, pole({0, 0}, 0.5), MesherKind::polar, {w / 2, w / 4, w / 8}, {});
    const double target = 0.25 / (rmid * rmid);
    const double gap = std::abs(lr.lambda.value - target) / target;
    ok = ok && gap < last_gap;
    last_gap = gap;
    d += fmt::format("r2={} lambda={:.8f} gap={:.2e}; ", r2, lr.lambda.value, gap);
  }
  ok = ok && last_gap <= 0.03;
  return {ok, d + "(gap to d^2/r_mid^2 shrinking, final <= 3%)"};
}

Outcome ac4() {
  Scenario base = load_scenario(kSource + "/scenarios/sharpness.json");
  base.axis = SweepAxis::epsilon;
  const double lo = kPi * kPi * 0.25 / (360 * std::sqrt(5.0));
  bool ok = true;
  std::string d;
  for (double eps : {0.4, 0.2, 0.1, 0.05}) {
    const Scenario sc = at_axis(base, eps);
    const Verification v = verify(sc);
    const double ratio = v.ladder.lambda.value / eps;
    const bool pass = ratio >= lo && ratio <= 0.1 && v.excision <= eps / 10 * 1.1 && v.excision >= v.ladder.lambda.finest;
    ok = ok && pass;
    d += fmt::format("eps={} lambda/eps={:.4e} excision/eps={:.4e}; ", eps, ratio, v.excision / eps);
  }
  return {ok, d + fmt::format("(lambda/eps in [{:.3e}, 0.1], excision <= 1.1 eps/10)", lo)};
}

Outcome ac5() {
  std::vector<std::pair<Scenario, std::string>> suite;
  auto add = [&](const std::string& name, const PlanarDomain& d, MesherKind m, std::vector<double> ladder,
                 std::optional<Vec2> at = std::nullopt) {
    for (double phi : {0.2, 0.5}) {
      const ClosedPotential A = at ? pole(*at, phi) : uniform_flux(d, phi);
      suite.push_back({make_scenario(name, d, A, m, ladder), fmt::format("{}@{}", name, phi)});
    }
  };
  add("concentric", one_hole(ConvexShape::disk({0, 0}, 2), ConvexShape::disk({0, 0}, 1)), MesherKind::polar,
      {0.125, 0.0625, 0.03125});
  add("thin_concentric", one_hole(ConvexShape::disk({0, 0}, 1.2), ConvexShape::disk({0, 0}, 1)), MesherKind::polar,
      {0.05, 0.025, 0.0125});
  add("offset_disks", one_hole(ConvexShape::disk({0, 0}, 2), ConvexShape::disk({0.4, 0.2}, 0.7)), MesherKind::star,
      {0.2, 0.1, 0.05});
  add("square_in_square", one_hole(rect(-2, -2, 2, 2), rect(-1, -1, 1, 1)), MesherKind::rect_diff, {0.4, 0.2, 0.1});
  add("offset_square", one_hole(rect(-2, -2, 2, 2), rect(-1, -1, 0.5, 0.5)), MesherKind::rect_diff,
      {0.4, 0.2, 0.1}, Vec2(-0.25, -0.25));
  add("sharpness", sharpness_domain(0.1), MesherKind::rect_diff, {0.4, 0.2, 0.1}, Vec2(0, 1));
  add("triangle_disk",
      one_hole(ConvexShape::polygon({{0, 0}, {10, 0}, {5, 8}}), ConvexShape::disk({5, 2}, 1.2)), MesherKind::star,
      {0.4, 0.2, 0.1});
  {
    std::vector<Vec2> hex;
    for (int i = 0; i < 6; ++i) hex.emplace_back(3 * std::cos(kPi * i / 3), 3 * std::sin(kPi * i / 3));
    add("hexagon_quad",
        one_hole(ConvexShape::polygon(hex), ConvexShape::polygon({{-0.6, -0.4}, {0.8, -0.2}, {0.5, 0.7}, {-0.7, 0.5}})),
        MesherKind::star, {0.2, 0.1, 0.05}, Vec2(0, 0));
  }
  add("rounded_disk", one_hole(ConvexShape::rounded({{-1, -1}, {1, -1}, {1, 1}, {-1, 1}}, 1), ConvexShape::disk({0, 0}, 1.2)),
      MesherKind::star, {0.2, 0.1, 0.05});
  {
    PlanarDomain d;
    d.outer = rect(-2, -2, 2, 2);
    d.holes = {ConvexShape::disk({-0.8, 0}, 0.3), ConvexShape::disk({0.8, 0}, 0.3)};
    add("two_equal_disks", d, MesherKind::block, {0.1, 0.05, 0.025});
    d.holes.push_back(ConvexShape::disk({0, 1.3}, 0.3));
    add("three_equal_disks", d, MesherKind::block, {0.1, 0.05, 0.025});
  }
  {
    Scenario poles = load_scenario(kSource + "/scenarios/three_poles.json");
    add("three_poles", poles.domain, MesherKind::block, poles.ladder);
  }

  std::set<std::string> geometries, covered;
  int failures = 0;
  double worst = std::numeric_limits<double>::infinity();
  std::string worst_at, failed;
  for (const auto& [sc, label] : suite) {
    geometries.insert(sc.name);
    try {
      const Verification v = verify(sc);
      for (const auto& e : v.report.bounds) {
        if (!e.applicable) continue;
        covered.insert(e.name);
        if (!e.pass) {
          ++failures;
          failed += fmt::format(" {}:{}", label, e.name);
        }
        if (e.rhs > 0 && e.margin < worst) {
          worst = e.margin;
          worst_at = label + ":" + e.name;
        }
      }
    } catch (const Error& ex) {
      ++failures;
      failed += fmt::format(" {}:error({})", label, ex.what());
    }
  }
  const std::set<std::string> wanted = {"jfa", "thm1a", "thm1b", "multi", "punctured", "equal_disks", "starlike"};
  std::string missing;
  for (const auto& n : wanted)
    if (!covered.count(n)) missing += " " + n;
  const bool ok = failures == 0 && geometries.size() >= 10 && missing.empty();
  std::string d = fmt::format("{} geometries x 2 fluxes, {} failing bounds, smallest margin {:.3f} ({})",
                              geometries.size(), failures, worst, worst_at);
  if (!failed.empty()) d += "; failed:" + failed;
  if (!missing.empty()) d += "; never applicable:" + missing;
  return {ok, d};
}

Outcome ac6() {
  json doc = {{"name", "flux_sweep"},
              {"domain", domain_to_json(one_hole(ConvexShape::disk({0, 0}, 2), ConvexShape::disk({0, 0}, 1)))},
              {"potential", potential_to_json(pole({0, 0}, 0.5))},
              {"mesher", "polar"},
              {"resolution", {0.0625}},
              {"sweep", {{"axis", "flux"}, {"values", {0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1}}}}};
  const Scenario sc = scenario_from_json(doc);
  const auto pts = run_sweep(sc, 2);
  std::size_t best = 0;
  double sym = 0;
  bool all_ok = true;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    all_ok = all_ok && pts[i].ok;
    if (pts[i].ladder.lambda.value > pts[best].ladder.lambda.value) best = i;
    if (!std::isnan(pts[i].symmetry_residual)) sym = std::max(sym, pts[i].symmetry_residual);
  }
  const bool zeros = pts.front().ladder.lambda.value == 0 && pts.back().ladder.lambda.value == 0;
  const bool ok = all_ok && pts.size() == 11 && std::abs(pts[best].x - 0.5) < 1e-12 && sym <= 1e-6 && zeros;
  return {ok, fmt::format("argmax at flux {} (lambda {:.6f}), max symmetry residual {:.2e}, zeros at 0 and 1: {}",
                          pts[best].x, pts[best].ladder.lambda.value, sym, zeros ? "yes" : "no")};
}

Outcome ac7() {
  bool ok = true;
  std::string d;
  for (const auto& [name, dom] :
       std::vector<std::pair<std::string, PlanarDomain>>{
           {"square_in_square", one_hole(rect(-2, -2, 2, 2), rect(-1, -1, 1, 1))},
           {"triangle_disk", one_hole(ConvexShape::polygon({{0, 0}, {10, 0}, {5, 8}}), ConvexShape::disk({5, 2}, 1.2))}}) {
    const AnnuliPartition p = annuli_partition(dom);
    const double F = area(dom.outer), D = diameter(dom.outer), P = perimeter(dom.outer);
    bool good = p.n == static_cast<int>(std::ceil(p.B / p.beta)) && p.n <= 2 * p.B / p.beta &&
                static_cast<int>(p.pieces.size()) == p.n;
    double beta_dev = 0, r1 = 1, r2 = 1, perim = 0;
    for (const auto& piece : p.pieces) {
      beta_dev = std::max(beta_dev, std::abs(piece.width_min - p.beta));
      perim = std::max(perim, piece.outer_perimeter / P);
      for (const auto& w : wedge_report(piece, dom.outer)) {
        if (w.type == VertexType::parallel_mixed) r1 = std::min(r1, w.ratio);
        if (w.type == VertexType::cut_locus) r2 = std::min(r2, w.ratio);
      }
    }
    good = good && beta_dev <= 1e-3 && perim <= 1 + 1e-12 && r1 >= 1 / std::sqrt(2.0) - 1e-9 &&
           r2 >= F / (4 * D * D) - 1e-12;
    ok = ok && good;
    d += fmt::format("{}: n={} 2B/beta={:.3f} |beta_k-beta|<={:.1e} max|dF_k|/|dF|={:.3f} type1>={:.3f} type2>={:.3f} "
                     "(>= {:.3f}); ",
                     name, p.n, 2 * p.B / p.beta, beta_dev, perim, r1, r2, F / (4 * D * D));
  }
  for (const auto& [name, path] : std::vector<std::pair<std::string, std::string>>{
           {"two_disks", kSource + "/scenarios/two_disks.json"}, {"two_holes", kSource + "/tests/data/two_holes.json"}}) {
    const PlanarDomain dom = load_domain(path);
    const WidthReport w = widths(dom);
    double worst_perim = 0, worst_m = std::numeric_limits<double>::infinity();
    bool good = true;
    for (const Cell& c : cells(dom)) {
      const double bound = 2 * w.B / w.beta * (c.inner_perimeter + 2 * kPi * w.B);
      const double m = star_cosine(dom, c);
      worst_perim = std::max(worst_perim, c.perimeter / bound);
      worst_m = std::min(worst_m, m / (w.beta / (2 * w.B)));
      good = good && c.perimeter <= bound && m >= w.beta / (2 * w.B);
    }
    ok = ok && good;
    d += fmt::format("{} cells: max |dF_j|/bound={:.3f} min m_j/(beta/2B)={:.3f}; ", name, worst_perim, worst_m);
  }
  return {ok, d};
}

Outcome ac8() {
  PlanarDomain two;
  two.outer = ConvexShape::disk({0, 0}, 2);
  two.holes = {ConvexShape::disk({-0.8, 0}, 0.3), ConvexShape::disk({0.8, 0}, 0.3)};
  const TriMesh m2 = mesh_block(two, 0.05);
  const PartitionCheck dis = partition_eigen_check(m2, uniform_flux(two, 0.5), assign_cells(m2, two), true);

  const PlanarDomain sq = one_hole(rect(-2, -2, 2, 2), rect(-1, -1, 0.5, 0.5));
  const AnnuliPartition part = annuli_partition(sq);
  const TriMesh m3 = mesh_rect_diff({-2, -2, 2, 2}, {-1, -1, 0.5, 0.5}, 0.05);
  const PartitionCheck ov = partition_eigen_check(m3, pole({-0.25, -0.25}, 0.5), assign_annuli(m3, part), false);
  const double best = *std::min_element(ov.piece_lambda.begin(), ov.piece_lambda.end());
  const bool exists = ov.lambda >= best / ov.n * 0.95;
  const bool ok = dis.n == 2 && dis.holds && ov.n == 3 && ov.holds && exists;
  return {ok, fmt::format("disjoint: lambda={:.5f} >= min_j lambda_j={:.5f} (-5%); overlapping n={}: lambda={:.5f}, "
                          "lambda_k/n={:.5f} for the heaviest piece, {:.5f} for the lowest",
                          dis.lambda, dis.rhs, ov.n, ov.lambda, ov.rhs, best / ov.n)};
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

Outcome ac9() {
  const fs::path root = fs::temp_directory_path() / fmt::format("fluxgap_acceptance_{}", ::getpid());
  bool ok = true;
  int files = 0;
  std::string d;
  const std::vector<std::pair<std::string, std::string>> runs = {{"verify", "sharpness.json"},
                                                                 {"verify", "two_disks.json"},
                                                                 {"sweep", "three_poles.json"}};
  for (int rep = 0; rep < 2; ++rep) {
    const fs::path dir = root / std::to_string(rep);
    fs::create_directories(dir);
    for (const auto& [cmd, file] : runs) {
      const std::string line = fmt::format("\"{}\" {} --config \"{}/scenarios/{}\" --jobs {} --out-dir \"{}\" > \"{}\" 2>&1",
                                           FLUXGAP_CLI, cmd, kSource, file, rep + 1, dir.string(),
                                           (dir / (file + ".log")).string());
      if (std::system(line.c_str()) != 0) {
        ok = false;
        d += "command failed: " + cmd + " " + file + "; ";
      }
    }
  }
  for (const auto& entry : fs::directory_iterator(root / "0")) {
    const auto ext = entry.path().extension();
    if (ext != ".csv" && ext != ".json") continue;
    ++files;
    const std::string a = slurp(entry.path()), b = slurp(root / "1" / entry.path().filename());
    if (a.empty() || a != b) {
      ok = false;
      d += "differs: " + entry.path().filename().string() + "; ";
    }
  }
  fs::remove_all(root);
  ok = ok && files == 3;
  return {ok, d + fmt::format("{} CSV/JSON outputs byte-identical across two CLI runs (jobs 1 vs 2)", files)};
}

}  // namespace

int main() {
  init_logging();
  spdlog::set_level(spdlog::level::err);
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"AC1 integer flux gives lambda1 = 0", ac1},
      {"AC2 annulus agrees with the radial oracle", ac2},
      {"AC3 thin annulus limit", ac3},
      {"AC4 sharpness sandwich", ac4},
      {"AC5 lower bounds hold on the geometry suite", ac5},
      {"AC6 half-flux maximality and flux symmetry", ac6},
      {"AC7 partition and cell invariants", ac7},
      {"AC8 partition eigenvalue inequalities", ac8},
      {"AC9 deterministic outputs", ac9},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failed += !o.pass;
    std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << name << " -- " << o.detail << fmt::format(" [{:.1f}s]", secs)
              << std::endl;
  }
  std::cout << (failed ? fmt::format("{} criteria failed", failed) : std::string("all criteria passed")) << std::endl;
  return failed ? 1 : 0;
}
