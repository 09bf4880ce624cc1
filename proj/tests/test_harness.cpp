#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fluxgap/errors.hpp"
#include "fluxgap/harness.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

using namespace fluxgap;
using doctest::Approx;

namespace {

const std::string kData = std::string(FLUXGAP_SOURCE_DIR) + "/tests/data/";
const bool kLogging = (init_logging(), true);

json annulus_doc() {
  return parse_json(R"({
    "name": "annulus",
    "domain": {"outer": {"type": "disk", "center": [0, 0], "radius": 2},
               "holes": [{"type": "disk", "center": [0, 0], "radius": 1}]},
    "potential": {"poles": [{"at": [0, 0], "flux": 0.5}]},
    "mesher": "polar",
    "resolution": [0.25],
    "sweep": {"axis": "flux", "values": [0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1]}
  })");
}

}  // namespace

TEST_CASE("parse errors carry the line number") {
  try {
    read_json_file(kData + "malformed.json");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 4);
  }
  CHECK_THROWS_AS(read_json_file(kData + "does_not_exist.json"), Error);
}

TEST_CASE("documents round trip") {
  const PlanarDomain d = load_domain(kData + "two_holes.json");
  CHECK(d.n_holes() == 2);
  const PlanarDomain r = domain_from_json(domain_to_json(d));
  CHECK(domain_to_json(r) == domain_to_json(d));
  CHECK(r.area() == Approx(d.area()));

  PlanarDomain p;
  p.outer = ConvexShape::rounded({{0, 0}, {4, 0}, {4, 3}}, 0.5);
  p.holes = {ConvexShape::point({2.5, 1})};
  p.pole_radius = 0.1;
  CHECK(domain_to_json(domain_from_json(domain_to_json(p))) == domain_to_json(p));

  ClosedPotential A;
  A.poles = {{{1, 2}, 0.25}, {{-1, 0.5}, 1.0 / 3}};
  const ClosedPotential B = potential_from_json(potential_to_json(A));
  REQUIRE(B.poles.size() == 2);
  CHECK(B.poles[1].flux == A.poles[1].flux);
  CHECK(B.poles[1].at == A.poles[1].at);

  CHECK_THROWS_AS(shape_from_json(parse_json(R"({"type": "ellipse"})")), ValidationError);
  CHECK_THROWS_AS(shape_from_json(parse_json(R"({"type": "disk", "center": [0, 0]})")), ValidationError);
}

TEST_CASE("scenario validation") {
  const Scenario sc = scenario_from_json(annulus_doc());
  CHECK(sc.mesher == MesherKind::polar);
  CHECK(sc.axis == SweepAxis::flux);
  CHECK(sc.grid.size() == 11);
  CHECK(sc.hash.size() == 16);
  CHECK(scenario_from_json(annulus_doc()).hash == sc.hash);

  json missing = annulus_doc();
  missing.erase("resolution");
  CHECK_THROWS_AS(scenario_from_json(missing), ValidationError);
  json rising = annulus_doc();
  rising["resolution"] = {0.1, 0.2};
  CHECK_THROWS_AS(scenario_from_json(rising), ValidationError);
  json unsorted = annulus_doc();
  unsorted["sweep"]["values"] = {0.5, 0.1};
  CHECK(scenario_from_json(unsorted).grid == std::vector<double>{0.1, 0.5});
  unsorted["sweep"]["values"] = {0.5, 0.1, 0.5};
  CHECK_THROWS_AS(scenario_from_json(unsorted), ValidationError);
  unsorted["sweep"]["values"] = {0.5, "x"};
  CHECK_THROWS_AS(scenario_from_json(unsorted), ValidationError);
  json mesher = annulus_doc();
  mesher["mesher"] = "voronoi";
  CHECK_THROWS_AS(scenario_from_json(mesher), ValidationError);

  const Scenario file = load_scenario(std::string(FLUXGAP_SOURCE_DIR) + "/scenarios/sharpness.json");
  CHECK(file.excision);
  CHECK(file.ladder.size() == 3);
}

TEST_CASE("automatic mesher choice") {
  const Scenario sc = scenario_from_json(annulus_doc());
  CHECK(resolve_mesher(sc.domain, MesherKind::automatic) == MesherKind::polar);
  CHECK(resolve_mesher(sharpness_domain(0.1), MesherKind::automatic) == MesherKind::rect_diff);
  const PlanarDomain two = load_domain(kData + "two_holes.json");
  CHECK(resolve_mesher(two, MesherKind::automatic) == MesherKind::staircase);
  const PlanarDomain tri = load_domain(kData + "triangle_disk.json");
  CHECK(resolve_mesher(tri, MesherKind::automatic) == MesherKind::block);
  CHECK(build_mesh(tri, MesherKind::star, 0.5).mesher == "star");
}

TEST_CASE("sweep output is sorted, symmetric and independent of the job count") {
  const Scenario sc = scenario_from_json(annulus_doc());
  const auto a = run_sweep(sc, 1);
  const auto b = run_sweep(sc, 2);
  CHECK(sweep_csv(sc, a) == sweep_csv(sc, b));
  REQUIRE(a.size() == 11);
  int best = 0;
  for (int i = 0; i < 11; ++i) {
    CHECK(a[i].ok);
    if (i) CHECK(a[i].x > a[i - 1].x);
    if (a[i].ladder.lambda.value > a[best].ladder.lambda.value) best = i;
    CHECK(a[i].symmetry_residual <= 1e-6);
  }
  CHECK(a[best].x == Approx(0.5));
  CHECK(a[0].ladder.lambda.value == 0);
  CHECK(a[10].ladder.lambda.value == 0);

  const std::string csv = sweep_csv(sc, a);
  std::istringstream lines(csv);
  std::string header;
  std::getline(lines, header);
  CHECK(header.find("mesher") != std::string::npos);
  CHECK(header.find("residual") != std::string::npos);
  CHECK(header.find(",h,") != std::string::npos);
}

TEST_CASE("a failing sweep point does not stop the sweep") {
  json doc = annulus_doc();
  doc["sweep"] = {{"axis", "epsilon"}, {"values", {0.1, 0.2}}};
  doc["mesher"] = "rect_diff";
  doc["resolution"] = {0.5};
  doc["domain"] = domain_to_json(sharpness_domain(0.1));
  doc["potential"] = {{"poles", {{{"at", {0, 1}}, {"flux", 0.5}}}}};
  const Scenario sc = scenario_from_json(doc);
  const auto pts = run_sweep(sc, 1);
  REQUIRE(pts.size() == 2);
  for (const auto& p : pts) CHECK(p.ok);
  CHECK(at_axis(sc, 0.2).domain.holes[0].core()[0].y() == Approx(0.2));

  doc["mesher"] = "polar";  // cannot mesh rectangles
  const auto bad = run_sweep(scenario_from_json(doc), 1);
  REQUIRE(bad.size() == 2);
  for (const auto& p : bad) {
    CHECK_FALSE(p.ok);
    CHECK_FALSE(p.error.empty());
  }
}

TEST_CASE("verification and figures") {
  json doc = annulus_doc();
  doc.erase("sweep");
  doc["resolution"] = {0.25, 0.125, 0.0625};
  const Scenario sc = scenario_from_json(doc);
  const Verification v = verify(sc);
  CHECK(v.report.all_pass());
  CHECK(v.ladder.levels.size() == 3);
  CHECK(v.ladder.lambda.extrapolated);
  CHECK(v.ladder.lambda.value == Approx(annulus_oracle(1, 2, 0.5)).epsilon(0.01));
  const std::string j = verification_json(sc, v);
  CHECK(j == verification_json(sc, verify(sc)));
  CHECK(parse_json(j)["report"]["all_pass"] == true);

  const auto part = annuli_partition(load_domain(kData + "triangle_disk.json"));
  std::vector<std::vector<WedgeVertex>> wedges;
  for (const auto& piece : part.pieces) wedges.push_back(wedge_report(piece, part.domain.outer));
  const std::string svg = annuli_svg(part, wedges);
  CHECK(svg.find("viewBox=\"0 0 1000 1000\"") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);

  const PlanarDomain two = load_domain(kData + "two_holes.json");
  const auto cs = cells(two);
  const Rect box{-3, -2, 3, 2};
  const auto curve = equidistant_curve(two.holes[0], two.holes[1], box, 100);
  CHECK(cells_svg(two, cs, {curve}).find("<path") != std::string::npos);
}

TEST_CASE("tables") {
  const std::string t = invariants_table(sharpness_domain(0.1));
  CHECK(t.find("area") != std::string::npos);
  CHECK(t.find("32") != std::string::npos);
  const std::string o = oracle_table(1, 2, 0.0);
  CHECK(o.find("min") != std::string::npos);
  CHECK(o.find(" 0\n") != std::string::npos);
  CHECK_THROWS_AS(oracle_table(2, 1, 0.5), ValidationError);
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
}

TEST_CASE("sharpness excision is below eps / 10") {
  for (double eps : {0.4, 0.1}) {
    const TriMesh m = sharpness_mesh(eps, 0.2);
    ClosedPotential A;
    A.poles = {{{0, 1}, 0.5}};
    const double u = sharpness_excision(m, A, eps);
    CHECK(u <= eps / 10 * 1.1);
    CHECK(u >= solve_problem({&m, A}).lambda1());
  }
}
