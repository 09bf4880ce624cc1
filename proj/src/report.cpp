#include "fluxgap/bounds.hpp"

#include <json.hpp>
#include <spdlog/fmt/fmt.h>

#include <cmath>

namespace fluxgap {

namespace {

using nlohmann::ordered_json;

// JSON has no infinity; margins against a zero rhs are written as a string.
ordered_json number(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return nullptr;
  return x > 0 ? "inf" : "-inf";
}

std::string fmt_num(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return fmt::format("{:.6g}", x);
}

}  // namespace

std::string report_json(const BoundReport& r) {
  const Invariants& v = r.inv;
  ordered_json inv;
  inv["area_F"] = v.area_F;
  inv["perimeter_F"] = v.perimeter_F;
  inv["perimeter_Omega"] = v.perimeter_Omega;
  inv["diameter_F"] = v.diameter_F;
  inv["beta"] = v.beta;
  inv["B"] = v.B;
  inv["beta_lo"] = v.beta_lo;
  inv["B_hi"] = v.B_hi;
  inv["beta_tilde"] = v.beta_tilde;
  inv["inj"] = v.inj;
  inv["n_samples"] = v.n_samples;
  inv["n_holes"] = v.n_holes;
  inv["fluxes"] = v.fluxes;
  inv["gamma"] = v.gamma;
  inv["d"] = v.d;
  if (v.beta_P) inv["beta_P"] = *v.beta_P;
  if (v.B_P) inv["B_P"] = *v.B_P;
  if (v.sharpness_eps) inv["sharpness_eps"] = *v.sharpness_eps;

  ordered_json lam;
  lam["computed"] = r.lambda.computed;
  lam["value"] = r.lambda.value;
  lam["finest"] = r.lambda.finest;
  lam["h"] = r.lambda.h;
  lam["mesher"] = r.lambda.mesher;
  lam["residual"] = r.lambda.residual;
  lam["dof"] = r.lambda.dof;
  lam["extrapolated"] = r.lambda.extrapolated;
  lam["order"] = number(r.lambda.order);

  ordered_json bounds = ordered_json::array();
  for (const BoundEntry& e : r.bounds) {
    ordered_json b;
    b["name"] = e.name;
    b["rhs"] = e.rhs;
    b["applicable"] = e.applicable;
    b["computed"] = e.computed;
    ordered_json hs = ordered_json::array();
    for (const Hypothesis& h : e.hypotheses) hs.push_back({{"text", h.text}, {"ok", h.ok}});
    b["hypotheses"] = hs;
    if (e.paper_stated) b["paper_stated"] = *e.paper_stated;
    if (!e.note.empty()) b["note"] = e.note;
    b["margin"] = number(e.margin);
    b["pass"] = e.pass;
    bounds.push_back(b);
  }

  ordered_json terms = ordered_json::array();
  for (const StarlikeTerm& s : r.starlike_terms)
    terms.push_back({{"hole", s.hole},
                     {"perimeter", s.perimeter},
                     {"beta", s.beta},
                     {"B", s.B},
                     {"m", s.m},
                     {"d", s.d},
                     {"rhs", s.rhs}});

  ordered_json doc;
  doc["invariants"] = inv;
  doc["lambda"] = lam;
  doc["bounds"] = bounds;
  if (!terms.empty()) doc["starlike_terms"] = terms;
  doc["all_pass"] = r.all_pass();
  return doc.dump(2) + "\n";
}

std::string report_table(const BoundReport& r) {
  const Invariants& v = r.inv;
  std::string out;
  out += fmt::format("|F| = {}  |dF| = {}  |dOmega| = {}  D(F) = {}\n", fmt_num(v.area_F), fmt_num(v.perimeter_F),
                     fmt_num(v.perimeter_Omega), fmt_num(v.diameter_F));
  out += fmt::format("beta = {} [{}]  B = {} [{}]  beta~ = {}  Inj = {}  samples = {}\n", fmt_num(v.beta),
                     fmt_num(v.beta_lo), fmt_num(v.B), fmt_num(v.B_hi), fmt_num(v.beta_tilde), fmt_num(v.inj),
                     v.n_samples);
  if (v.beta_P) out += fmt::format("beta(P) = {}  B(P) = {}\n", fmt_num(*v.beta_P), fmt_num(*v.B_P));
  out += fmt::format("gamma = {}  d = {}\n", fmt_num(v.gamma), fmt_num(v.d));
  if (r.lambda.computed)
    out += fmt::format("lambda1 = {} ({}, h = {}, dof = {}{})\n", fmt_num(r.lambda.value), r.lambda.mesher,
                       fmt_num(r.lambda.h), r.lambda.dof,
                       r.lambda.extrapolated ? fmt::format(", extrapolated, order {:.3g}", r.lambda.order) : "");
  else
    out += "lambda1 = not computed\n";
  out += fmt::format("\n{:<12} {:>14} {:>12} {:>10} {:>6}\n", "bound", "rhs", "margin", "applies", "pass");
  for (const BoundEntry& e : r.bounds) {
    out += fmt::format("{:<12} {:>14} {:>12} {:>10} {:>6}\n", e.name, e.computed ? fmt_num(e.rhs) : "-",
                       e.computed ? fmt_num(e.margin) : "-", e.applicable ? "yes" : "no",
                       !e.applicable ? "-" : (e.pass ? "PASS" : "FAIL"));
    for (const Hypothesis& h : e.hypotheses)
      if (!h.ok) out += fmt::format("{:<12}   unmet: {}\n", "", h.text);
    if (e.paper_stated) out += fmt::format("{:<12}   paper-stated: {}\n", "", fmt_num(*e.paper_stated));
    if (!e.note.empty()) out += fmt::format("{:<12}   {}\n", "", e.note);
  }
  return out;
}

}  // namespace fluxgap
