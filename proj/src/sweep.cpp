#include "fluxgap/errors.hpp"
#include "fluxgap/harness.hpp"

#include <spdlog/fmt/fmt.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace fluxgap {

namespace {

std::string num(double x) {
  if (std::isnan(x)) return "";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return fmt::format("{:.17g}", x);
}

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

}  // namespace

Scenario at_axis(const Scenario& sc, double x) {
  Scenario s = sc;
  switch (sc.axis) {
    case SweepAxis::none:
      throw ValidationError("scenario has no sweep axis");
    case SweepAxis::flux:
      for (auto& p : s.potential.poles) p.flux = x;
      break;
    case SweepAxis::epsilon:
      s.domain = sharpness_domain(x);
      break;
    case SweepAxis::delta:
      if (!sc.domain.has_point_holes()) throw ValidationError("delta sweep needs point holes");
      s.domain.pole_radius = x;
      break;
  }
  s.domain.validate();
  s.potential.validate_against(s.domain);
  return s;
}

std::vector<SweepPoint> run_sweep(const Scenario& sc, int jobs) {
  if (sc.axis == SweepAxis::none) throw ValidationError("scenario has no sweep axis");
  std::vector<SweepPoint> pts(sc.grid.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < pts.size(); i = next++) {
      SweepPoint& p = pts[i];
      p.x = sc.grid[i];
      try {
        const Scenario s = at_axis(sc, p.x);
        const Verification v = verify(s);
        p.ladder = v.ladder;
        p.report = v.report;
        p.excision = v.excision;
        p.ok = true;
      } catch (const std::exception& e) {
        p.error = e.what();
        spdlog::warn("{} = {}: {}", axis_name(sc.axis), p.x, e.what());
      }
    }
  };
  const int n = std::clamp(jobs, 1, std::max(1, static_cast<int>(pts.size())));
  std::vector<std::thread> pool;
  for (int i = 1; i < n; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::stable_sort(pts.begin(), pts.end(), [](const SweepPoint& a, const SweepPoint& b) { return a.x < b.x; });
  if (sc.axis == SweepAxis::flux) {
    // Fixed-mesh comparison: same ladder, same finest mesh.
    for (auto& p : pts) {
      if (!p.ok) continue;
      for (const auto& q : pts)
        if (q.ok && std::abs(q.x - (1 - p.x)) < 1e-9)
          p.symmetry_residual = std::abs(p.ladder.lambda.finest - q.ladder.lambda.finest);
    }
  }
  return pts;
}

std::string sweep_csv(const Scenario& sc, const std::vector<SweepPoint>& pts) {
  std::vector<std::string> names;
  for (const auto& p : pts)
    for (const auto& b : p.report.bounds)
      if (std::find(names.begin(), names.end(), b.name) == names.end()) names.push_back(b.name);

  std::string out = "axis,x,ok,mesher,h,dof,residual,lambda1,lambda1_finest,extrapolated,order,beta_lo,B_hi,gamma";
  for (const auto& n : names) out += ",rhs_" + n + ",margin_" + n;
  out += ",excision,symmetry_residual,error\n";
  for (const auto& p : pts) {
    const LambdaInfo& l = p.ladder.lambda;
    const Invariants& v = p.report.inv;
    out += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{}", axis_name(sc.axis), num(p.x), p.ok ? 1 : 0,
                       p.ok ? l.mesher : "", p.ok ? num(l.h) : "", p.ok ? std::to_string(l.dof) : "",
                       p.ok ? num(l.residual) : "", p.ok ? num(l.value) : "", p.ok ? num(l.finest) : "",
                       p.ok ? (l.extrapolated ? "1" : "0") : "", p.ok ? num(l.order) : "", p.ok ? num(v.beta_lo) : "",
                       p.ok ? num(v.B_hi) : "", p.ok ? num(v.gamma) : "");
    for (const auto& n : names) {
      const auto it = std::find_if(p.report.bounds.begin(), p.report.bounds.end(),
                                   [&](const BoundEntry& b) { return b.name == n; });
      if (it == p.report.bounds.end() || !it->applicable) out += ",,";
      else out += "," + num(it->rhs) + "," + num(it->margin);
    }
    out += "," + num(p.excision) + "," + num(p.symmetry_residual) + "," + (p.error.empty() ? "" : quoted(p.error));
    out += "\n";
  }
  return out;
}

}  // namespace fluxgap
