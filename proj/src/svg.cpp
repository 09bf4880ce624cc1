#include "fluxgap/harness.hpp"

#include <spdlog/fmt/fmt.h>

#include <algorithm>
#include <limits>

namespace fluxgap {

namespace {

constexpr double kSize = 1000.0;
constexpr double kMargin = 40.0;

const char* const kPalette[] = {"#4e79a7", "#f28e2b", "#59a14f", "#e15759", "#76b7b2",
                                "#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac"};

// Fixed 1000 x 1000 viewport; world coordinates fitted with a margin, y up.
class Canvas {
 public:
  explicit Canvas(const std::vector<Vec2>& extent) {
    Vec2 lo = Vec2::Constant(std::numeric_limits<double>::infinity());
    Vec2 hi = -lo;
    for (const Vec2& p : extent) {
      lo = lo.cwiseMin(p);
      hi = hi.cwiseMax(p);
    }
    const double span = std::max({hi.x() - lo.x(), hi.y() - lo.y(), 1e-12});
    scale_ = (kSize - 2 * kMargin) / span;
    center_ = (lo + hi) / 2;
    body_ = fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{0}\" viewBox=\"0 0 {0} {0}\">\n"
        "<rect width=\"{0}\" height=\"{0}\" fill=\"white\"/>\n",
        kSize);
  }

  Vec2 map(const Vec2& p) const {
    return Vec2(kSize / 2 + scale_ * (p.x() - center_.x()), kSize / 2 - scale_ * (p.y() - center_.y()));
  }

  void path(const std::vector<std::vector<Vec2>>& loops, const std::string& fill, const std::string& stroke,
            double opacity = 0.35) {
    std::string d;
    for (const auto& loop : loops) {
      for (std::size_t i = 0; i < loop.size(); ++i) {
        const Vec2 q = map(loop[i]);
        d += fmt::format("{}{:.2f},{:.2f} ", i == 0 ? "M" : "L", q.x(), q.y());
      }
      if (!loop.empty()) d += "Z ";
    }
    body_ += fmt::format(
        "<path d=\"{}\" fill=\"{}\" fill-opacity=\"{}\" fill-rule=\"evenodd\" stroke=\"{}\" stroke-width=\"1.2\"/>\n", d,
        fill, opacity, stroke);
  }

  void polyline(const std::vector<Vec2>& pts, const std::string& stroke, double width, bool dashed = false) {
    std::string s;
    for (const Vec2& p : pts) {
      const Vec2 q = map(p);
      s += fmt::format("{:.2f},{:.2f} ", q.x(), q.y());
    }
    body_ += fmt::format("<polyline points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"{}\"{}/>\n", s, stroke,
                         width, dashed ? " stroke-dasharray=\"8,5\"" : "");
  }

  void line(const Segment& s, const std::string& stroke) { polyline({s.a, s.b}, stroke, 2.0); }

  void dot(const Vec2& p, const std::string& fill, double r = 5) {
    const Vec2 q = map(p);
    body_ += fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"{}\" fill=\"{}\" stroke=\"black\" stroke-width=\"0.8\"/>\n",
                         q.x(), q.y(), r, fill);
  }

  void text(const Vec2& p, const std::string& s, int size = 16) {
    const Vec2 q = map(p);
    body_ += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" font-family=\"sans-serif\" font-size=\"{}\">{}</text>\n",
                         q.x(), q.y(), size, s);
  }

  std::string finish() { return body_ + "</svg>\n"; }

 private:
  double scale_ = 1.0;
  Vec2 center_ = Vec2::Zero();
  std::string body_;
};

std::string color(std::size_t i) { return kPalette[i % (sizeof kPalette / sizeof kPalette[0])]; }

void draw_holes(Canvas& c, const PlanarDomain& d) {
  c.polyline([&] {
    auto p = boundary_polyline(d.outer, 512);
    p.push_back(p.front());
    return p;
  }(),
             "black", 2.0);
  for (int j = 0; j < d.n_holes(); ++j) {
    const ConvexShape& h = d.holes[static_cast<std::size_t>(j)];
    if (h.kind() == ShapeKind::point && !(d.pole_radius > 0)) {
      c.dot(h.core()[0], "black", 3);
      continue;
    }
    c.path({boundary_polyline(d.hole_region(j), 256)}, "#555555", "black", 0.8);
  }
}

}  // namespace

std::string annuli_svg(const AnnuliPartition& part, const std::vector<std::vector<WedgeVertex>>& wedges) {
  Canvas c(boundary_polyline(part.domain.outer, 512));
  for (std::size_t k = 0; k < part.pieces.size(); ++k) {
    const AnnulusPiece& p = part.pieces[k];
    c.path({p.outer_loop, p.inner_loop}, color(k), color(k), 0.25);
  }
  draw_holes(c, part.domain);
  for (std::size_t k = 0; k < part.pieces.size(); ++k) {
    const AnnulusPiece& p = part.pieces[k];
    c.line(p.width_min_ray, "#1f3fbf");
    c.line(p.width_max_ray, "#bf1f1f");
    if (!p.outer_loop.empty()) c.text(p.outer_loop[p.outer_loop.size() / 8], fmt::format("k={}", p.k), 14);
  }
  const char* type_color[] = {"#ffffff", "#ffd700", "#00c0ff"};
  for (const auto& ws : wedges)
    for (const WedgeVertex& w : ws) c.dot(w.p, type_color[static_cast<int>(w.type)]);
  return c.finish();
}

std::string cells_svg(const PlanarDomain& domain, const std::vector<Cell>& cells,
                      const std::vector<EquidistantCurve>& curves) {
  Canvas c(boundary_polyline(domain.outer, 512));
  for (std::size_t j = 0; j < cells.size(); ++j) c.path({cells[j].boundary}, color(j), color(j), 0.3);
  for (const auto& cu : curves)
    for (const auto& pl : cu.polylines) c.polyline(pl, "#333333", 1.5, true);
  draw_holes(c, domain);
  for (const Cell& cell : cells) {
    const Vec2 at = domain.holes[static_cast<std::size_t>(cell.j)].interior_point();
    c.text(at + Vec2(0.02, 0.02) * diameter(domain.outer), fmt::format("{}", cell.j), 16);
  }
  return c.finish();
}

}  // namespace fluxgap
