#include "edvrp/svg.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <vector>

#include "edvrp/instgen.hpp"

namespace edvrp::svg {

namespace {

constexpr const char* kPalette[] = {"#e6194b", "#3cb44b", "#4363d8", "#f58231", "#911eb4",
                                    "#42d4f4", "#f032e6", "#9a6324", "#469990", "#808000"};

struct Frame {
  double min_x, min_y, scale, margin, width, height;

  double x(double v) const { return margin + (v - min_x) * scale; }
  double y(double v) const { return height - margin - (v - min_y) * scale; }
};

Frame make_frame(const std::vector<Point>& pts, double target_width) {
  double min_x = std::numeric_limits<double>::infinity(), min_y = min_x;
  double max_x = -min_x, max_y = -min_x;
  for (const auto& p : pts) {
    min_x = std::min(min_x, p.x);
    min_y = std::min(min_y, p.y);
    max_x = std::max(max_x, p.x);
    max_y = std::max(max_y, p.y);
  }
  const double span = std::max({max_x - min_x, max_y - min_y, 1e-9});
  Frame f{min_x, min_y, target_width / span, 40.0, 0.0, 0.0};
  f.width = (max_x - min_x) * f.scale + 2 * f.margin;
  f.height = (max_y - min_y) * f.scale + 2 * f.margin;
  return f;
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(2) << v;
  return os.str();
}

std::string star(double cx, double cy, double r) {
  std::ostringstream os;
  for (int k = 0; k < 10; ++k) {
    const double rad = k % 2 == 0 ? r : r * 0.45;
    const double a = -std::numbers::pi / 2 + k * std::numbers::pi / 5;
    os << (k ? " " : "") << fmt(cx + rad * std::cos(a)) << "," << fmt(cy + rad * std::sin(a));
  }
  return os.str();
}

void check_match(const Instance& inst, const Solution& sol) {
  if (sol.routes.size() != inst.machines.size())
    throw DataError("solution has " + std::to_string(sol.routes.size()) + " routes but instance has " +
                    std::to_string(inst.machines.size()) + " machines");
  std::vector<int> seen(static_cast<std::size_t>(inst.line_count()) + 1, 0);
  for (const auto& r : sol.routes)
    for (const auto& g : r) {
      if (g.line < 1 || g.line > inst.line_count())
        throw DataError("solution references line " + std::to_string(g.line) + " not in instance");
      ++seen[static_cast<std::size_t>(g.line)];
    }
  for (int l = 1; l <= inst.line_count(); ++l)
    if (seen[static_cast<std::size_t>(l)] != 1)
      throw DataError("solution does not cover line " + std::to_string(l) + " exactly once");
}

}  // namespace

std::string render_routes(const Instance& inst, const Solution& sol) {
  check_match(inst, sol);
  const auto graph = instgen::farm_graph(inst);

  std::vector<Point> all{inst.depot.xy};
  for (const auto& f : inst.fields) all.insert(all.end(), f.polygon.begin(), f.polygon.end());
  for (const auto& ln : inst.lines) {
    all.push_back(ln.e0);
    all.push_back(ln.e1);
  }
  const Frame fr = make_frame(all, 760.0);
  const double legend_h = 18.0 * static_cast<double>(sol.routes.size()) + 10.0;

  std::ostringstream os;
  os << R"(<?xml version="1.0" encoding="UTF-8"?>)" << "\n";
  os << R"(<svg xmlns="http://www.w3.org/2000/svg" width=")" << fmt(fr.width) << R"(" height=")"
     << fmt(fr.height + legend_h) << R"(" viewBox="0 0 )" << fmt(fr.width) << " "
     << fmt(fr.height + legend_h) << R"(">)" << "\n";
  os << R"(<rect width="100%" height="100%" fill="#ffffff"/>)" << "\n";

  os << R"(<g id="fields">)" << "\n";
  for (const auto& f : inst.fields) {
    os << R"(<polygon fill="#cfe8c4" stroke="#557a46" stroke-width="1" points=")";
    for (std::size_t k = 0; k < f.polygon.size(); ++k)
      os << (k ? " " : "") << fmt(fr.x(f.polygon[k].x)) << "," << fmt(fr.y(f.polygon[k].y));
    os << R"("/>)" << "\n";
  }
  os << "</g>\n";

  auto route_points = [&](const Route& r) {
    std::vector<Point> pts{inst.depot.xy};
    int at_vertex = graph ? graph->entrances[0][0] : -1;
    Point at = inst.depot.xy;
    auto travel_to = [&](int node, int entrance, Point target) {
      if (graph) {
        const int v = graph->entrances[static_cast<std::size_t>(node)][static_cast<std::size_t>(entrance)];
        const auto path = instgen::shortest_path(graph->graph, at_vertex, v);
        for (std::size_t k = 1; k < path.size(); ++k)
          pts.push_back(graph->graph.vertices[static_cast<std::size_t>(path[k])]);
        at_vertex = v;
      } else {
        pts.push_back(target);
      }
      at = target;
    };
    for (const auto& g : r) {
      const auto& ln = inst.line(g.line);
      travel_to(g.line, g.entrance.index(), ln.entrance_point(g.entrance));
      const Entrance exit = g.entrance.flipped();
      pts.push_back(ln.entrance_point(exit));
      if (graph)
        at_vertex = graph->entrances[static_cast<std::size_t>(g.line)][static_cast<std::size_t>(exit.index())];
      at = ln.entrance_point(exit);
    }
    if (!r.empty()) travel_to(0, 0, inst.depot.xy);
    return pts;
  };

  os << R"(<g id="routes" fill="none" stroke-width="2" stroke-linejoin="round" opacity="0.85">)" << "\n";
  for (std::size_t k = 0; k < sol.routes.size(); ++k) {
    const auto pts = route_points(sol.routes[k]);
    os << R"(<path id="route-)" << (k + 1) << R"(" stroke=")" << kPalette[k % std::size(kPalette)]
       << R"(" d=")";
    for (std::size_t i = 0; i < pts.size(); ++i)
      os << (i ? " L " : "M ") << fmt(fr.x(pts[i].x)) << " " << fmt(fr.y(pts[i].y));
    os << R"("/>)" << "\n";
  }
  os << "</g>\n";

  os << R"(<g id="lines" stroke="#333333" stroke-width="1.2" stroke-dasharray="5,3">)" << "\n";
  for (const auto& ln : inst.lines)
    os << R"(<line x1=")" << fmt(fr.x(ln.e0.x)) << R"(" y1=")" << fmt(fr.y(ln.e0.y)) << R"(" x2=")"
       << fmt(fr.x(ln.e1.x)) << R"(" y2=")" << fmt(fr.y(ln.e1.y)) << R"("/>)" << "\n";
  os << "</g>\n";

  os << R"(<g id="entrances" stroke="#000000" stroke-width="0.8">)" << "\n";
  for (const auto& ln : inst.lines) {
    os << R"(<circle cx=")" << fmt(fr.x(ln.e0.x)) << R"(" cy=")" << fmt(fr.y(ln.e0.y))
       << R"(" r="3" fill="#ffffff"/>)" << "\n";
    os << R"(<circle cx=")" << fmt(fr.x(ln.e1.x)) << R"(" cy=")" << fmt(fr.y(ln.e1.y))
       << R"(" r="3" fill="#000000"/>)" << "\n";
  }
  os << "</g>\n";

  os << R"(<polygon id="depot" fill="#f2c200" stroke="#000000" stroke-width="0.8" points=")"
     << star(fr.x(inst.depot.xy.x), fr.y(inst.depot.xy.y), 10.0) << R"("/>)" << "\n";

  os << R"(<g id="legend" font-family="sans-serif" font-size="12">)" << "\n";
  for (std::size_t k = 0; k < sol.routes.size(); ++k) {
    const double y = fr.height + 14.0 + 18.0 * static_cast<double>(k);
    os << R"(<rect x="10" y=")" << fmt(y - 9) << R"(" width="14" height="10" fill=")"
       << kPalette[k % std::size(kPalette)] << R"("/>)";
    os << R"(<text x="30" y=")" << fmt(y) << R"(">M)" << (k + 1) << ": " << sol.routes[k].size()
       << " lines";
    if (k < sol.per_machine.size())
      os << ", idle " << fmt(sol.per_machine[k].s_k) << " m, " << fmt(sol.per_machine[k].t_k) << " s";
    os << "</text>\n";
  }
  os << "</g>\n</svg>\n";
  return os.str();
}

std::string render_convergence(std::span<const double> values, char objective) {
  constexpr double w = 640.0, h = 360.0, ml = 70.0, mr = 20.0, mt = 20.0, mb = 40.0;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (double v : values) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (values.empty()) lo = hi = 0.0;
  if (hi - lo < 1e-12) {
    hi += 0.5;
    lo -= 0.5;
  }
  const double n = std::max<double>(1.0, static_cast<double>(values.size()) - 1.0);
  auto px = [&](std::size_t i) { return ml + (w - ml - mr) * static_cast<double>(i) / n; };
  auto py = [&](double v) { return mt + (h - mt - mb) * (hi - v) / (hi - lo); };

  std::ostringstream os;
  os << R"(<?xml version="1.0" encoding="UTF-8"?>)" << "\n";
  os << R"(<svg xmlns="http://www.w3.org/2000/svg" width="640" height="360" viewBox="0 0 640 360">)"
     << "\n";
  os << R"(<rect width="100%" height="100%" fill="#ffffff"/>)" << "\n";
  os << R"(<g font-family="sans-serif" font-size="11">)" << "\n";
  os << R"(<line x1=")" << ml << R"(" y1=")" << (h - mb) << R"(" x2=")" << (w - mr) << R"(" y2=")"
     << (h - mb) << R"(" stroke="#000000"/>)" << "\n";
  os << R"(<line x1=")" << ml << R"(" y1=")" << mt << R"(" x2=")" << ml << R"(" y2=")" << (h - mb)
     << R"(" stroke="#000000"/>)" << "\n";
  os << R"(<text x=")" << ml << R"(" y=")" << (h - 10) << R"(">iteration</text>)" << "\n";
  os << R"(<text x="4" y=")" << (mt + 10) << R"(">)" << fmt(hi) << "</text>\n";
  os << R"(<text x="4" y=")" << (h - mb) << R"(">)" << fmt(lo) << "</text>\n";
  os << R"(<text x=")" << (w - 160) << R"(" y=")" << (mt + 10) << R"(">best objective ()" << objective
     << ")</text>\n";
  os << "</g>\n";

  os << R"(<polyline id="best-objective" fill="none" stroke="#4363d8" stroke-width="1.5" data-values=")";
  os << std::setprecision(17);
  for (std::size_t i = 0; i < values.size(); ++i) os << (i ? " " : "") << values[i];
  os << R"(" points=")";
  for (std::size_t i = 0; i < values.size(); ++i)
    os << (i ? " " : "") << fmt(px(i)) << "," << fmt(py(values[i]));
  os << R"("/>)" << "\n</svg>\n";
  return os.str();
}

}  // namespace edvrp::svg
