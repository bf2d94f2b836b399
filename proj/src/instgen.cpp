#include "edvrp/instgen.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <queue>
#include <string>

#include "edvrp/rng.hpp"

namespace edvrp::instgen {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kFieldGap = 15.0;       // clearance between field bounding circles
constexpr double kDepotClearance = 20.0;  // clearance between depot and a field
constexpr int kPlacementAttempts = 5000;
constexpr double kOnEdgeTolerance = 0.05;

std::vector<double> dijkstra(const std::vector<std::vector<std::pair<int, double>>>& adj,
                             int source, std::vector<int>* parent = nullptr) {
  std::vector<double> dist(adj.size(), kInf);
  if (parent) parent->assign(adj.size(), -1);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[static_cast<std::size_t>(source)] = 0.0;
  pq.emplace(0.0, source);
  while (!pq.empty()) {
    const auto [du, u] = pq.top();
    pq.pop();
    if (du > dist[static_cast<std::size_t>(u)]) continue;
    for (const auto& [v, w] : adj[static_cast<std::size_t>(u)]) {
      const double nd = du + w;
      if (nd < dist[static_cast<std::size_t>(v)]) {
        dist[static_cast<std::size_t>(v)] = nd;
        if (parent) (*parent)[static_cast<std::size_t>(v)] = u;
        pq.emplace(nd, v);
      }
    }
  }
  return dist;
}

/// Source vertex for each (node, entrance) with i < L, i.e. every source whose
/// row is needed to fill the upper triangle.
struct SourceSlot {
  int node;
  int entrance;
};

std::vector<SourceSlot> source_slots(int line_count) {
  std::vector<SourceSlot> slots;
  slots.push_back({0, 0});
  for (int i = 1; i < line_count; ++i) {
    slots.push_back({i, 0});
    slots.push_back({i, 1});
  }
  return slots;
}

void check_entrances(const NavGraph& graph, const EntranceVertices& entrances) {
  if (entrances.empty()) throw DataError("entrance map must contain the depot");
  if (entrances[0][0] != entrances[0][1])
    throw DataError("depot entrances must map to the same vertex");
  for (const auto& e : entrances)
    for (int v : e)
      if (v < 0 || v >= static_cast<int>(graph.vertices.size()))
        throw DataError("entrance vertex out of range");
}

void fill_row(DistanceTensor& d, const EntranceVertices& entrances, const SourceSlot& s,
              const std::vector<double>& dist) {
  for (int j = s.node + 1; j < d.node_count(); ++j) {
    for (int b = 0; b < 2; ++b) {
      const double v = dist[static_cast<std::size_t>(entrances[static_cast<std::size_t>(j)][static_cast<std::size_t>(b)])];
      if (!std::isfinite(v))
        throw DataError("entrance " + std::to_string(b) + " of node " + std::to_string(j) +
                        " is unreachable from node " + std::to_string(s.node));
      d.set_symmetric(s.node, j, s.entrance, b, v);
      if (s.node == 0) d.set_symmetric(0, j, 1, b, v);
    }
  }
}

double point_segment_distance(Point p, Point a, Point b, double* t_out) {
  const double dx = b.x - a.x, dy = b.y - a.y;
  const double len2 = dx * dx + dy * dy;
  double t = len2 > 0.0 ? ((p.x - a.x) * dx + (p.y - a.y) * dy) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  if (t_out) *t_out = t;
  return distance(p, Point{a.x + t * dx, a.y + t * dy});
}

double sample(Rng& rng, const Range& r) { return r.hi > r.lo ? rng.uniform(r.lo, r.hi) : r.lo; }

Point rotate(Point local, double angle, Point center) {
  const double c = std::cos(angle), s = std::sin(angle);
  return {center.x + c * local.x - s * local.y, center.y + s * local.x + c * local.y};
}

Machine table_machine(int id, double vw, double vv, double cw, double cv) {
  return Machine{id, vw, vv, cw, cv};
}

}  // namespace

void validate_params(const GenParams& p) {
  if (p.n_fields < 1) throw DataError("n_fields must be at least 1");
  if (p.n_machines < 1) throw DataError("n_machines must be at least 1");
  if (p.target_nodes < p.n_fields + 1)
    throw DataError("target_nodes must be at least n_fields + 1");
  if (!(p.line_spacing_m > 0.0)) throw DataError("line spacing must be > 0");
  if (!(p.line_length_m.lo > 0.0) || p.line_length_m.hi < p.line_length_m.lo)
    throw DataError("line length range must be positive and ordered");
  for (const Range* r : {&p.vw, &p.vv})
    if (!(r->lo > 0.0) || r->hi < r->lo) throw DataError("speed ranges must be positive and ordered");
  for (const Range* r : {&p.cw, &p.cv})
    if (r->lo < 0.0 || r->hi < r->lo) throw DataError("fuel ranges must be non-negative and ordered");
}

int NavGraph::add_vertex(Point p) {
  vertices.push_back(p);
  return static_cast<int>(vertices.size()) - 1;
}

void NavGraph::add_edge(int u, int v) {
  edges.push_back({u, v, distance(vertices[static_cast<std::size_t>(u)], vertices[static_cast<std::size_t>(v)])});
}

std::vector<std::vector<std::pair<int, double>>> NavGraph::adjacency() const {
  std::vector<std::vector<std::pair<int, double>>> adj(vertices.size());
  for (const auto& e : edges) {
    adj[static_cast<std::size_t>(e.u)].emplace_back(e.v, e.length);
    adj[static_cast<std::size_t>(e.v)].emplace_back(e.u, e.length);
  }
  return adj;
}

DistanceTensor shortest_distances(const NavGraph& graph, const EntranceVertices& entrances) {
  check_entrances(graph, entrances);
  const int L = static_cast<int>(entrances.size()) - 1;
  DistanceTensor d(L);
  const auto adj = graph.adjacency();
  const auto slots = source_slots(L);
  std::vector<std::vector<double>> rows(slots.size());
  const auto n = static_cast<std::ptrdiff_t>(slots.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t s = 0; s < n; ++s) {
    const auto& slot = slots[static_cast<std::size_t>(s)];
    rows[static_cast<std::size_t>(s)] = dijkstra(
        adj, entrances[static_cast<std::size_t>(slot.node)][static_cast<std::size_t>(slot.entrance)]);
  }
  for (std::size_t s = 0; s < slots.size(); ++s) fill_row(d, entrances, slots[s], rows[s]);
  return d;
}

DistanceTensor shortest_distances_serial(const NavGraph& graph, const EntranceVertices& entrances) {
  check_entrances(graph, entrances);
  const int L = static_cast<int>(entrances.size()) - 1;
  DistanceTensor d(L);
  const auto adj = graph.adjacency();
  for (const auto& slot : source_slots(L)) {
    const auto dist = dijkstra(
        adj, entrances[static_cast<std::size_t>(slot.node)][static_cast<std::size_t>(slot.entrance)]);
    fill_row(d, entrances, slot, dist);
  }
  return d;
}

std::vector<int> shortest_path(const NavGraph& graph, int from, int to) {
  std::vector<int> parent;
  const auto dist = dijkstra(graph.adjacency(), from, &parent);
  if (!std::isfinite(dist[static_cast<std::size_t>(to)])) return {};
  std::vector<int> path;
  for (int v = to; v != -1; v = parent[static_cast<std::size_t>(v)]) path.push_back(v);
  std::reverse(path.begin(), path.end());
  return path;
}

std::optional<FarmGraph> farm_graph(const Instance& inst) {
  if (inst.fields.empty()) return std::nullopt;
  FarmGraph fg;
  auto& g = fg.graph;
  const int depot = g.add_vertex(inst.depot.xy);
  fg.entrances.assign(static_cast<std::size_t>(inst.line_count()) + 1, {-1, -1});
  fg.entrances[0] = {depot, depot};

  for (const auto& field : inst.fields) {
    const auto& poly = field.polygon;
    const std::size_t nc = poly.size();
    if (nc < 3) throw DataError("field " + std::to_string(field.id) + " polygon needs 3+ corners");

    // Points on each boundary edge as (t along edge, vertex id).
    std::vector<std::vector<std::pair<double, int>>> on_edge(nc);
    std::vector<int> corner(nc);
    for (std::size_t c = 0; c < nc; ++c) corner[c] = g.add_vertex(poly[c]);
    for (std::size_t c = 0; c < nc; ++c) {
      on_edge[c].emplace_back(0.0, corner[c]);
      on_edge[c].emplace_back(1.0, corner[(c + 1) % nc]);
    }
    for (const auto& ln : inst.lines) {
      if (ln.field_id != field.id) continue;
      for (int e = 0; e < 2; ++e) {
        const Point p = ln.entrance_point(Entrance(e));
        std::size_t best_edge = 0;
        double best_t = 0.0, best_d = kInf;
        for (std::size_t c = 0; c < nc; ++c) {
          double t;
          const double dd = point_segment_distance(p, poly[c], poly[(c + 1) % nc], &t);
          if (dd < best_d) {
            best_d = dd;
            best_edge = c;
            best_t = t;
          }
        }
        const int v = g.add_vertex(p);
        fg.entrances[static_cast<std::size_t>(ln.id)][static_cast<std::size_t>(e)] = v;
        on_edge[best_edge].emplace_back(best_t, v);
        if (best_d > kOnEdgeTolerance) g.add_edge(v, corner[best_edge]);  // off-boundary spur
      }
    }
    int road_end = -1;
    double road_len = kInf;
    for (std::size_t c = 0; c < nc; ++c) {
      const Point a = poly[c], b = poly[(c + 1) % nc];
      const Point mid{(a.x + b.x) / 2.0, (a.y + b.y) / 2.0};
      const int v = g.add_vertex(mid);
      on_edge[c].emplace_back(0.5, v);
      const double len = distance(mid, inst.depot.xy);
      if (len < road_len) {
        road_len = len;
        road_end = v;
      }
    }
    for (auto& pts : on_edge) {
      std::stable_sort(pts.begin(), pts.end(),
                       [](const auto& x, const auto& y) { return x.first < y.first; });
      for (std::size_t k = 1; k < pts.size(); ++k) g.add_edge(pts[k - 1].second, pts[k].second);
    }
    g.add_edge(depot, road_end);
  }
  for (const auto& e : fg.entrances)
    if (e[0] < 0 || e[1] < 0) throw DataError("a working line references no field polygon");
  return fg;
}

Instance generate(const GenParams& params) {
  validate_params(params);
  Rng rng(params.seed);
  Instance inst;
  inst.depot.xy = Point{0.0, 0.0};

  const int total_lines = params.target_nodes - 1;
  std::vector<int> counts(static_cast<std::size_t>(params.n_fields), total_lines / params.n_fields);
  for (int k = 0; k < total_lines % params.n_fields; ++k) ++counts[static_cast<std::size_t>(k)];
  for (int k = params.n_fields - 1; k > 0; --k)
    std::swap(counts[static_cast<std::size_t>(k)], counts[static_cast<std::size_t>(rng.below(k + 1))]);

  struct Placed {
    Point center;
    double radius;
  };
  std::vector<Placed> placed;
  double area = 0.0;
  for (int c : counts) area += (c * params.line_spacing_m + 2 * kFieldGap) *
                               (params.line_length_m.hi + 2 * kFieldGap);
  const double base_half = std::max(100.0, std::sqrt(area));

  int next_id = 1;
  for (int f = 0; f < params.n_fields; ++f) {
    const int count = counts[static_cast<std::size_t>(f)];
    const double width = count * params.line_spacing_m;
    const double height = sample(rng, params.line_length_m);
    const double angle = rng.uniform(0.0, std::numbers::pi);
    const double radius = 0.5 * std::hypot(width, height);

    bool ok = false;
    Point center;
    for (int attempt = 0; attempt < kPlacementAttempts && !ok; ++attempt) {
      const double half = base_half * (1.0 + attempt / 500.0) + radius;
      center = Point{rng.uniform(-half, half), rng.uniform(-half, half)};
      ok = distance(center, inst.depot.xy) > radius + kDepotClearance;
      for (const auto& other : placed)
        ok = ok && distance(center, other.center) > radius + other.radius + kFieldGap;
    }
    if (!ok)
      throw DataError("could not place field " + std::to_string(f) + " without overlap (seed " +
                      std::to_string(params.seed) + ")");
    placed.push_back({center, radius});

    Field field;
    field.id = f;
    for (Point local : {Point{-width / 2, -height / 2}, Point{width / 2, -height / 2},
                        Point{width / 2, height / 2}, Point{-width / 2, height / 2}})
      field.polygon.push_back(rotate(local, angle, center));
    inst.fields.push_back(field);

    for (int k = 0; k < count; ++k) {
      const double x = -width / 2 + params.line_spacing_m * (k + 0.5);
      WorkingLine ln;
      ln.id = next_id++;
      ln.field_id = f;
      ln.ordinal = k;
      ln.e0 = rotate(Point{x, -height / 2}, angle, center);
      ln.e1 = rotate(Point{x, height / 2}, angle, center);
      ln.length_m = distance(ln.e0, ln.e1);
      inst.lines.push_back(ln);
    }
  }

  for (int k = 0; k < params.n_machines; ++k) {
    Machine m;
    m.id = k + 1;
    m.vw = sample(rng, params.vw);
    m.vv = sample(rng, params.vv);
    m.cw = sample(rng, params.cw);
    m.cv = sample(rng, params.cv);
    inst.machines.push_back(m);
  }

  const auto fg = farm_graph(inst);
  inst.tensor = shortest_distances(fg->graph, fg->entrances);
  return inst;
}

Instance fixture_slanted_headland(double theta) {
  if (!(theta > 0.0 && theta < std::numbers::pi / 2))
    throw DataError("fixture_slanted_headland needs 0 < theta < pi/2");
  constexpr double hop = 10.0;    // headland distance between adjacent lines
  constexpr double base = 40.0;   // length of the leftmost line
  constexpr double depot_up = 5.0;
  Instance inst;
  inst.depot.xy = Point{0.0, base + depot_up};
  NavGraph g;
  const int depot = g.add_vertex(inst.depot.xy);
  EntranceVertices ev{{depot, depot}};
  for (int k = 0; k < 3; ++k) {
    WorkingLine ln;
    ln.id = k + 1;
    ln.field_id = 0;
    ln.ordinal = k;
    // entrance 0 on the slanted top headland, entrance 1 on the bottom one
    ln.e0 = Point{k * hop * std::sin(theta), base + k * hop * std::cos(theta)};
    ln.e1 = Point{k * hop * std::sin(theta), 0.0};
    ln.length_m = distance(ln.e0, ln.e1);
    inst.lines.push_back(ln);
    ev.push_back({g.add_vertex(ln.e0), g.add_vertex(ln.e1)});
  }
  // Open field: every pair of points is directly connected, except a line's own two ends.
  for (int u = 0; u < static_cast<int>(g.vertices.size()); ++u)
    for (int v = u + 1; v < static_cast<int>(g.vertices.size()); ++v) {
      const bool same_line = u > 0 && (u - 1) / 2 == (v - 1) / 2;
      if (!same_line) g.add_edge(u, v);
    }
  inst.machines = {case_study_fleet().front()};
  inst.tensor = shortest_distances(g, ev);
  return inst;
}

Instance fixture_greedy_trap() {
  Instance inst;
  inst.depot.xy = Point{-10.0, -5.0};
  NavGraph g;
  const int depot = g.add_vertex(inst.depot.xy);
  EntranceVertices ev{{depot, depot}};
  const double tops[3] = {30.0, 40.0, 50.0};
  for (int k = 0; k < 3; ++k) {
    WorkingLine ln;
    ln.id = k + 1;
    ln.field_id = 0;
    ln.ordinal = k;
    ln.e0 = Point{10.0 * k, 0.0};
    ln.e1 = Point{10.0 * k, tops[k]};
    ln.length_m = distance(ln.e0, ln.e1);
    inst.lines.push_back(ln);
    ev.push_back({g.add_vertex(ln.e0), g.add_vertex(ln.e1)});
  }
  g.add_edge(depot, ev[1][0]);  // short road to the bottom of the first line
  g.add_edge(depot, ev[1][1]);  // longer road to its top
  for (int k = 1; k < 3; ++k) {
    g.add_edge(ev[static_cast<std::size_t>(k)][0], ev[static_cast<std::size_t>(k + 1)][0]);
    g.add_edge(ev[static_cast<std::size_t>(k)][1], ev[static_cast<std::size_t>(k + 1)][1]);
  }
  inst.machines = {case_study_fleet().front()};
  inst.tensor = shortest_distances(g, ev);
  return inst;
}

std::vector<Machine> case_study_fleet() {
  return {
      table_machine(1, 2.5, 4.5, 0.008, 0.006),
      table_machine(2, 3.0, 5.0, 0.007, 0.005),
      table_machine(3, 3.0, 5.5, 0.008, 0.006),
      table_machine(4, 3.0, 6.0, 0.010, 0.008),
  };
}

Instance case_study_instance() {
  GenParams p;
  p.n_fields = 3;
  p.n_machines = 4;
  p.seed = 20240501;
  Instance inst = generate(p);
  inst.machines = case_study_fleet();
  return inst;
}

}  // namespace edvrp::instgen
