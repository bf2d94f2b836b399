#include "edvrp/model.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

namespace edvrp {

double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

DistanceTensor::DistanceTensor(int line_count)
    : line_count_(line_count),
      data_(static_cast<std::size_t>(line_count + 1) * static_cast<std::size_t>(line_count + 1) * 4,
            0.0) {
  if (line_count < 0) throw DataError("tensor line count must be non-negative");
}

DistanceTensor::DistanceTensor(int line_count, std::vector<double> flat)
    : line_count_(line_count), data_(std::move(flat)) {
  const auto n = static_cast<std::size_t>(line_count + 1);
  if (line_count < 0 || data_.size() != n * n * 4) {
    std::ostringstream msg;
    msg << "tensor data has " << data_.size() << " entries, expected " << n * n * 4;
    throw DataError(msg.str());
  }
}

namespace {

void add(std::vector<Violation>& out, std::string field, std::string rule, std::string detail) {
  out.push_back({std::move(field), std::move(rule), std::move(detail)});
}

std::string node_label(const char* prefix, int idx) {
  return std::string(prefix) + "[" + std::to_string(idx) + "]";
}

}  // namespace

std::vector<Violation> validate_instance(const Instance& inst) {
  std::vector<Violation> out;
  const int L = inst.line_count();
  const int M = inst.machine_count();

  if (L < 1) add(out, "lines", "count", "at least one working line is required");
  if (M < 1) add(out, "machines", "count", "at least one machine is required");

  std::set<int> field_ids;
  for (const auto& f : inst.fields) field_ids.insert(f.id);

  std::map<int, std::vector<int>> ordinals_by_field;
  for (int k = 0; k < L; ++k) {
    const auto& ln = inst.lines[static_cast<std::size_t>(k)];
    const auto label = node_label("lines", k);
    if (ln.id != k + 1)
      add(out, label + ".id", "sequential_id", "expected id " + std::to_string(k + 1));
    if (!(ln.length_m > 0.0) || !std::isfinite(ln.length_m))
      add(out, label + ".length_m", "positive_length", "length must be finite and > 0");
    if (ln.e0 == ln.e1) add(out, label + ".e0", "distinct_entrances", "e0 and e1 coincide");
    if (!inst.fields.empty() && !field_ids.contains(ln.field_id))
      add(out, label + ".field_id", "field_reference",
          "field " + std::to_string(ln.field_id) + " does not exist");
    ordinals_by_field[ln.field_id].push_back(ln.ordinal);
  }
  for (auto& [field, ords] : ordinals_by_field) {
    std::sort(ords.begin(), ords.end());
    for (std::size_t k = 0; k < ords.size(); ++k) {
      if (ords[k] != static_cast<int>(k)) {
        add(out, "fields[" + std::to_string(field) + "]", "contiguous_ordinals",
            "ordinals must be exactly 0.." + std::to_string(ords.size() - 1));
        break;
      }
    }
  }

  for (int k = 0; k < M; ++k) {
    const auto& m = inst.machines[static_cast<std::size_t>(k)];
    const auto label = node_label("machines", k);
    if (m.id != k + 1)
      add(out, label + ".id", "sequential_id", "expected id " + std::to_string(k + 1));
    if (!(m.vw > 0.0)) add(out, label + ".vw", "positive_speed", "working speed must be > 0");
    if (!(m.vv > 0.0)) add(out, label + ".vv", "positive_speed", "idle speed must be > 0");
    if (!(m.cw >= 0.0)) add(out, label + ".cw", "nonnegative_rate", "fuel rate must be >= 0");
    if (!(m.cv >= 0.0)) add(out, label + ".cv", "nonnegative_rate", "fuel rate must be >= 0");
  }

  const auto& d = inst.tensor;
  if (d.line_count() != L) {
    add(out, "tensor.L", "covers_nodes",
        "tensor has L=" + std::to_string(d.line_count()) + " but instance has " +
            std::to_string(L) + " lines");
    return out;
  }
  const int n = d.node_count();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
          const double v = d.at(i, j, a, b);
          std::ostringstream idx;
          idx << "tensor[" << i << "][" << j << "][" << a << "][" << b << "]";
          if (!std::isfinite(v) || v < 0.0) {
            add(out, idx.str(), "finite_nonnegative", "distance must be finite and >= 0");
          } else if (i < j && v != d.at(j, i, b, a)) {
            add(out, idx.str(), "reversal_symmetry", "differs from its reversed entry");
          }
        }
      }
    }
  }
  for (int j = 1; j < n; ++j) {
    for (int b = 0; b < 2; ++b) {
      if (d.at(0, j, 0, b) != d.at(0, j, 1, b)) {
        add(out, "tensor[0][" + std::to_string(j) + "]", "depot_entrances_coincide",
            "depot entrances 0 and 1 give different distances");
        break;
      }
    }
  }
  return out;
}

std::optional<std::string> chromosome_problem(const Chromosome& chrom, int line_count,
                                              int machine_count) {
  if (static_cast<int>(chrom.tour.size()) != line_count)
    return "tour has " + std::to_string(chrom.tour.size()) + " genes, expected " +
           std::to_string(line_count);
  if (static_cast<int>(chrom.cuts.size()) != machine_count - 1)
    return "chromosome has " + std::to_string(chrom.cuts.size()) + " cuts, expected " +
           std::to_string(machine_count - 1);
  std::vector<char> seen(static_cast<std::size_t>(line_count) + 1, 0);
  for (const auto& g : chrom.tour) {
    if (g.line < 1 || g.line > line_count)
      return "line id " + std::to_string(g.line) + " is out of range";
    auto& s = seen[static_cast<std::size_t>(g.line)];
    if (s) return "line " + std::to_string(g.line) + " appears more than once";
    s = 1;
  }
  int prev = 0;
  for (int c : chrom.cuts) {
    if (c < prev || c > line_count)
      return "cuts must be non-decreasing within [0, " + std::to_string(line_count) + "]";
    prev = c;
  }
  return std::nullopt;
}

std::vector<Route> decode(const Chromosome& chrom, const Instance& inst) {
  if (auto problem = chromosome_problem(chrom, inst.line_count(), inst.machine_count()))
    throw DataError("malformed chromosome: " + *problem);
  std::vector<Route> routes;
  routes.reserve(static_cast<std::size_t>(chrom.segment_count()));
  for (int k = 0; k < chrom.segment_count(); ++k) {
    auto seg = chrom.segment(k);
    routes.emplace_back(seg.begin(), seg.end());
  }
  return routes;
}

Chromosome encode(std::span<const Route> routes) {
  Chromosome c;
  for (std::size_t k = 0; k < routes.size(); ++k) {
    if (k > 0) c.cuts.push_back(static_cast<int>(c.tour.size()));
    c.tour.insert(c.tour.end(), routes[k].begin(), routes[k].end());
  }
  return c;
}

char objective_code(Objective o) {
  switch (o) {
    case Objective::TotalIdleDistance:
      return 's';
    case Objective::Makespan:
      return 't';
    case Objective::TotalFuel:
      return 'c';
  }
  return '?';
}

Objective objective_from_code(char code) {
  switch (code) {
    case 's':
      return Objective::TotalIdleDistance;
    case 't':
      return Objective::Makespan;
    case 'c':
      return Objective::TotalFuel;
    default:
      throw DataError(std::string("unknown objective '") + code + "' (expected s, t or c)");
  }
}

Objective objective_from_string(const std::string& s) {
  if (s.size() != 1) throw DataError("unknown objective '" + s + "' (expected s, t or c)");
  return objective_from_code(s[0]);
}

}  // namespace edvrp
