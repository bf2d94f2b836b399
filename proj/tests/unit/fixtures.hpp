#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "edvrp/evaluate.hpp"
#include "edvrp/instgen.hpp"
#include "edvrp/model.hpp"
#include "edvrp/rng.hpp"

namespace fx {

using namespace edvrp;

inline Machine m1() { return Machine{1, 2.5, 4.5, 0.008, 0.006}; }

inline Gene g(int line, int entrance) { return Gene{line, Entrance(entrance)}; }

/// L lines stacked side by side at 10 m spacing, straight-line travel, M
/// identical machines. Distances are Euclidean between entrance points, so the
/// tensor is symmetric and satisfies the triangle inequality.
inline Instance planar(int L, int M, double length = 50.0) {
  Instance inst;
  inst.depot.xy = {0.0, -20.0};
  for (int k = 1; k <= L; ++k) {
    WorkingLine ln;
    ln.id = k;
    ln.length_m = length;
    ln.field_id = 0;
    ln.ordinal = k - 1;
    ln.e0 = {10.0 * k, 0.0};
    ln.e1 = {10.0 * k, length};
    inst.lines.push_back(ln);
  }
  for (int k = 1; k <= M; ++k) {
    Machine m = m1();
    m.id = k;
    inst.machines.push_back(m);
  }
  inst.tensor = DistanceTensor(L);
  auto pt = [&](int node, int e) {
    return node == 0 ? inst.depot.xy : inst.lines[static_cast<std::size_t>(node - 1)].entrance_point(Entrance(e));
  };
  for (int i = 0; i <= L; ++i)
    for (int j = 0; j <= L; ++j)
      if (i != j)
        for (int a = 0; a < 2; ++a)
          for (int b = 0; b < 2; ++b) inst.tensor.set(i, j, a, b, distance(pt(i, a), pt(j, b)));
  return inst;
}

/// Generated farm with small defaults for fast tests.
inline Instance farm(std::uint64_t seed, int fields = 2, int machines = 3, int nodes = 16) {
  instgen::GenParams p;
  p.n_fields = fields;
  p.n_machines = machines;
  p.target_nodes = nodes;
  p.seed = seed;
  return instgen::generate(p);
}

inline bool valid(const Chromosome& c, const Instance& inst) {
  return !chromosome_problem(c, inst.line_count(), inst.machine_count()).has_value();
}

}  // namespace fx
