#pragma once

// Random farm generation. A farm is a set of non-overlapping rotated
// rectangular fields filled with parallel working lines whose entrances sit on
// two opposite field edges. Idle travel happens on a navigation graph made of
// field boundaries (headlands) and one straight road per field from the depot
// to the closest boundary midpoint. Line interiors are never traversable.

#include <array>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "edvrp/model.hpp"

namespace edvrp::instgen {

struct Range {
  double lo = 0.0;
  double hi = 0.0;
};

struct GenParams {
  int n_fields = 3;
  int n_machines = 3;
  int target_nodes = 40;  // lines + depot
  double line_spacing_m = 10.0;
  Range line_length_m{100.0, 300.0};
  Range vw{2.5, 3.0};
  Range vv{4.5, 6.0};
  Range cw{0.007, 0.01};
  Range cv{0.005, 0.008};
  std::uint64_t seed = 0;
};

/// Throws DataError when params break a generator invariant.
void validate_params(const GenParams& p);

struct NavGraph {
  struct Edge {
    int u = 0;
    int v = 0;
    double length = 0.0;
  };

  std::vector<Point> vertices;
  std::vector<Edge> edges;

  int add_vertex(Point p);
  /// Undirected edge weighted by the Euclidean length of the segment.
  void add_edge(int u, int v);

  std::vector<std::vector<std::pair<int, double>>> adjacency() const;
};

/// Graph vertex of entrance a of node i, for nodes 0..L. Both depot entries
/// refer to the same vertex.
using EntranceVertices = std::vector<std::array<int, 2>>;

/// Shortest distances from every entrance vertex, OpenMP-parallel over
/// sources. d[i][j][a][b] for i < j is taken from the source (i, a) and mirrored,
/// so reversal symmetry is exact. Throws DataError if an entrance is unreachable.
DistanceTensor shortest_distances(const NavGraph& graph, const EntranceVertices& entrances);

/// Single-threaded reference for shortest_distances.
DistanceTensor shortest_distances_serial(const NavGraph& graph, const EntranceVertices& entrances);

/// Vertex sequence of a shortest path (inclusive), empty if unreachable.
std::vector<int> shortest_path(const NavGraph& graph, int from, int to);

struct FarmGraph {
  NavGraph graph;
  EntranceVertices entrances;
};

/// Rebuilds the navigation graph of a farm from its geometry (depot, field
/// polygons, line entrances). Returns nullopt for instances without fields.
std::optional<FarmGraph> farm_graph(const Instance& inst);

Instance generate(const GenParams& params);

/// Three parallel lines of one field under a headland slanted at theta from
/// the line direction, one machine, depot just above the leftmost line.
/// Travel is free (straight lines) inside the open field.
Instance fixture_slanted_headland(double theta);

/// Cosine of theta below which fixture_slanted_headland's optimum stops being the sorted
/// alternating sweep.
inline constexpr double kSlantSwitchCosine = 0.25;

/// Three lines swept left to right, one machine, a short road from the depot
/// to the bottom of the first line and a longer one to its top. Greedy
/// entrance choice takes the short road and ends up strictly worse.
Instance fixture_greedy_trap();

/// Machine parameters of the four-machine case-study fleet.
std::vector<Machine> case_study_fleet();

/// A three-field farm of about 40 nodes with the case-study fleet.
Instance case_study_instance();

}  // namespace edvrp::instgen
