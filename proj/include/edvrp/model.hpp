#pragma once

// Domain types for entrance-dependent vehicle routing in farms: the task graph
// (depot, working lines, machine fleet, entrance distance tensor), the
// two-part chromosome and decoded solutions.
//
// Units are fixed: meters, seconds, liters.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace edvrp {

/// Raised when input data (instance, chromosome, file) breaks a model rule.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

double distance(Point a, Point b);

/// Binary entrance selector of a node. The exit of a working line is always
/// the complement of the entrance it was entered through.
class Entrance {
 public:
  constexpr Entrance() = default;
  constexpr explicit Entrance(int v) : value_(static_cast<std::uint8_t>(v)) {
    if (v != 0 && v != 1) throw DataError("entrance must be 0 or 1");
  }

  constexpr int index() const { return value_; }
  constexpr Entrance flipped() const { return Entrance(1 - value_); }

  friend constexpr auto operator<=>(const Entrance&, const Entrance&) = default;

 private:
  std::uint8_t value_ = 0;
};

/// One element of a tour: a working line and the entrance it is entered by.
struct Gene {
  int line = 0;
  Entrance entrance;

  friend constexpr auto operator<=>(const Gene&, const Gene&) = default;
};

using Route = std::vector<Gene>;

struct WorkingLine {
  int id = 0;  // node index 1..L
  double length_m = 0.0;
  int field_id = 0;
  int ordinal = 0;  // position within the field's parallel sweep
  Point e0;
  Point e1;

  Point entrance_point(Entrance e) const { return e.index() == 0 ? e0 : e1; }
};

/// Node 0. Both of its entrances share the same coordinates and it has no length.
struct Depot {
  Point xy;
};

struct Field {
  int id = 0;
  std::vector<Point> polygon;
};

struct Machine {
  int id = 0;
  double vw = 0.0;  // working speed, m/s
  double vv = 0.0;  // idle speed, m/s
  double cw = 0.0;  // working fuel rate, L/s
  double cv = 0.0;  // idle fuel rate, L/s
};

/// Shortest traversable distance d[i][j][a][b] between entrance a of node i and
/// entrance b of node j, for nodes 0..L (node 0 is the depot). Stored flat,
/// row-major, at index (i*(L+1)+j)*4 + a*2 + b. Diagonal entries are unused.
class DistanceTensor {
 public:
  DistanceTensor() = default;
  explicit DistanceTensor(int line_count);
  DistanceTensor(int line_count, std::vector<double> flat);

  int line_count() const { return line_count_; }
  int node_count() const { return line_count_ + 1; }

  double at(int i, int j, int a, int b) const { return data_[offset(i, j, a, b)]; }
  double at(int i, int j, Entrance a, Entrance b) const {
    return data_[offset(i, j, a.index(), b.index())];
  }
  void set(int i, int j, int a, int b, double value) { data_[offset(i, j, a, b)] = value; }

  /// Writes value at (i,j,a,b) and its reversal (j,i,b,a).
  void set_symmetric(int i, int j, int a, int b, double value) {
    set(i, j, a, b, value);
    set(j, i, b, a, value);
  }

  std::span<const double> flat() const { return data_; }

 private:
  std::size_t offset(int i, int j, int a, int b) const {
    return (static_cast<std::size_t>(i) * static_cast<std::size_t>(node_count()) +
            static_cast<std::size_t>(j)) * 4 +
           static_cast<std::size_t>(a * 2 + b);
  }

  int line_count_ = 0;
  std::vector<double> data_;
};

struct Instance {
  Depot depot;
  std::vector<Field> fields;  // optional geometry; empty for hand-built tensors
  std::vector<WorkingLine> lines;  // lines[k].id == k+1
  std::vector<Machine> machines;   // machines[k].id == k+1
  DistanceTensor tensor;

  int line_count() const { return static_cast<int>(lines.size()); }
  int machine_count() const { return static_cast<int>(machines.size()); }
  const WorkingLine& line(int id) const { return lines.at(static_cast<std::size_t>(id - 1)); }
};

struct Violation {
  std::string field;
  std::string rule;
  std::string detail;
};

/// Checks every instance invariant. An empty result means the instance is valid.
std::vector<Violation> validate_instance(const Instance& inst);

/// Tour plus M-1 non-decreasing cut positions in [0, L]. Segment k is
/// tour[cuts[k-1], cuts[k]) with the implicit bounds cuts[-1] = 0 and
/// cuts[M-1] = L, so segments may be empty.
struct Chromosome {
  std::vector<Gene> tour;
  std::vector<int> cuts;

  int segment_count() const { return static_cast<int>(cuts.size()) + 1; }
  int segment_begin(int k) const { return k == 0 ? 0 : cuts[static_cast<std::size_t>(k - 1)]; }
  int segment_end(int k) const {
    return k + 1 == segment_count() ? static_cast<int>(tour.size())
                                    : cuts[static_cast<std::size_t>(k)];
  }
  int segment_size(int k) const { return segment_end(k) - segment_begin(k); }
  std::span<const Gene> segment(int k) const {
    return std::span<const Gene>(tour).subspan(static_cast<std::size_t>(segment_begin(k)),
                                               static_cast<std::size_t>(segment_size(k)));
  }
  std::span<Gene> segment(int k) {
    return std::span<Gene>(tour).subspan(static_cast<std::size_t>(segment_begin(k)),
                                         static_cast<std::size_t>(segment_size(k)));
  }

  friend bool operator==(const Chromosome&, const Chromosome&) = default;
};

/// Describes why chrom is not a valid chromosome for L lines and M machines,
/// or nullopt if it is.
std::optional<std::string> chromosome_problem(const Chromosome& chrom, int line_count,
                                              int machine_count);

/// Splits the tour into per-machine routes. Throws DataError on a malformed chromosome.
std::vector<Route> decode(const Chromosome& chrom, const Instance& inst);

/// Inverse of decode: concatenates routes and records their boundaries as cuts.
Chromosome encode(std::span<const Route> routes);

enum class Objective { TotalIdleDistance, Makespan, TotalFuel };

char objective_code(Objective o);  // 's', 't' or 'c'
Objective objective_from_code(char code);
Objective objective_from_string(const std::string& s);

struct MachineMetrics {
  double s_k = 0.0;    // idle meters
  double s_k_w = 0.0;  // working meters
  double t_k = 0.0;    // seconds
  double c_k_o = 0.0;  // liters
};

struct Aggregate {
  double s_P = 0.0;
  double t_P = 0.0;
  double c_P = 0.0;
};

struct Solution {
  std::vector<Route> routes;
  std::vector<MachineMetrics> per_machine;
  Aggregate aggregate;
  Objective objective = Objective::TotalIdleDistance;
};

}  // namespace edvrp
