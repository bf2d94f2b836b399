#pragma once

#include <span>
#include <string>

#include "edvrp/model.hpp"

namespace edvrp::svg {

/// Farm map: field polygons, dashed working lines, depot star, entrance
/// markers (white = entrance 0, black = entrance 1) and one colored route per
/// machine. Idle legs follow shortest paths on the farm's navigation graph
/// when the instance carries field geometry and are straight otherwise.
/// Throws DataError when the solution does not match the instance.
std::string render_routes(const Instance& inst, const Solution& sol);

/// Best objective per iteration as a line chart. The raw values are also
/// listed in the data-values attribute of the curve.
std::string render_convergence(std::span<const double> best_per_iteration, char objective);

}  // namespace edvrp::svg
