#pragma once

// Node-parallel evaluation with an order-fixed reduction. Values are written
// to a per-node buffer and summed in node-index order afterwards, so serial
// and parallel runs give bit-identical results.

#include <cstddef>
#include <functional>

#include "confmass/geometry.hpp"

namespace confmass {

enum class Execution { serial, parallel };
enum class Summation { pairwise, compensated };

/// integrand(q, out) writes `components` values for node q into out.
using NodeIntegrand = std::function<void(std::size_t, double*)>;

/// Per-component sums over nodes 0..count-1.
Vector integrate_nodes(std::size_t count, int components, const NodeIntegrand& integrand, Summation summation,
                       Execution execution);

/// Runs body(i) for i in [0, count); the first exception thrown is rethrown.
void for_each_index(std::size_t count, const std::function<void(std::size_t)>& body, Execution execution);

}  // namespace confmass
