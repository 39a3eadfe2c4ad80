#pragma once

#include <cstddef>
#include <span>

#include "densek/graph.hpp"
#include "densek/penalty.hpp"

namespace densek {

/// Induced-edge density of a selection. For unipartite selections
/// density = 2 * edges_inside / (k (k - 1)); for bipartite selections
/// density = edges_inside / (k1 k2). k2 is 0 for unipartite reports.
struct DensityReport {
  double density = 0.0;
  std::size_t edges_inside = 0;
  std::size_t k1 = 0;
  std::size_t k2 = 0;
};

/// True when `s` is 0/1 with exactly k ones.
bool is_selection(std::span<const std::uint8_t> s, std::size_t k) noexcept;

DensityReport edge_density(const Graph& g, std::span<const std::uint8_t> selection,
                           std::size_t k);

DensityReport bipartite_density(const BipartiteGraph& bg,
                                std::span<const std::uint8_t> x,
                                std::span<const std::uint8_t> y, std::size_t k1,
                                std::size_t k2);

}  // namespace densek
