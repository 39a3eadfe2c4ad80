#include <string>

#include "densek/error.hpp"
#include "densek/metrics.hpp"

namespace densek {

bool is_selection(std::span<const std::uint8_t> s, std::size_t k) noexcept {
  std::size_t ones = 0;
  for (auto v : s) {
    if (v > 1) return false;
    ones += v;
  }
  return ones == k;
}

DensityReport edge_density(const Graph& g, std::span<const std::uint8_t> selection,
                           std::size_t k) {
  if (k < 2) throw InvalidArgument("density undefined for k < 2");
  if (selection.size() != g.n() || !is_selection(selection, k)) {
    throw InvalidArgument("selection is not a 0/1 vector with exactly " +
                          std::to_string(k) + " ones");
  }
  std::size_t twice = 0;
  for (NodeId u = 0; u < g.n(); ++u) {
    if (!selection[u]) continue;
    for (NodeId v : g.neighbors(u)) twice += selection[v];
  }
  DensityReport r;
  r.edges_inside = twice / 2;
  r.density = static_cast<double>(twice) / static_cast<double>(k * (k - 1));
  r.k1 = k;
  return r;
}

DensityReport bipartite_density(const BipartiteGraph& bg,
                                std::span<const std::uint8_t> x,
                                std::span<const std::uint8_t> y, std::size_t k1,
                                std::size_t k2) {
  if (k1 < 1 || k2 < 1) throw InvalidArgument("density undefined for empty sides");
  if (x.size() != bg.n1() || !is_selection(x, k1) || y.size() != bg.n2() ||
      !is_selection(y, k2)) {
    throw InvalidArgument("infeasible bipartite selection");
  }
  std::size_t edges = 0;
  for (NodeId i = 0; i < bg.n1(); ++i) {
    if (!x[i]) continue;
    for (NodeId j : bg.row(i)) edges += y[j];
  }
  DensityReport r;
  r.edges_inside = edges;
  r.density = static_cast<double>(edges) / static_cast<double>(k1 * k2);
  r.k1 = k1;
  r.k2 = k2;
  return r;
}

}  // namespace densek
