#pragma once

#include <chrono>
#include <cstddef>
#include <span>
#include <vector>

#include "densek/graph.hpp"
#include "densek/penalty.hpp"

namespace densek {

struct BaselineResult {
  /// k ones for DkS; stacked (x, y) with k1 + k2 ones for the bipartite oracle.
  Selection selection;
  double density = 0.0;
  std::size_t edges_inside = 0;
  std::chrono::duration<double> wall_time{0};
  std::size_t iterations = 0;  ///< TPM only
};

/// Min-degree peeling: repeatedly delete a vertex of minimum current degree
/// (lowest index on ties) until k vertices remain.
BaselineResult greedy_dks(const Graph& g, std::size_t k);

/// Truncated power method: x <- normalize(truncate_k(A x)), stopping when a
/// support repeats or after max_iter iterations. Empty x0 means 1/n.
BaselineResult tpm_dks(const Graph& g, std::size_t k, std::size_t max_iter = 200,
                       std::span<const double> x0 = {});

inline constexpr double kBruteForceLimit = 1e7;

/// Exhaustive search over all k-subsets; lexicographically smallest
/// maximizer. Throws when C(n, k) exceeds kBruteForceLimit.
BaselineResult brute_force_dks(const Graph& g, std::size_t k);

/// Exhaustive search over row and column subsets; lexicographically smallest
/// (rows, columns) maximizer of x^T B y.
BaselineResult brute_force_dkbs(const BipartiteGraph& bg, std::size_t k1,
                                std::size_t k2);

/// C(n, k) as a double, saturating at +inf.
double binomial(std::size_t n, std::size_t k) noexcept;

}  // namespace densek
