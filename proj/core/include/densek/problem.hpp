#pragma once

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include "densek/graph.hpp"
#include "densek/penalty.hpp"

namespace densek {

/// A contiguous block of the optimization variable that carries its own
/// cardinality constraint.
struct Segment {
  std::size_t offset = 0;
  std::size_t length = 0;
  std::size_t k = 0;
};

/// The quadratic selection problem  min -a^T A a  s.t. each segment of `a` is
/// a binary vector with exactly `k` ones. DkS has one segment over all
/// vertices; the bipartite variant stacks a = (x, y) with the block matrix
/// [[0, B], [B^T, 0]] and has one segment per side.
///
/// Holds a non-owning reference: the graph must outlive the problem.
class SelectionProblem {
 public:
  static SelectionProblem dks(const Graph& g, std::size_t k);
  static SelectionProblem dkbs(const BipartiteGraph& bg, std::size_t k1,
                               std::size_t k2);

  std::size_t dimension() const noexcept { return dim_; }
  std::span<const Segment> segments() const noexcept { return segments_; }
  bool bipartite() const noexcept {
    return std::holds_alternative<const BipartiteGraph*>(graph_);
  }
  const Graph& graph() const { return *std::get<const Graph*>(graph_); }
  const BipartiteGraph& bipartite_graph() const {
    return *std::get<const BipartiteGraph*>(graph_);
  }

  /// Sum of all cardinality targets.
  std::size_t total_k() const noexcept;

  /// out = A a.
  void adjacency(std::span<const double> a, std::span<double> out) const;
  /// out = A a, plus a^T out, ||a - ref||^2 and ||a||^2 from the same sweep.
  SpmvStats adjacency_with_stats(std::span<const double> a, std::span<const double> ref,
                                 std::span<double> out) const;
  /// Inflated power-iteration estimate of ||A||_2.
  double spectral_norm(const PowerIterationOptions& opts) const;

  /// Segmented prox: each segment gets prox_h with its own k. Returns the
  /// penalty h (summed over segments) evaluated at the output.
  double prox(std::span<const double> z, double mu, std::span<double> out,
              TopKSelector& selector) const;
  /// Penalty h = sum over segments of (1^T x_s - 2 S_{k_s}(x_s)).
  double penalty(std::span<const double> a) const;
  /// Segmented rounding to the nearest feasible binary vector.
  Selection round(std::span<const double> a) const;
  /// Euclidean distance to the nearest feasible binary vector.
  double distance_to_selection(std::span<const double> a) const;

 private:
  std::variant<const Graph*, const BipartiteGraph*> graph_;
  std::vector<Segment> segments_;
  std::size_t dim_ = 0;
};

}  // namespace densek
