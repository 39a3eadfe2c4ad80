#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "densek/graph.hpp"

namespace densek {

/// Binary selection vector (0/1 per vertex).
using Selection = std::vector<std::uint8_t>;

/// Cardinality target and penalty weight of the penalized objective
///   F(x) = -x^T A x + lambda * (1^T x - 2 S_k(x)).
struct PenaltyContext {
  std::size_t k = 1;
  double lambda = 0.0;

  /// Throws InvalidArgument unless 1 <= k <= n and lambda is finite, >= 0.
  void validate(std::size_t n) const;
};

/// Heap-based top-k selection, O(n log k). Membership is decided by value;
/// among equal values at the k-th rank the lower index wins. Every routine in
/// this header uses this rule, so they agree on which coordinates are "top".
/// Holds a scratch buffer so repeated calls do not allocate.
class TopKSelector {
 public:
  /// Indices of the k largest entries, ascending by index.
  std::span<const std::size_t> select(std::span<const double> x, std::size_t k);
  /// Result of the most recent select().
  std::span<const std::size_t> last() const noexcept { return indices_; }

 private:
  struct Entry {
    double value;
    std::size_t index;
  };
  std::vector<Entry> heap_;
  std::vector<std::size_t> indices_;
};

std::vector<std::size_t> top_k_indices(std::span<const double> x, std::size_t k);

/// S_k(x): sum of the k largest entries.
double max_k_sum(std::span<const double> x, std::size_t k);

/// Error bound psi(x) = k + 1^T x - 2 S_k(x) on the unit hypercube. It
/// upper-bounds the distance to the set of k-sparse binary vectors and is
/// zero exactly on that set. Entries outside [0, 1] (beyond 1e-12) throw.
double error_bound_psi(std::span<const double> x, std::size_t k);

struct SelectionProjection {
  double distance = 0.0;
  Selection nearest;
};

/// Euclidean projection onto {0,1}^n with exactly k ones: the k largest
/// coordinates go to 1.
SelectionProjection dist_to_selection(std::span<const double> x, std::size_t k);

struct PenalizedValue {
  double F = 0.0;  ///< f + lambda * h
  double f = 0.0;  ///< -x^T A x
  double h = 0.0;  ///< 1^T x - 2 S_k(x), equal to psi(x) - k
};

PenalizedValue objective_F(const Graph& g, std::span<const double> x,
                           const PenaltyContext& ctx);

/// Global minimizer over [0,1]^n of 0.5||z - x||^2 + mu (1^T x - 2 S_k(x)):
/// the k largest entries of z move up by mu, the rest move down by mu, and
/// everything is clipped to [0, 1]. z may lie outside the box.
std::vector<double> prox_h(std::span<const double> z, std::size_t k, double mu);
void prox_h(std::span<const double> z, std::size_t k, double mu,
            std::span<double> out, TopKSelector& selector);

/// Value of the prox objective 0.5||z - x||^2 + mu (1^T x - 2 S_k(x)).
double prox_objective(std::span<const double> z, std::span<const double> x,
                      std::size_t k, double mu);

/// Nearest k-sparse binary vector (the `nearest` part of dist_to_selection).
Selection round_to_selection(std::span<const double> x, std::size_t k);

}  // namespace densek
