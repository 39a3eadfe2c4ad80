#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "densek/error.hpp"
#include "densek/penalty.hpp"

namespace densek {
namespace {

void check_k(std::size_t k, std::size_t n) {
  if (k < 1 || k > n) {
    throw InvalidArgument("k = " + std::to_string(k) + " out of range [1, " +
                          std::to_string(n) + "]");
  }
}

double clip01(double v) { return std::min(1.0, std::max(0.0, v)); }

}  // namespace

void PenaltyContext::validate(std::size_t n) const {
  if (k < 1 || k > n) {
    throw InvalidArgument("k = " + std::to_string(k) + " must satisfy 1 <= k <= n = " +
                          std::to_string(n));
  }
  if (!std::isfinite(lambda) || lambda < 0.0) {
    throw InvalidArgument("penalty weight must be finite and non-negative");
  }
}

std::span<const std::size_t> TopKSelector::select(std::span<const double> x,
                                                  std::size_t k) {
  check_k(k, x.size());
  // `better(a, b)`: a ranks ahead of b. With this comparator the std heap
  // keeps the weakest retained entry at the front.
  auto better = [](const Entry& a, const Entry& b) {
    return a.value > b.value || (a.value == b.value && a.index < b.index);
  };
  heap_.clear();
  heap_.reserve(k);
  for (std::size_t i = 0; i < k; ++i) heap_.push_back({x[i], i});
  std::make_heap(heap_.begin(), heap_.end(), better);
  for (std::size_t i = k; i < x.size(); ++i) {
    const Entry cand{x[i], i};
    if (better(cand, heap_.front())) {
      std::pop_heap(heap_.begin(), heap_.end(), better);
      heap_.back() = cand;
      std::push_heap(heap_.begin(), heap_.end(), better);
    }
  }
  indices_.resize(k);
  for (std::size_t i = 0; i < k; ++i) indices_[i] = heap_[i].index;
  std::sort(indices_.begin(), indices_.end());
  return indices_;
}

std::vector<std::size_t> top_k_indices(std::span<const double> x, std::size_t k) {
  TopKSelector sel;
  auto idx = sel.select(x, k);
  return {idx.begin(), idx.end()};
}

double max_k_sum(std::span<const double> x, std::size_t k) {
  TopKSelector sel;
  std::vector<double> vals;
  vals.reserve(k);
  for (std::size_t i : sel.select(x, k)) vals.push_back(x[i]);
  // Largest first, so the rounding does not depend on where entries sit.
  std::sort(vals.begin(), vals.end(), std::greater<>());
  double sum = 0.0;
  for (double v : vals) sum += v;
  return sum;
}

double error_bound_psi(std::span<const double> x, std::size_t k) {
  for (double v : x) {
    if (!(v >= -1e-12 && v <= 1.0 + 1e-12)) {
      throw InvalidArgument("error bound is only defined on [0,1]^n");
    }
  }
  const auto top = top_k_indices(x, k);
  // Summed as the l1 distance to the nearest selection, which is
  // algebraically k + 1^T x - 2 S_k(x) and exact on binary inputs.
  double psi = 0.0;
  std::size_t t = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (t < top.size() && top[t] == i) {
      psi += 1.0 - x[i];
      ++t;
    } else {
      psi += x[i];
    }
  }
  return psi;
}

SelectionProjection dist_to_selection(std::span<const double> x, std::size_t k) {
  SelectionProjection out;
  out.nearest.assign(x.size(), 0);
  for (std::size_t i : top_k_indices(x, k)) out.nearest[i] = 1;
  double sq = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - static_cast<double>(out.nearest[i]);
    sq += d * d;
  }
  out.distance = std::sqrt(sq);
  return out;
}

PenalizedValue objective_F(const Graph& g, std::span<const double> x,
                           const PenaltyContext& ctx) {
  ctx.validate(g.n());
  const auto ax = spmv(g, x);
  PenalizedValue v;
  double quad = 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    quad += x[i] * ax[i];
    sum += x[i];
  }
  v.f = -quad;
  v.h = sum - 2.0 * max_k_sum(x, ctx.k);
  v.F = v.f + ctx.lambda * v.h;
  return v;
}

std::vector<double> prox_h(std::span<const double> z, std::size_t k, double mu) {
  std::vector<double> out(z.size());
  TopKSelector sel;
  prox_h(z, k, mu, out, sel);
  return out;
}

void prox_h(std::span<const double> z, std::size_t k, double mu,
            std::span<double> out, TopKSelector& selector) {
  if (out.size() != z.size()) throw InvalidArgument("prox output length mismatch");
  if (!std::isfinite(mu) || mu <= 0.0) {
    throw InvalidArgument("prox weight mu must be positive and finite");
  }
  for (double v : z) {
    if (!std::isfinite(v)) throw InvalidArgument("prox input is not finite");
  }
  const auto top = selector.select(z, k);
  for (std::size_t i = 0; i < z.size(); ++i) out[i] = clip01(z[i] - mu);
  for (std::size_t i : top) out[i] = clip01(z[i] + mu);
}

double prox_objective(std::span<const double> z, std::span<const double> x,
                      std::size_t k, double mu) {
  if (z.size() != x.size()) throw InvalidArgument("prox objective length mismatch");
  double sq = 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double d = z[i] - x[i];
    sq += d * d;
    sum += x[i];
  }
  return 0.5 * sq + mu * (sum - 2.0 * max_k_sum(x, k));
}

Selection round_to_selection(std::span<const double> x, std::size_t k) {
  return dist_to_selection(x, k).nearest;
}

}  // namespace densek
