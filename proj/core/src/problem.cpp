#include <cmath>
#include <string>

#include "densek/error.hpp"
#include "densek/problem.hpp"

namespace densek {

SelectionProblem SelectionProblem::dks(const Graph& g, std::size_t k) {
  if (k < 1 || k > g.n()) {
    throw InvalidArgument("k = " + std::to_string(k) + " must satisfy 1 <= k <= n = " +
                          std::to_string(g.n()));
  }
  SelectionProblem p;
  p.graph_ = &g;
  p.dim_ = g.n();
  p.segments_ = {Segment{0, g.n(), k}};
  return p;
}

SelectionProblem SelectionProblem::dkbs(const BipartiteGraph& bg, std::size_t k1,
                                        std::size_t k2) {
  if (k1 < 1 || k1 > bg.n1() || k2 < 1 || k2 > bg.n2()) {
    throw InvalidArgument("(k1, k2) = (" + std::to_string(k1) + ", " +
                          std::to_string(k2) + ") must satisfy 1 <= k1 <= n1 = " +
                          std::to_string(bg.n1()) + " and 1 <= k2 <= n2 = " +
                          std::to_string(bg.n2()));
  }
  SelectionProblem p;
  p.graph_ = &bg;
  p.dim_ = bg.n1() + bg.n2();
  p.segments_ = {Segment{0, bg.n1(), k1}, Segment{bg.n1(), bg.n2(), k2}};
  return p;
}

std::size_t SelectionProblem::total_k() const noexcept {
  std::size_t k = 0;
  for (const auto& s : segments_) k += s.k;
  return k;
}

void SelectionProblem::adjacency(std::span<const double> a,
                                 std::span<double> out) const {
  if (const auto* g = std::get_if<const Graph*>(&graph_)) {
    spmv(**g, a, out);
  } else {
    block_spmv(*std::get<const BipartiteGraph*>(graph_), a, out);
  }
}

SpmvStats SelectionProblem::adjacency_with_stats(std::span<const double> a,
                                                 std::span<const double> ref,
                                                 std::span<double> out) const {
  if (const auto* g = std::get_if<const Graph*>(&graph_)) {
    return spmv_with_stats(**g, a, ref, out);
  }
  return block_spmv_with_stats(*std::get<const BipartiteGraph*>(graph_), a, ref, out);
}

double SelectionProblem::spectral_norm(const PowerIterationOptions& opts) const {
  if (const auto* g = std::get_if<const Graph*>(&graph_)) {
    return spectral_norm_estimate(**g, opts);
  }
  return spectral_norm_estimate(*std::get<const BipartiteGraph*>(graph_), opts);
}

double SelectionProblem::prox(std::span<const double> z, double mu,
                              std::span<double> out, TopKSelector& selector) const {
  double h = 0.0;
  for (const auto& s : segments_) {
    auto zs = z.subspan(s.offset, s.length);
    auto os = out.subspan(s.offset, s.length);
    prox_h(zs, s.k, mu, os, selector);
    // The prox's top set is also a top set of its output (clipping is
    // monotone), so S_k of the output is read off the same indices.
    double sum = 0.0;
    for (double v : os) sum += v;
    double top = 0.0;
    for (std::size_t i : selector.last()) top += os[i];
    h += sum - 2.0 * top;
  }
  return h;
}

double SelectionProblem::penalty(std::span<const double> a) const {
  double h = 0.0;
  for (const auto& s : segments_) {
    auto as = a.subspan(s.offset, s.length);
    double sum = 0.0;
    for (double v : as) sum += v;
    h += sum - 2.0 * max_k_sum(as, s.k);
  }
  return h;
}

Selection SelectionProblem::round(std::span<const double> a) const {
  Selection out(dim_, 0);
  for (const auto& s : segments_) {
    for (std::size_t i : top_k_indices(a.subspan(s.offset, s.length), s.k)) {
      out[s.offset + i] = 1;
    }
  }
  return out;
}

double SelectionProblem::distance_to_selection(std::span<const double> a) const {
  double sq = 0.0;
  for (const auto& s : segments_) {
    const double d = dist_to_selection(a.subspan(s.offset, s.length), s.k).distance;
    sq += d * d;
  }
  return std::sqrt(sq);
}

}  // namespace densek
