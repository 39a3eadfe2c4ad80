#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>
#include <set>
#include <string>

#include "densek/baselines.hpp"
#include "densek/error.hpp"
#include "densek/metrics.hpp"

namespace densek {
namespace {

using Clock = std::chrono::steady_clock;

void check_k(const Graph& g, std::size_t k) {
  if (k < 1 || k > g.n()) {
    throw InvalidArgument("k = " + std::to_string(k) + " must satisfy 1 <= k <= n = " +
                          std::to_string(g.n()));
  }
}

void fill_density(const Graph& g, std::size_t k, BaselineResult& r) {
  if (k >= 2) {
    const auto rep = edge_density(g, r.selection, k);
    r.density = rep.density;
    r.edges_inside = rep.edges_inside;
  }
}

// Visits every k-subset of {0..n-1} in lexicographic order.
template <class Visit>
void for_each_subset(std::size_t n, std::size_t k, Visit&& visit) {
  std::vector<NodeId> c(k);
  for (std::size_t i = 0; i < k; ++i) c[i] = static_cast<NodeId>(i);
  while (true) {
    visit(std::span<const NodeId>(c));
    std::size_t i = k;
    while (i > 0 && c[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++c[i - 1];
    for (std::size_t j = i; j < k; ++j) c[j] = c[j - 1] + 1;
  }
}

}  // namespace

double binomial(std::size_t n, std::size_t k) noexcept {
  if (k > n) return 0.0;
  k = std::min(k, n - k);
  double r = 1.0;
  for (std::size_t i = 1; i <= k; ++i) {
    r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
    if (!std::isfinite(r)) return r;
  }
  return std::round(r);
}

BaselineResult greedy_dks(const Graph& g, std::size_t k) {
  check_k(g, k);
  const auto start = Clock::now();
  const std::size_t n = g.n();
  std::vector<std::size_t> degree(n);
  std::vector<std::uint8_t> alive(n, 1);
  using Item = std::pair<std::size_t, NodeId>;  // (degree, vertex)
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  for (NodeId v = 0; v < n; ++v) {
    degree[v] = g.degree(v);
    heap.emplace(degree[v], v);
  }
  // Lazy deletion: entries whose degree is stale are skipped.
  std::size_t remaining = n;
  while (remaining > k) {
    const auto [d, v] = heap.top();
    heap.pop();
    if (!alive[v] || d != degree[v]) continue;
    alive[v] = 0;
    --remaining;
    for (NodeId u : g.neighbors(v)) {
      if (alive[u]) heap.emplace(--degree[u], u);
    }
  }
  BaselineResult r;
  r.selection.assign(alive.begin(), alive.end());
  fill_density(g, k, r);
  r.wall_time = Clock::now() - start;
  return r;
}

BaselineResult tpm_dks(const Graph& g, std::size_t k, std::size_t max_iter,
                       std::span<const double> x0) {
  check_k(g, k);
  const auto start = Clock::now();
  const std::size_t n = g.n();
  std::vector<double> x;
  if (x0.empty()) {
    x.assign(n, 1.0 / static_cast<double>(n));
  } else {
    if (x0.size() != n) throw InvalidArgument("tpm: x0 length mismatch");
    bool nonzero = false;
    for (double v : x0) {
      if (!(v >= 0.0) || !std::isfinite(v)) throw InvalidArgument("tpm: x0 must be non-negative");
      nonzero = nonzero || v > 0.0;
    }
    if (!nonzero) throw InvalidArgument("tpm: x0 must be nonzero");
    x.assign(x0.begin(), x0.end());
  }

  TopKSelector selector;
  const auto initial = selector.select(x, k);
  std::vector<std::size_t> support(initial.begin(), initial.end());
  std::set<std::vector<std::size_t>> seen;
  std::vector<double> y(n);
  std::size_t it = 0;
  while (it < max_iter) {
    spmv(g, x, y);
    auto next = selector.select(y, k);
    double sq = 0.0;
    for (std::size_t i : next) sq += y[i] * y[i];
    ++it;
    if (sq == 0.0) break;  // keep the previous support
    const double norm = std::sqrt(sq);
    std::fill(x.begin(), x.end(), 0.0);
    for (std::size_t i : next) x[i] = y[i] / norm;
    support.assign(next.begin(), next.end());
    if (!seen.insert(support).second) break;
  }

  BaselineResult r;
  r.selection.assign(n, 0);
  for (std::size_t i : support) r.selection[i] = 1;
  r.iterations = it;
  fill_density(g, k, r);
  r.wall_time = Clock::now() - start;
  return r;
}

BaselineResult brute_force_dks(const Graph& g, std::size_t k) {
  check_k(g, k);
  if (binomial(g.n(), k) > kBruteForceLimit) {
    throw InvalidArgument("instance too large for oracle");
  }
  const auto start = Clock::now();
  const std::size_t n = g.n();
  std::vector<std::uint8_t> adj(n * n, 0);
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v : g.neighbors(u)) adj[u * n + v] = 1;
  }

  // Depth-first over increasing index tuples; edges are added incrementally
  // as each vertex joins, so leaves are visited in lexicographic order.
  std::vector<NodeId> cur;
  std::vector<NodeId> best_set;
  std::size_t best = 0;
  bool found = false;
  std::function<void(NodeId, std::size_t)> dfs = [&](NodeId from, std::size_t edges) {
    if (cur.size() == k) {
      if (!found || edges > best) {
        found = true;
        best = edges;
        best_set = cur;
      }
      return;
    }
    const std::size_t need = k - cur.size();
    for (NodeId v = from; v + need <= n; ++v) {
      std::size_t add = 0;
      for (NodeId u : cur) add += adj[u * n + v];
      cur.push_back(v);
      dfs(v + 1, edges + add);
      cur.pop_back();
    }
  };
  dfs(0, 0);

  BaselineResult r;
  r.selection.assign(n, 0);
  for (NodeId v : best_set) r.selection[v] = 1;
  fill_density(g, k, r);
  r.wall_time = Clock::now() - start;
  return r;
}

BaselineResult brute_force_dkbs(const BipartiteGraph& bg, std::size_t k1,
                                std::size_t k2) {
  const std::size_t n1 = bg.n1();
  const std::size_t n2 = bg.n2();
  if (k1 < 1 || k1 > n1 || k2 < 1 || k2 > n2) {
    throw InvalidArgument("(k1, k2) out of range");
  }
  if (binomial(n1, k1) * binomial(n2, k2) > kBruteForceLimit) {
    throw InvalidArgument("instance too large for oracle");
  }
  const auto start = Clock::now();
  std::vector<std::size_t> col_count(n2);
  std::vector<NodeId> best_rows;
  std::vector<NodeId> best_cols;
  std::size_t best = 0;
  bool found = false;
  for_each_subset(n1, k1, [&](std::span<const NodeId> rows) {
    std::fill(col_count.begin(), col_count.end(), 0);
    for (NodeId i : rows) {
      for (NodeId j : bg.row(i)) ++col_count[j];
    }
    for_each_subset(n2, k2, [&](std::span<const NodeId> cols) {
      std::size_t edges = 0;
      for (NodeId j : cols) edges += col_count[j];
      if (!found || edges > best) {
        found = true;
        best = edges;
        best_rows.assign(rows.begin(), rows.end());
        best_cols.assign(cols.begin(), cols.end());
      }
    });
  });

  BaselineResult r;
  r.selection.assign(n1 + n2, 0);
  for (NodeId i : best_rows) r.selection[i] = 1;
  for (NodeId j : best_cols) r.selection[n1 + j] = 1;
  r.edges_inside = best;
  r.density = static_cast<double>(best) / static_cast<double>(k1 * k2);
  r.wall_time = Clock::now() - start;
  return r;
}

}  // namespace densek
