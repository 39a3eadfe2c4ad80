#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <random>
#include <string>

#include "densek/error.hpp"
#include "densek/graph.hpp"

namespace densek {
namespace {

// Builds a CSR from (row, col) pairs: rows sorted, duplicates removed.
void build_csr(std::size_t rows, std::span<const Edge> pairs,
               std::vector<std::size_t>& ptr, std::vector<NodeId>& idx) {
  ptr.assign(rows + 1, 0);
  for (const auto& [r, c] : pairs) ++ptr[r + 1];
  std::partial_sum(ptr.begin(), ptr.end(), ptr.begin());
  idx.resize(pairs.size());
  std::vector<std::size_t> fill(ptr.begin(), ptr.end() - 1);
  for (const auto& [r, c] : pairs) idx[fill[r]++] = c;

  std::size_t out = 0;
  std::size_t begin = 0;
  for (std::size_t r = 0; r < rows; ++r) {
    const std::size_t end = ptr[r + 1];
    std::sort(idx.begin() + static_cast<std::ptrdiff_t>(begin),
              idx.begin() + static_cast<std::ptrdiff_t>(end));
    const std::size_t row_start = out;
    for (std::size_t p = begin; p < end; ++p) {
      if (p > begin && idx[p] == idx[p - 1]) continue;
      idx[out++] = idx[p];
    }
    begin = end;
    ptr[r] = row_start;
  }
  ptr[rows] = out;
  idx.resize(out);
  idx.shrink_to_fit();
}

void check_length(std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    throw InvalidArgument(std::string(what) + ": expected length " +
                          std::to_string(want) + ", got " + std::to_string(got));
  }
}

template <class Apply>
double power_iteration(std::size_t dim, const PowerIterationOptions& opts,
                       Apply&& apply) {
  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> dist(0.5, 1.5);
  std::vector<double> x(dim);
  std::vector<double> y(dim);
  for (auto& v : x) v = dist(rng);
  const double x_norm = std::sqrt(std::inner_product(x.begin(), x.end(), x.begin(), 0.0));
  for (auto& v : x) v /= x_norm;

  double sigma = 0.0;
  for (std::size_t it = 0; it < opts.max_iter; ++it) {
    apply(std::span<const double>(x), std::span<double>(y));
    const double next =
        std::sqrt(std::inner_product(y.begin(), y.end(), y.begin(), 0.0));
    if (next == 0.0) return 0.0;
    const bool done = it > 0 && std::abs(next - sigma) / next <= opts.rel_tol;
    sigma = next;
    if (done) break;
    for (std::size_t i = 0; i < dim; ++i) x[i] = y[i] / sigma;
  }
  return sigma * (1.0 + kSpectralInflation);
}

}  // namespace

Graph Graph::from_edges(std::size_t n, std::span<const Edge> edges,
                        std::vector<Label> labels) {
  if (!labels.empty()) check_length(labels.size(), n, "Graph labels");
  std::vector<Edge> sym;
  sym.reserve(2 * edges.size());
  for (const auto& [u, v] : edges) {
    if (u >= n || v >= n) throw InvalidArgument("edge endpoint out of range");
    if (u == v) continue;
    sym.emplace_back(u, v);
    sym.emplace_back(v, u);
  }
  Graph g;
  build_csr(n, sym, g.row_ptr_, g.col_idx_);
  if (labels.empty()) {
    labels.resize(n);
    std::iota(labels.begin(), labels.end(), Label{0});
  }
  g.labels_ = std::move(labels);
  return g;
}

bool Graph::has_edge(NodeId u, NodeId v) const noexcept {
  auto row = neighbors(u);
  return std::binary_search(row.begin(), row.end(), v);
}

BipartiteGraph BipartiteGraph::from_edges(std::size_t n1, std::size_t n2,
                                          std::span<const Edge> edges,
                                          std::vector<Label> left_labels,
                                          std::vector<Label> right_labels) {
  if (!left_labels.empty()) check_length(left_labels.size(), n1, "left labels");
  if (!right_labels.empty()) check_length(right_labels.size(), n2, "right labels");
  std::vector<Edge> transposed;
  transposed.reserve(edges.size());
  for (const auto& [i, j] : edges) {
    if (i >= n1 || j >= n2) throw InvalidArgument("edge endpoint out of range");
    transposed.emplace_back(j, i);
  }
  BipartiteGraph bg;
  build_csr(n1, edges, bg.row_ptr_, bg.col_of_row_);
  build_csr(n2, transposed, bg.col_ptr_, bg.row_idx_);
  if (left_labels.empty()) {
    left_labels.resize(n1);
    std::iota(left_labels.begin(), left_labels.end(), Label{0});
  }
  if (right_labels.empty()) {
    right_labels.resize(n2);
    std::iota(right_labels.begin(), right_labels.end(), Label{0});
  }
  bg.left_labels_ = std::move(left_labels);
  bg.right_labels_ = std::move(right_labels);
  return bg;
}

bool BipartiteGraph::has_edge(NodeId i, NodeId j) const noexcept {
  auto r = row(i);
  return std::binary_search(r.begin(), r.end(), j);
}

Graph preprocess_unipartite(const EdgeList& el) {
  if (el.edges.empty()) throw InvalidArgument("edge list is empty");
  if (el.space != LabelSpace::shared) {
    throw InvalidArgument("unipartite preprocessing needs a shared label space");
  }
  const Graph full = Graph::from_edges(el.labels.size(), el.edges, el.labels);
  const std::size_t n = full.n();

  // Components are discovered in order of their smallest vertex, so a strict
  // comparison keeps the earliest one among equal sizes.
  constexpr NodeId kUnseen = static_cast<NodeId>(-1);
  std::vector<NodeId> comp(n, kUnseen);
  std::vector<NodeId> stack;
  NodeId best = kUnseen;
  std::size_t best_size = 0;
  NodeId next_id = 0;
  for (NodeId s = 0; s < n; ++s) {
    if (comp[s] != kUnseen) continue;
    std::size_t size = 0;
    comp[s] = next_id;
    stack.push_back(s);
    while (!stack.empty()) {
      const NodeId u = stack.back();
      stack.pop_back();
      ++size;
      for (NodeId v : full.neighbors(u)) {
        if (comp[v] == kUnseen) {
          comp[v] = next_id;
          stack.push_back(v);
        }
      }
    }
    if (size > best_size) {
      best_size = size;
      best = next_id;
    }
    ++next_id;
  }

  std::vector<NodeId> remap(n, kUnseen);
  std::vector<Label> labels;
  for (NodeId v = 0; v < n; ++v) {
    if (comp[v] == best) {
      remap[v] = static_cast<NodeId>(labels.size());
      labels.push_back(full.labels()[v]);
    }
  }
  std::vector<Edge> kept;
  for (NodeId u = 0; u < n; ++u) {
    if (remap[u] == kUnseen) continue;
    for (NodeId v : full.neighbors(u)) {
      if (u < v) kept.emplace_back(remap[u], remap[v]);
    }
  }
  if (kept.empty()) throw Error("empty graph after preprocessing");
  const std::size_t kept_n = labels.size();
  return Graph::from_edges(kept_n, kept, std::move(labels));
}

BipartiteGraph preprocess_bipartite(const EdgeList& el) {
  if (el.edges.empty()) throw InvalidArgument("edge list is empty");
  const std::size_t n1 = el.source_count();
  const std::size_t n2 = el.target_count();
  const auto& right_src =
      el.space == LabelSpace::shared ? el.labels : el.target_labels;

  constexpr NodeId kUnseen = static_cast<NodeId>(-1);
  std::vector<NodeId> left_map(n1, kUnseen);
  std::vector<NodeId> right_map(n2, kUnseen);
  for (const auto& [u, v] : el.edges) {
    left_map[u] = 0;
    right_map[v] = 0;
  }
  std::vector<Label> left_labels;
  std::vector<Label> right_labels;
  for (std::size_t i = 0; i < n1; ++i) {
    if (left_map[i] == kUnseen) continue;
    left_map[i] = static_cast<NodeId>(left_labels.size());
    left_labels.push_back(el.labels[i]);
  }
  for (std::size_t j = 0; j < n2; ++j) {
    if (right_map[j] == kUnseen) continue;
    right_map[j] = static_cast<NodeId>(right_labels.size());
    right_labels.push_back(right_src[j]);
  }
  std::vector<Edge> edges;
  edges.reserve(el.edges.size());
  for (const auto& [u, v] : el.edges) edges.emplace_back(left_map[u], right_map[v]);
  if (edges.empty()) throw Error("empty graph after preprocessing");
  const std::size_t n1_kept = left_labels.size();
  const std::size_t n2_kept = right_labels.size();
  return BipartiteGraph::from_edges(n1_kept, n2_kept, edges, std::move(left_labels),
                                    std::move(right_labels));
}

void write_edge_list(std::ostream& out, const Graph& g) {
  for (NodeId u = 0; u < g.n(); ++u) {
    for (NodeId v : g.neighbors(u)) {
      if (u < v) out << g.labels()[u] << ' ' << g.labels()[v] << '\n';
    }
  }
}

std::vector<double> spmv(const Graph& g, std::span<const double> x) {
  std::vector<double> y(g.n());
  spmv(g, x, y);
  return y;
}

void spmv(const Graph& g, std::span<const double> x, std::span<double> y) {
  check_length(x.size(), g.n(), "spmv input");
  check_length(y.size(), g.n(), "spmv output");
  const auto ptr = g.row_ptr();
  const auto idx = g.col_idx();
  const std::size_t n = g.n();
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t p = ptr[i]; p < ptr[i + 1]; ++p) acc += x[idx[p]];
    y[i] = acc;
  }
}

SpmvStats spmv_with_stats(const Graph& g, std::span<const double> x,
                          std::span<const double> ref, std::span<double> y) {
  check_length(x.size(), g.n(), "spmv input");
  check_length(ref.size(), g.n(), "spmv reference");
  check_length(y.size(), g.n(), "spmv output");
  const auto ptr = g.row_ptr();
  const auto idx = g.col_idx();
  const std::size_t n = g.n();
  SpmvStats s;
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t p = ptr[i]; p < ptr[i + 1]; ++p) acc += x[idx[p]];
    y[i] = acc;
    const double xi = x[i];
    const double d = xi - ref[i];
    s.quad += xi * acc;
    s.diff_sq += d * d;
    s.norm_sq += xi * xi;
  }
  return s;
}

std::vector<double> multiply(const BipartiteGraph& bg, std::span<const double> y) {
  check_length(y.size(), bg.n2(), "B*y input");
  std::vector<double> out(bg.n1());
  for (NodeId i = 0; i < bg.n1(); ++i) {
    double acc = 0.0;
    for (NodeId j : bg.row(i)) acc += y[j];
    out[i] = acc;
  }
  return out;
}

std::vector<double> multiply_transpose(const BipartiteGraph& bg,
                                       std::span<const double> x) {
  check_length(x.size(), bg.n1(), "B^T*x input");
  std::vector<double> out(bg.n2());
  for (NodeId j = 0; j < bg.n2(); ++j) {
    double acc = 0.0;
    for (NodeId i : bg.column(j)) acc += x[i];
    out[j] = acc;
  }
  return out;
}

SpmvStats block_spmv_with_stats(const BipartiteGraph& bg, std::span<const double> a,
                                std::span<const double> ref, std::span<double> out) {
  const std::size_t n1 = bg.n1();
  const std::size_t n = n1 + bg.n2();
  check_length(a.size(), n, "block spmv input");
  check_length(ref.size(), n, "block spmv reference");
  check_length(out.size(), n, "block spmv output");
  SpmvStats s;
  auto account = [&](std::size_t i, double acc) {
    out[i] = acc;
    const double d = a[i] - ref[i];
    s.quad += a[i] * acc;
    s.diff_sq += d * d;
    s.norm_sq += a[i] * a[i];
  };
  for (NodeId i = 0; i < n1; ++i) {
    double acc = 0.0;
    for (NodeId j : bg.row(i)) acc += a[n1 + j];
    account(i, acc);
  }
  for (NodeId j = 0; j < bg.n2(); ++j) {
    double acc = 0.0;
    for (NodeId i : bg.column(j)) acc += a[i];
    account(n1 + j, acc);
  }
  return s;
}

void block_spmv(const BipartiteGraph& bg, std::span<const double> a,
                std::span<double> out) {
  const std::size_t n1 = bg.n1();
  const std::size_t n = n1 + bg.n2();
  check_length(a.size(), n, "block spmv input");
  check_length(out.size(), n, "block spmv output");
  for (NodeId i = 0; i < n1; ++i) {
    double acc = 0.0;
    for (NodeId j : bg.row(i)) acc += a[n1 + j];
    out[i] = acc;
  }
  for (NodeId j = 0; j < bg.n2(); ++j) {
    double acc = 0.0;
    for (NodeId i : bg.column(j)) acc += a[i];
    out[n1 + j] = acc;
  }
}

double spectral_norm_estimate(const Graph& g, double rel_tol, std::size_t max_iter,
                              std::uint64_t seed) {
  return spectral_norm_estimate(g, PowerIterationOptions{rel_tol, max_iter, seed});
}

double spectral_norm_estimate(const Graph& g, const PowerIterationOptions& opts) {
  if (g.m() == 0) throw InvalidArgument("spectral norm of an edgeless graph");
  return power_iteration(g.n(), opts, [&](std::span<const double> x, std::span<double> y) {
    spmv(g, x, y);
  });
}

double spectral_norm_estimate(const BipartiteGraph& bg,
                              const PowerIterationOptions& opts) {
  if (bg.m() == 0) throw InvalidArgument("spectral norm of an edgeless graph");
  return power_iteration(bg.n1() + bg.n2(), opts,
                         [&](std::span<const double> x, std::span<double> y) {
                           block_spmv(bg, x, y);
                         });
}

}  // namespace densek
