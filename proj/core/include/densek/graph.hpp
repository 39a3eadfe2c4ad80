#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

namespace densek {

using NodeId = std::uint32_t;
/// External vertex identifier as it appears in the source file.
using Label = std::int64_t;
using Edge = std::pair<NodeId, NodeId>;

enum class EdgeFormat { snap, konect };

/// How labels of the two columns of an edge list are mapped to indices.
/// `shared`: one label space (unipartite files). `per_column`: the source
/// column and the target column are independent label spaces (bipartite
/// KONECT files, where both sides are numbered from 1).
enum class LabelSpace { shared, per_column };

/// Raw parsed edge list, before any cleaning.
struct EdgeList {
  LabelSpace space = LabelSpace::shared;
  /// Directed pairs in parse order, expressed as dense indices.
  std::vector<Edge> edges;
  /// index -> external label. Holds every label when `space == shared`,
  /// only source-column labels otherwise.
  std::vector<Label> labels;
  /// index -> external label for the target column; empty when shared.
  std::vector<Label> target_labels;

  std::size_t source_count() const noexcept { return labels.size(); }
  std::size_t target_count() const noexcept {
    return space == LabelSpace::shared ? labels.size() : target_labels.size();
  }
};

EdgeList load_edge_list(std::istream& in, EdgeFormat format,
                        LabelSpace space = LabelSpace::shared);
EdgeList load_edge_list(const std::filesystem::path& path, EdgeFormat format,
                        LabelSpace space = LabelSpace::shared);

/// Simple undirected graph in CSR form. Each undirected edge is stored in
/// both directions, rows are sorted, there are no self-loops or duplicates.
class Graph {
 public:
  Graph() = default;

  /// Builds a graph on `n` vertices from arbitrary pairs. Pairs are
  /// symmetrized, self-loops dropped and duplicates merged. `labels`, when
  /// given, must have length `n`; otherwise vertex i is labelled i.
  static Graph from_edges(std::size_t n, std::span<const Edge> edges,
                          std::vector<Label> labels = {});

  std::size_t n() const noexcept { return labels_.size(); }
  std::size_t m() const noexcept { return col_idx_.size() / 2; }

  std::span<const std::size_t> row_ptr() const noexcept { return row_ptr_; }
  std::span<const NodeId> col_idx() const noexcept { return col_idx_; }
  std::span<const NodeId> neighbors(NodeId v) const noexcept {
    return {col_idx_.data() + row_ptr_[v], row_ptr_[v + 1] - row_ptr_[v]};
  }
  std::size_t degree(NodeId v) const noexcept {
    return row_ptr_[v + 1] - row_ptr_[v];
  }
  bool has_edge(NodeId u, NodeId v) const noexcept;

  std::span<const Label> labels() const noexcept { return labels_; }

 private:
  std::vector<std::size_t> row_ptr_{0};
  std::vector<NodeId> col_idx_;
  std::vector<Label> labels_;
};

/// Unweighted bipartite graph: biadjacency B (n1 x n2) in CSR, plus the CSR
/// of its transpose.
class BipartiteGraph {
 public:
  BipartiteGraph() = default;

  /// Pairs are (left index, right index); duplicates are merged. Isolated
  /// vertices are kept (see preprocess_bipartite for the cleaning step).
  static BipartiteGraph from_edges(std::size_t n1, std::size_t n2,
                                   std::span<const Edge> edges,
                                   std::vector<Label> left_labels = {},
                                   std::vector<Label> right_labels = {});

  std::size_t n1() const noexcept { return left_labels_.size(); }
  std::size_t n2() const noexcept { return right_labels_.size(); }
  std::size_t m() const noexcept { return row_idx_.size(); }

  /// Columns adjacent to left vertex i.
  std::span<const NodeId> row(NodeId i) const noexcept {
    return {col_of_row_.data() + row_ptr_[i], row_ptr_[i + 1] - row_ptr_[i]};
  }
  /// Rows adjacent to right vertex j.
  std::span<const NodeId> column(NodeId j) const noexcept {
    return {row_idx_.data() + col_ptr_[j], col_ptr_[j + 1] - col_ptr_[j]};
  }
  bool has_edge(NodeId i, NodeId j) const noexcept;

  std::span<const Label> left_labels() const noexcept { return left_labels_; }
  std::span<const Label> right_labels() const noexcept { return right_labels_; }

 private:
  std::vector<std::size_t> row_ptr_{0};
  std::vector<NodeId> col_of_row_;
  std::vector<std::size_t> col_ptr_{0};
  std::vector<NodeId> row_idx_;
  std::vector<Label> left_labels_;
  std::vector<Label> right_labels_;
};

/// Symmetrize, drop self-loops, deduplicate and keep the largest connected
/// component. Equal-size components are ranked by their smallest vertex
/// index. Surviving vertices keep their relative order.
Graph preprocess_unipartite(const EdgeList& el);

/// Source column = left side, target column = right side. Multi-edges are
/// merged and isolated vertices on either side dropped.
BipartiteGraph preprocess_bipartite(const EdgeList& el);

/// Writes "label label" lines, one per undirected edge (u < v).
void write_edge_list(std::ostream& out, const Graph& g);

/// y = A x.
std::vector<double> spmv(const Graph& g, std::span<const double> x);
void spmv(const Graph& g, std::span<const double> x, std::span<double> y);

/// Reductions gathered during a sparse product y = A x.
struct SpmvStats {
  double quad = 0.0;     ///< x^T y
  double diff_sq = 0.0;  ///< ||x - ref||^2
  double norm_sq = 0.0;  ///< ||x||^2
};

/// y = A x, with the reductions above accumulated in the same row sweep so
/// the iteration loop does not need another pass over x, ref and y.
SpmvStats spmv_with_stats(const Graph& g, std::span<const double> x,
                          std::span<const double> ref, std::span<double> y);

/// B y (length n1) and B^T x (length n2).
std::vector<double> multiply(const BipartiteGraph& bg, std::span<const double> y);
std::vector<double> multiply_transpose(const BipartiteGraph& bg,
                                       std::span<const double> x);
/// Product with the symmetric block matrix [[0, B], [B^T, 0]] applied to the
/// stacked vector a = (x, y), without materializing it.
SpmvStats block_spmv_with_stats(const BipartiteGraph& bg, std::span<const double> a,
                                std::span<const double> ref, std::span<double> out);
void block_spmv(const BipartiteGraph& bg, std::span<const double> a,
                std::span<double> out);

inline constexpr double kSpectralInflation = 0.05;

struct PowerIterationOptions {
  double rel_tol = 1e-6;
  std::size_t max_iter = 500;
  std::uint64_t seed = 0;
};

/// Power-iteration estimate of ||A||_2, inflated by (1 + kSpectralInflation).
/// The raw estimate never exceeds the true norm, so the inflated value is a
/// safe upper bound once the iteration has converged.
double spectral_norm_estimate(const Graph& g, double rel_tol = 1e-6,
                              std::size_t max_iter = 500, std::uint64_t seed = 0);
double spectral_norm_estimate(const Graph& g, const PowerIterationOptions& opts);
/// ||B||_2 (equal to the norm of the block matrix), same inflation.
double spectral_norm_estimate(const BipartiteGraph& bg,
                              const PowerIterationOptions& opts = {});

}  // namespace densek
