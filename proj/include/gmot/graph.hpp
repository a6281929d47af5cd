#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace gmot {

struct Edge {
  std::size_t u = 0;
  std::size_t v = 0;
  double weight = 1.0;
};

/// Undirected weighted graph. Nodes are 0-based in the API and 1-based in
/// every file format. The adjacency is symmetric with non-negative weights;
/// self-loops are allowed. Immutable after construction.
class Graph {
 public:
  using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

  Graph() = default;
  explicit Graph(std::size_t n);

  /// Builds from an edge list; each edge is written in both directions and
  /// a repeated pair overwrites the earlier weight. Zero weights drop the edge.
  static Graph from_edges(std::size_t n, std::span<const Edge> edges);

  /// Builds from a dense matrix that must already be symmetric and non-negative.
  static Graph from_dense(const Eigen::MatrixXd& adjacency);

  std::size_t size() const noexcept { return n_; }
  const SparseMatrix& adjacency() const noexcept { return adjacency_; }
  Eigen::MatrixXd dense() const;

  double weight(std::size_t u, std::size_t v) const;
  /// Weighted degree (row sum) of every node.
  Eigen::VectorXd degrees() const;
  /// Undirected edges with u <= v, sorted.
  std::vector<Edge> edges() const;
  double max_weight() const;

 private:
  std::size_t n_ = 0;
  SparseMatrix adjacency_;
};

/// Text edge list: "u v" or "u v w" per line, '#' comments, 1-based ids.
/// A comment of the form "# nodes: N" sets a minimum node count so trailing
/// isolated nodes survive a round trip. With `weighted` false the third
/// column is validated but every edge gets weight 1.
Graph load_edge_list(std::istream& in, bool weighted = true);
Graph load_edge_list(const std::filesystem::path& path, bool weighted = true);

/// Square CSV matrix without header. Symmetrized as (M + M^T)/2 and negative
/// entries clamped to zero; the diagonal is kept.
Graph load_dense_matrix(std::istream& in);
Graph load_dense_matrix(const std::filesystem::path& path);

/// Dispatches on extension: ".csv" reads a dense matrix, anything else an edge list.
Graph load_graph(const std::filesystem::path& path);

void write_edge_list(std::ostream& out, const Graph& g);

/// Spectral norm of the adjacency by power iteration; 1.0 for the zero matrix.
double matrix_norm(const Graph& g);

/// Relabels node u as perm[u], i.e. returns P A P^T. `perm` is 0-based.
Graph permute(const Graph& g, std::span<const std::size_t> perm);

}  // namespace gmot
