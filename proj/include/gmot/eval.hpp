#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gmot/embed.hpp"
#include "gmot/graph.hpp"
#include "gmot/ot.hpp"
#include "gmot/pipeline.hpp"

namespace gmot {

/// A graph distance: one of the two embeddings with a component-distance
/// variant, or one of the Degree / EV baselines.
struct MethodSpec {
  enum class Kind { kCcb, kCnp, kDegree, kEv };

  Kind kind = Kind::kCcb;
  Variant variant = Variant::kTied;

  bool is_transport() const noexcept { return kind == Kind::kCcb || kind == Kind::kCnp; }
  /// "CCB-tied", "CNP-full", "Degree", "EV".
  std::string name() const;
  static MethodSpec parse(std::string_view method, std::string_view variant = "tied");
};

struct PairwiseOptions {
  EmbeddingConfig embedding;
  double ridge = kDefaultRidge;
  std::size_t threads = 0;  // 0 = all cores
  /// Called once per pair (i < j) for transport methods; serialized.
  std::function<void(std::size_t, std::size_t, const MixtureDistance&)> on_pair;
};

struct DistanceMatrix {
  Eigen::MatrixXd values;
  std::vector<std::string> labels;
  std::string method;
  EmbeddingConfig config;
  /// Mean wall-clock per pair. For transport methods each pair is charged the
  /// preparation time of both graphs plus its own solve, i.e. the cost of
  /// running the comparison standalone.
  double mean_pair_ms = 0.0;
  std::size_t pair_evaluations = 0;
};

/// All N(N-1)/2 pairs, each computed once; the diagonal is zero.
DistanceMatrix pairwise_distances(std::span<const Graph> graphs, const MethodSpec& method,
                                  const PairwiseOptions& options = {});

/// Euclidean distance between degree histograms (weighted degree rounded to
/// an integer bin, normalized to sum 1, zero-padded to a common length).
double baseline_degree(const Graph& a, const Graph& b);

/// Perron vector of the adjacency (unit norm, largest entry positive).
Eigen::VectorXd dominant_eigenvector(const Graph& g);

/// Euclidean distance between dominant eigenvectors sorted in descending
/// order, the shorter one zero-padded.
double baseline_ev(const Graph& a, const Graph& b);

/// Maps labels to dense ids in order of first appearance.
std::vector<int> encode_labels(std::span<const std::string> labels);

struct KnnOptions {
  std::size_t neighbors = 5;
  std::size_t folds = 20;
  double test_fraction = 0.2;
  std::uint64_t seed = 0;
};

struct EvalReport {
  double knn_mean = 0.0;
  double knn_std = 0.0;
  std::vector<double> fold_accuracy;
  double silhouette = std::numeric_limits<double>::quiet_NaN();
  double time_ms = std::numeric_limits<double>::quiet_NaN();
  std::size_t neighbors = 0;
  std::size_t folds = 0;
  double test_fraction = 0.0;
  std::size_t regenerated_folds = 0;
};

/// Inverse-distance weighted kNN over repeated stratified random splits.
EvalReport knn_cv(const Eigen::MatrixXd& distances, std::span<const int> labels, const KnnOptions& options = {});

/// Mean silhouette from precomputed distances; members of singleton classes score 0.
double silhouette(const Eigen::MatrixXd& distances, std::span<const int> labels);

/// Leaf order (0-based) of the average-linkage dendrogram.
std::vector<std::size_t> hierarchical_order(const Eigen::MatrixXd& distances);

}  // namespace gmot
