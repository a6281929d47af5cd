#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "gmot/graph.hpp"
#include "gmot/rng.hpp"

namespace gmot {

using RowMatrixXd = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

enum class EmbeddingMethod { kCcb, kCnp };

std::string_view method_name(EmbeddingMethod method);
EmbeddingMethod parse_embedding_method(std::string_view name);

/// Node-by-color assignment. Stored as one color index per node, which is
/// the n x k indicator with exactly one 1 per row.
struct ColorMatrix {
  enum class Kind { kBlock, kUniform };

  std::size_t colors = 0;
  std::vector<std::uint32_t> color;  // color[v] in [0, colors)
  Kind kind = Kind::kUniform;

  std::size_t nodes() const noexcept { return color.size(); }
  Eigen::MatrixXd indicator() const;
};

/// k-1 distinct cuts drawn from {1..n-1}; block i holds the nodes j (1-based)
/// with c_i < j <= c_{i+1}.
ColorMatrix sample_ccb_partition(std::size_t n, std::size_t k, Rng& rng);
/// Block partition from explicit sorted cuts in {1..n-1}.
ColorMatrix ccb_partition_from_cuts(std::size_t n, std::span<const std::size_t> cuts);
/// Independent uniform color per node.
ColorMatrix sample_cnp_coloring(std::size_t n, std::size_t k, Rng& rng);

struct EmbeddingConfig {
  EmbeddingMethod method = EmbeddingMethod::kCcb;
  std::size_t colors = 10;
  std::size_t depth = 5;
  std::size_t samples = 1000;
  std::uint64_t seed = 0;

  std::size_t dimension() const noexcept { return colors * (depth + 1); }
  void validate(std::size_t n) const;
};

/// Unit-normalized CCB embedding, one row per node, k*(d+1) columns.
/// `norm` overrides the spectral norm (callers embedding many samples pass it once).
RowMatrixXd ccb_embed(const Graph& g, const ColorMatrix& h, std::size_t depth,
                      std::optional<double> norm = std::nullopt);
/// Unit-normalized CNP embedding: per node the (d+1) x k propagation matrix
/// with lexicographically sorted columns, flattened row by row.
RowMatrixXd cnp_embed(const Graph& g, const ColorMatrix& h, std::size_t depth,
                      std::optional<double> norm = std::nullopt);

/// n x s x D tensor of embedding samples.
class EmbeddingSamples {
 public:
  EmbeddingSamples() = default;
  EmbeddingSamples(std::size_t nodes, std::size_t samples, std::size_t dimension);

  std::size_t nodes() const noexcept { return nodes_; }
  std::size_t samples() const noexcept { return samples_; }
  std::size_t dimension() const noexcept { return dimension_; }

  /// The s x D block of node v.
  Eigen::Map<const RowMatrixXd> node(std::size_t v) const;
  Eigen::Map<RowMatrixXd> node(std::size_t v);
  double at(std::size_t v, std::size_t sample, std::size_t x) const {
    return data_[(v * samples_ + sample) * dimension_ + x];
  }
  const std::vector<double>& data() const noexcept { return data_; }

 private:
  std::size_t nodes_ = 0;
  std::size_t samples_ = 0;
  std::size_t dimension_ = 0;
  std::vector<double> data_;
};

/// Draws cfg.samples colorings and embeds every node under each. Sample i
/// uses the substream (seed, n, i), so graphs with equal node counts see the
/// same colorings and results do not depend on evaluation order.
EmbeddingSamples sample_embeddings(const Graph& g, const EmbeddingConfig& cfg);

/// The coloring used for sample `index` of an n-node graph.
ColorMatrix sample_coloring(const EmbeddingConfig& cfg, std::size_t n, std::size_t index);

}  // namespace gmot
