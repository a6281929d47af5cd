#include "gmot/embed.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>
#include <string>

#include "gmot/errors.hpp"

namespace gmot {
namespace {

// Raw propagation levels: columns [i*k, (i+1)*k) hold A^i H / norm^i.
RowMatrixXd propagate(const Graph& g, const ColorMatrix& h, std::size_t depth, double norm) {
  if (h.nodes() != g.size()) throw ShapeError("color matrix has " + std::to_string(h.nodes()) +
                                              " rows but the graph has " + std::to_string(g.size()) + " nodes");
  const auto n = static_cast<Eigen::Index>(g.size());
  const auto k = static_cast<Eigen::Index>(h.colors);
  RowMatrixXd raw(n, k * static_cast<Eigen::Index>(depth + 1));
  RowMatrixXd level = RowMatrixXd::Zero(n, k);
  for (Eigen::Index v = 0; v < n; ++v) level(v, h.color[static_cast<std::size_t>(v)]) = 1.0;
  raw.leftCols(k) = level;
  RowMatrixXd next(n, k);
  const double scale = 1.0 / norm;
  for (std::size_t i = 1; i <= depth; ++i) {
    next.noalias() = g.adjacency() * level;
    level = next * scale;
    raw.middleCols(static_cast<Eigen::Index>(i) * k, k) = level;
  }
  return raw;
}

void normalize_rows(RowMatrixXd& m) {
  for (Eigen::Index v = 0; v < m.rows(); ++v) {
    const double len = m.row(v).norm();
    if (len > 0.0) m.row(v) /= len;
  }
}

}  // namespace

std::string_view method_name(EmbeddingMethod method) {
  return method == EmbeddingMethod::kCcb ? "ccb" : "cnp";
}

EmbeddingMethod parse_embedding_method(std::string_view name) {
  if (name == "ccb" || name == "CCB") return EmbeddingMethod::kCcb;
  if (name == "cnp" || name == "CNP") return EmbeddingMethod::kCnp;
  throw DomainError("unknown embedding method \"" + std::string(name) + "\"");
}

Eigen::MatrixXd ColorMatrix::indicator() const {
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(nodes()), static_cast<Eigen::Index>(colors));
  for (std::size_t v = 0; v < nodes(); ++v) h(static_cast<Eigen::Index>(v), color[v]) = 1.0;
  return h;
}

ColorMatrix ccb_partition_from_cuts(std::size_t n, std::span<const std::size_t> cuts) {
  for (std::size_t i = 0; i < cuts.size(); ++i) {
    if (cuts[i] < 1 || cuts[i] >= n) throw DomainError("cut outside {1..n-1}");
    if (i > 0 && cuts[i] <= cuts[i - 1]) throw DomainError("cuts must be strictly increasing");
  }
  ColorMatrix h;
  h.kind = ColorMatrix::Kind::kBlock;
  h.colors = cuts.size() + 1;
  h.color.resize(n);
  std::uint32_t block = 0;
  for (std::size_t j = 1; j <= n; ++j) {
    // node j (1-based) belongs to block i iff c_i < j <= c_{i+1}
    while (block < cuts.size() && j > cuts[block]) ++block;
    h.color[j - 1] = block;
  }
  return h;
}

ColorMatrix sample_ccb_partition(std::size_t n, std::size_t k, Rng& rng) {
  if (k == 0 || k > n) throw DomainError("CCB needs 1 <= k <= n");
  // Floyd's sampling of k-1 distinct values from {1..n-1}.
  std::set<std::size_t> chosen;
  const std::size_t range = n - 1;
  for (std::size_t j = range - (k - 1) + 1; j <= range; ++j) {
    std::uniform_int_distribution<std::size_t> pick(1, j);
    const std::size_t t = pick(rng);
    if (!chosen.insert(t).second) chosen.insert(j);
  }
  const std::vector<std::size_t> cuts(chosen.begin(), chosen.end());
  return ccb_partition_from_cuts(n, cuts);
}

ColorMatrix sample_cnp_coloring(std::size_t n, std::size_t k, Rng& rng) {
  if (k == 0) throw DomainError("need at least one color");
  ColorMatrix h;
  h.kind = ColorMatrix::Kind::kUniform;
  h.colors = k;
  h.color.resize(n);
  std::uniform_int_distribution<std::uint32_t> pick(0, static_cast<std::uint32_t>(k - 1));
  for (auto& c : h.color) c = pick(rng);
  return h;
}

void EmbeddingConfig::validate(std::size_t n) const {
  if (n == 0) throw DomainError("graph has no nodes");
  if (colors == 0) throw DomainError("need at least one color");
  if (samples < 2) throw DomainError("need at least two samples to estimate a covariance");
  if (method == EmbeddingMethod::kCcb && colors > n)
    throw DomainError("CCB cannot cut " + std::to_string(n) + " nodes into " + std::to_string(colors) + " blocks");
}

RowMatrixXd ccb_embed(const Graph& g, const ColorMatrix& h, std::size_t depth, std::optional<double> norm) {
  RowMatrixXd out = propagate(g, h, depth, norm.value_or(matrix_norm(g)));
  normalize_rows(out);
  return out;
}

RowMatrixXd cnp_embed(const Graph& g, const ColorMatrix& h, std::size_t depth, std::optional<double> norm) {
  const RowMatrixXd raw = propagate(g, h, depth, norm.value_or(matrix_norm(g)));
  const auto k = static_cast<Eigen::Index>(h.colors);
  const auto levels = static_cast<Eigen::Index>(depth + 1);
  RowMatrixXd out(raw.rows(), raw.cols());
  std::vector<Eigen::Index> order(static_cast<std::size_t>(k));
  for (Eigen::Index v = 0; v < raw.rows(); ++v) {
    const auto row = raw.row(v);
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    // Ascending lexicographic order of columns, level 0 first; stable for ties.
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
      for (Eigen::Index i = 0; i < levels; ++i) {
        const double x = row(i * k + a);
        const double y = row(i * k + b);
        if (x != y) return x < y;
      }
      return false;
    });
    for (Eigen::Index i = 0; i < levels; ++i)
      for (Eigen::Index j = 0; j < k; ++j) out(v, i * k + j) = row(i * k + order[static_cast<std::size_t>(j)]);
  }
  normalize_rows(out);
  return out;
}

EmbeddingSamples::EmbeddingSamples(std::size_t nodes, std::size_t samples, std::size_t dimension)
    : nodes_(nodes), samples_(samples), dimension_(dimension), data_(nodes * samples * dimension, 0.0) {}

Eigen::Map<const RowMatrixXd> EmbeddingSamples::node(std::size_t v) const {
  return {data_.data() + v * samples_ * dimension_, static_cast<Eigen::Index>(samples_),
          static_cast<Eigen::Index>(dimension_)};
}

Eigen::Map<RowMatrixXd> EmbeddingSamples::node(std::size_t v) {
  return {data_.data() + v * samples_ * dimension_, static_cast<Eigen::Index>(samples_),
          static_cast<Eigen::Index>(dimension_)};
}

ColorMatrix sample_coloring(const EmbeddingConfig& cfg, std::size_t n, std::size_t index) {
  Rng rng = make_rng(cfg.seed, {n, index});
  return cfg.method == EmbeddingMethod::kCcb ? sample_ccb_partition(n, cfg.colors, rng)
                                             : sample_cnp_coloring(n, cfg.colors, rng);
}

EmbeddingSamples sample_embeddings(const Graph& g, const EmbeddingConfig& cfg) {
  const std::size_t n = g.size();
  cfg.validate(n);
  const double norm = matrix_norm(g);
  EmbeddingSamples out(n, cfg.samples, cfg.dimension());
  for (std::size_t i = 0; i < cfg.samples; ++i) {
    const ColorMatrix h = sample_coloring(cfg, n, i);
    const RowMatrixXd e = cfg.method == EmbeddingMethod::kCcb ? ccb_embed(g, h, cfg.depth, norm)
                                                              : cnp_embed(g, h, cfg.depth, norm);
    for (std::size_t v = 0; v < n; ++v) out.node(v).row(static_cast<Eigen::Index>(i)) = e.row(static_cast<Eigen::Index>(v));
  }
  return out;
}

}  // namespace gmot
