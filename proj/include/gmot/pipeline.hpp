#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "gmot/embed.hpp"
#include "gmot/gmm.hpp"
#include "gmot/graph.hpp"
#include "gmot/ot.hpp"

namespace gmot {

/// Everything about one graph that a pairwise comparison needs: its fitted
/// mixture (means only for the tied variant) and, for the full variant, the
/// covariance square roots.
struct GraphRepresentation {
  GaussianMixture mixture;
  std::vector<Eigen::MatrixXd> roots;
  double prepare_ms = 0.0;
};

GraphRepresentation prepare_graph(const Graph& g, const EmbeddingConfig& cfg, Variant variant,
                                  double ridge = kDefaultRidge);

struct MixtureDistance {
  double distance = 0.0;  // MW2^2, the optimal transport cost
  TransportPlan plan;
  CostMatrix cost;
};

MixtureDistance compare(const GraphRepresentation& a, const GraphRepresentation& b, Variant variant);

/// sample_embeddings -> fit_mixture (-> joint scaled projection) -> cost -> exact OT.
MixtureDistance mixture_distance(const Graph& g1, const Graph& g2, const EmbeddingConfig& cfg, Variant variant,
                                 double ridge = kDefaultRidge);

}  // namespace gmot
