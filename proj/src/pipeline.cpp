#include "gmot/pipeline.hpp"

#include <chrono>

#include "gmot/ot_detail.hpp"

namespace gmot {

GraphRepresentation prepare_graph(const Graph& g, const EmbeddingConfig& cfg, Variant variant, double ridge) {
  const auto start = std::chrono::steady_clock::now();
  GraphRepresentation rep;
  {
    const EmbeddingSamples samples = sample_embeddings(g, cfg);
    const auto mode = variant == Variant::kTied ? CovarianceMode::kMeansOnly : CovarianceMode::kFull;
    rep.mixture = fit_mixture(samples, ridge, mode);
  }
  if (variant == Variant::kFull) rep.roots = detail::covariance_roots(rep.mixture);
  rep.prepare_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

MixtureDistance compare(const GraphRepresentation& a, const GraphRepresentation& b, Variant variant) {
  MixtureDistance out;
  if (variant == Variant::kFull) {
    out.cost = a.roots.size() == a.mixture.size() ? detail::full_cost(a.mixture, a.roots, b.mixture)
                                                   : build_cost(a.mixture, b.mixture, Variant::kFull);
  } else {
    out.cost = build_cost(a.mixture, b.mixture, variant);
  }
  out.plan = solve_discrete_ot(out.cost);
  out.distance = out.plan.cost;
  return out;
}

MixtureDistance mixture_distance(const Graph& g1, const Graph& g2, const EmbeddingConfig& cfg, Variant variant,
                                 double ridge) {
  const GraphRepresentation a = prepare_graph(g1, cfg, variant, ridge);
  const GraphRepresentation b = prepare_graph(g2, cfg, variant, ridge);
  return compare(a, b, variant);
}

}  // namespace gmot
