#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "gmot/embed.hpp"

namespace gmot {

/// Ridge added to every fitted covariance.
inline constexpr double kDefaultRidge = 1e-9;

struct GaussianComponent {
  Eigen::VectorXd mean;
  /// D x D symmetric PSD; empty (0 x 0) for a means-only fit.
  Eigen::MatrixXd covariance;
};

/// Uniformly weighted mixture, one component per node in node order.
struct GaussianMixture {
  std::vector<GaussianComponent> components;

  std::size_t size() const noexcept { return components.size(); }
  std::size_t dimension() const noexcept {
    return components.empty() ? 0 : static_cast<std::size_t>(components.front().mean.size());
  }
  bool has_covariance() const noexcept {
    return !components.empty() && components.front().covariance.size() > 0;
  }
};

enum class CovarianceMode { kFull, kMeansOnly };

/// Maximum-likelihood Gaussian (1/s normalization) of the rows of `samples`
/// plus `ridge` on the diagonal.
GaussianComponent fit_gaussian(const Eigen::Ref<const RowMatrixXd>& samples, double ridge = kDefaultRidge);

GaussianMixture fit_mixture(const EmbeddingSamples& samples, double ridge = kDefaultRidge,
                            CovarianceMode mode = CovarianceMode::kFull);

/// A mixture whose covariances are all scaled copies of one shared matrix:
/// cov(v) = shared / node_scales[v] (each node's scale vector is constant).
struct ScaledMixture {
  std::vector<Eigen::VectorXd> means;
  Eigen::VectorXd shared_eigenvalues;   // ascending, clamped at 0
  Eigen::MatrixXd shared_eigenvectors;  // columns match shared_eigenvalues
  std::vector<Eigen::VectorXd> node_scales;

  std::size_t size() const noexcept { return means.size(); }
  /// D_v^{-1/2} V diag(lambda) V^T D_v^{-1/2}.
  Eigen::MatrixXd covariance(std::size_t v) const;
};

/// Projects every covariance onto a scalar multiple of the mixture's mean
/// covariance, the multiple being the trace ratio.
ScaledMixture scale_project(const GaussianMixture& m);

/// Same projection with the shared covariance averaged over the components
/// of both mixtures.
std::pair<ScaledMixture, ScaledMixture> scale_project_joint(const GaussianMixture& a, const GaussianMixture& b);

}  // namespace gmot
