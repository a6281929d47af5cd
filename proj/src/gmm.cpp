#include "gmot/gmm.hpp"

#include <algorithm>

#include <Eigen/Eigenvalues>

#include "gmot/errors.hpp"

namespace gmot {
namespace {

constexpr double kScaleFloor = 1e-12;

struct SharedProjection {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;
  std::vector<double> scales;  // one d_v per component
};

SharedProjection project(const std::vector<const GaussianComponent*>& comps) {
  if (comps.empty()) throw DomainError("cannot project an empty mixture");
  const Eigen::Index dim = comps.front()->mean.size();
  Eigen::MatrixXd shared = Eigen::MatrixXd::Zero(dim, dim);
  for (const auto* c : comps) {
    if (c->covariance.rows() != dim || c->covariance.cols() != dim)
      throw ShapeError("scaled projection needs full covariances of one dimension");
    shared += c->covariance;
  }
  shared /= static_cast<double>(comps.size());

  SharedProjection out;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(shared);
  out.eigenvalues = eig.eigenvalues().cwiseMax(0.0);
  out.eigenvectors = eig.eigenvectors();

  const double shared_trace = shared.trace();
  out.scales.reserve(comps.size());
  for (const auto* c : comps) {
    if (shared_trace <= 0.0) {
      out.scales.push_back(1.0);
      continue;
    }
    const double ratio = std::max(c->covariance.trace() / shared_trace, kScaleFloor);
    out.scales.push_back(1.0 / ratio);
  }
  return out;
}

ScaledMixture assemble(const GaussianMixture& m, const SharedProjection& p, std::size_t offset) {
  ScaledMixture out;
  out.shared_eigenvalues = p.eigenvalues;
  out.shared_eigenvectors = p.eigenvectors;
  out.means.reserve(m.size());
  out.node_scales.reserve(m.size());
  for (std::size_t v = 0; v < m.size(); ++v) {
    out.means.push_back(m.components[v].mean);
    out.node_scales.push_back(Eigen::VectorXd::Constant(p.eigenvalues.size(), p.scales[offset + v]));
  }
  return out;
}

}  // namespace

GaussianComponent fit_gaussian(const Eigen::Ref<const RowMatrixXd>& samples, double ridge) {
  if (samples.rows() < 2) throw DomainError("need at least two samples to fit a Gaussian");
  if (ridge < 0.0) throw DomainError("ridge must be non-negative");
  const double inv_s = 1.0 / static_cast<double>(samples.rows());
  GaussianComponent c;
  c.mean = samples.colwise().sum().transpose() * inv_s;
  const RowMatrixXd centered = samples.rowwise() - c.mean.transpose();
  c.covariance = Eigen::MatrixXd::Zero(samples.cols(), samples.cols());
  c.covariance.selfadjointView<Eigen::Lower>().rankUpdate(centered.transpose(), inv_s);
  c.covariance.triangularView<Eigen::StrictlyUpper>() = c.covariance.transpose();
  c.covariance.diagonal().array() += ridge;
  return c;
}

GaussianMixture fit_mixture(const EmbeddingSamples& samples, double ridge, CovarianceMode mode) {
  if (samples.samples() < 2) throw DomainError("need at least two samples to fit a Gaussian");
  GaussianMixture m;
  m.components.reserve(samples.nodes());
  for (std::size_t v = 0; v < samples.nodes(); ++v) {
    if (mode == CovarianceMode::kFull) {
      m.components.push_back(fit_gaussian(samples.node(v), ridge));
    } else {
      const auto block = samples.node(v);
      m.components.push_back({block.colwise().mean().transpose(), Eigen::MatrixXd()});
    }
  }
  return m;
}

Eigen::MatrixXd ScaledMixture::covariance(std::size_t v) const {
  const Eigen::MatrixXd shared =
      shared_eigenvectors * shared_eigenvalues.asDiagonal() * shared_eigenvectors.transpose();
  const Eigen::VectorXd s = node_scales[v].cwiseSqrt().cwiseInverse();
  return s.asDiagonal() * shared * s.asDiagonal();
}

ScaledMixture scale_project(const GaussianMixture& m) {
  std::vector<const GaussianComponent*> comps;
  for (const auto& c : m.components) comps.push_back(&c);
  return assemble(m, project(comps), 0);
}

std::pair<ScaledMixture, ScaledMixture> scale_project_joint(const GaussianMixture& a, const GaussianMixture& b) {
  if (a.dimension() != b.dimension()) throw ShapeError("mixtures have different dimensions");
  std::vector<const GaussianComponent*> comps;
  for (const auto& c : a.components) comps.push_back(&c);
  for (const auto& c : b.components) comps.push_back(&c);
  const SharedProjection p = project(comps);
  return {assemble(a, p, 0), assemble(b, p, a.size())};
}

}  // namespace gmot
