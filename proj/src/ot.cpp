#include "gmot/ot.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include <Eigen/Eigenvalues>

#include "gmot/errors.hpp"
#include "gmot/ot_detail.hpp"

namespace gmot {
namespace {

constexpr double kSymmetryTolerance = 1e-9;

void require_same_dimension(Eigen::Index a, Eigen::Index b) {
  if (a != b) throw ShapeError("dimension mismatch: " + std::to_string(a) + " vs " + std::to_string(b));
}

// tr(M^1/2) for symmetric PSD M, from eigenvalues alone.
double trace_sqrt(const Eigen::MatrixXd& m) {
  const Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
}

double w2_from_root(const GaussianComponent& a, const Eigen::MatrixXd& root_a, const GaussianComponent& b) {
  const double mean_term = (a.mean - b.mean).squaredNorm();
  // Equal covariances give exactly the mean term; the general formula would
  // leave cancellation noise of order sqrt(eps) * tr(S) behind.
  if (a.covariance == b.covariance) return mean_term;
  const Eigen::MatrixXd cross = root_a * b.covariance * root_a;
  const double value = mean_term + a.covariance.trace() + b.covariance.trace() - 2.0 * trace_sqrt(cross);
  return std::max(value, 0.0);
}

void require_covariances(const GaussianMixture& m) {
  if (m.size() > 0 && !m.has_covariance()) throw DomainError("variant needs fitted covariances");
}

}  // namespace

std::string_view variant_name(Variant v) {
  switch (v) {
    case Variant::kFull: return "full";
    case Variant::kScaled: return "scaled";
    case Variant::kTied: return "tied";
  }
  return "?";
}

Variant parse_variant(std::string_view name) {
  if (name == "full") return Variant::kFull;
  if (name == "scaled") return Variant::kScaled;
  if (name == "tied") return Variant::kTied;
  throw DomainError("unknown variant \"" + std::string(name) + "\" (expected full, scaled or tied)");
}

Eigen::MatrixXd sqrtm_psd(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw ShapeError("matrix square root needs a square matrix");
  if (m.size() == 0) return m;
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > kSymmetryTolerance * scale)
    throw DomainError("matrix square root needs a symmetric matrix");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (m + m.transpose()));
  const Eigen::VectorXd roots = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return eig.eigenvectors() * roots.asDiagonal() * eig.eigenvectors().transpose();
}

double gaussian_w2_full(const GaussianComponent& a, const GaussianComponent& b) {
  require_same_dimension(a.mean.size(), b.mean.size());
  require_same_dimension(a.covariance.rows(), a.mean.size());
  require_same_dimension(b.covariance.rows(), b.mean.size());
  return w2_from_root(a, sqrtm_psd(a.covariance), b);
}

double gaussian_w2_scaled(const Eigen::VectorXd& mu_i, const Eigen::VectorXd& mu_j,
                          const Eigen::VectorXd& shared_eigenvalues, const Eigen::VectorXd& scales_i,
                          const Eigen::VectorXd& scales_j) {
  require_same_dimension(mu_i.size(), mu_j.size());
  require_same_dimension(shared_eigenvalues.size(), scales_i.size());
  require_same_dimension(shared_eigenvalues.size(), scales_j.size());
  if ((scales_i.array() <= 0.0).any() || (scales_j.array() <= 0.0).any())
    throw DomainError("scales must be strictly positive");
  double value = (mu_i - mu_j).squaredNorm();
  for (Eigen::Index x = 0; x < shared_eigenvalues.size(); ++x) {
    const double lambda = shared_eigenvalues[x];
    value += lambda / scales_i[x] + lambda / scales_j[x] - 2.0 * lambda / std::sqrt(scales_i[x] * scales_j[x]);
  }
  return std::max(value, 0.0);
}

double gaussian_w2_tied(const Eigen::VectorXd& mu_i, const Eigen::VectorXd& mu_j) {
  require_same_dimension(mu_i.size(), mu_j.size());
  return (mu_i - mu_j).squaredNorm();
}

namespace detail {

std::vector<Eigen::MatrixXd> covariance_roots(const GaussianMixture& m) {
  require_covariances(m);
  std::vector<Eigen::MatrixXd> roots;
  roots.reserve(m.size());
  for (const auto& c : m.components) roots.push_back(sqrtm_psd(c.covariance));
  return roots;
}

CostMatrix full_cost(const GaussianMixture& a, std::span<const Eigen::MatrixXd> roots_a, const GaussianMixture& b) {
  require_covariances(a);
  require_covariances(b);
  require_same_dimension(static_cast<Eigen::Index>(a.dimension()), static_cast<Eigen::Index>(b.dimension()));
  CostMatrix out{Eigen::MatrixXd(static_cast<Eigen::Index>(a.size()), static_cast<Eigen::Index>(b.size())),
                 Variant::kFull};
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      out.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          w2_from_root(a.components[i], roots_a[i], b.components[j]);
  return out;
}

}  // namespace detail

CostMatrix build_cost(const GaussianMixture& a, const GaussianMixture& b, Variant variant) {
  switch (variant) {
    case Variant::kFull: return detail::full_cost(a, detail::covariance_roots(a), b);
    case Variant::kScaled: {
      require_covariances(a);
      require_covariances(b);
      const auto [sa, sb] = scale_project_joint(a, b);
      return build_cost(sa, sb);
    }
    case Variant::kTied: {
      require_same_dimension(static_cast<Eigen::Index>(a.dimension()), static_cast<Eigen::Index>(b.dimension()));
      CostMatrix out{Eigen::MatrixXd(static_cast<Eigen::Index>(a.size()), static_cast<Eigen::Index>(b.size())),
                     Variant::kTied};
      for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
          out.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
              gaussian_w2_tied(a.components[i].mean, b.components[j].mean);
      return out;
    }
  }
  throw DomainError("unknown variant");
}

CostMatrix build_cost(const ScaledMixture& a, const ScaledMixture& b) {
  require_same_dimension(a.shared_eigenvalues.size(), b.shared_eigenvalues.size());
  CostMatrix out{Eigen::MatrixXd(static_cast<Eigen::Index>(a.size()), static_cast<Eigen::Index>(b.size())),
                 Variant::kScaled};
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      out.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = gaussian_w2_scaled(
          a.means[i], b.means[j], a.shared_eigenvalues, a.node_scales[i], b.node_scales[j]);
  return out;
}

std::size_t TransportPlan::support() const { return static_cast<std::size_t>((mass.array() > 0.0).count()); }

TransportPlan solve_discrete_ot(const Eigen::MatrixXd& cost) {
  if (cost.rows() == 0 || cost.cols() == 0) throw ShapeError("empty cost matrix");
  if (!cost.allFinite() || cost.minCoeff() < -1e-9) throw DomainError("cost must be finite and non-negative");
  const Eigen::MatrixXd clamped = cost.cwiseMax(0.0);
  const auto n1 = static_cast<std::int64_t>(cost.rows());
  const auto n2 = static_cast<std::int64_t>(cost.cols());
  // Integral marginals n2 per row and n1 per column keep every vertex exact.
  const std::vector<std::int64_t> supply(static_cast<std::size_t>(n1), n2);
  const std::vector<std::int64_t> demand(static_cast<std::size_t>(n2), n1);
  const auto flow = solve_transportation(clamped, supply, demand);

  TransportPlan plan;
  plan.mass = flow.cast<double>() / static_cast<double>(n1 * n2);
  plan.cost = (clamped.array() * plan.mass.array()).sum();
  return plan;
}

TransportPlan solve_discrete_ot(const CostMatrix& cost) { return solve_discrete_ot(cost.values); }

void write_plan_csv(std::ostream& out, const TransportPlan& plan) {
  const auto old_precision = out.precision(17);
  out << "i,j,mass\n";
  for (Eigen::Index i = 0; i < plan.mass.rows(); ++i)
    for (Eigen::Index j = 0; j < plan.mass.cols(); ++j) out << i + 1 << ',' << j + 1 << ',' << plan.mass(i, j) << '\n';
  out.precision(old_precision);
}

void write_cost_csv(std::ostream& out, const CostMatrix& cost) {
  const auto old_precision = out.precision(17);
  out << "i,j,cost\n";
  for (Eigen::Index i = 0; i < cost.values.rows(); ++i)
    for (Eigen::Index j = 0; j < cost.values.cols(); ++j)
      out << i + 1 << ',' << j + 1 << ',' << cost.values(i, j) << '\n';
  out.precision(old_precision);
}

}  // namespace gmot
