#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "gmot/gmm.hpp"

namespace gmot {

/// How component-to-component distances are computed.
///  kFull:   closed-form W2^2 with matrix square roots.
///  kScaled: eigenvalue formula for covariances that are scaled copies of a shared one.
///  kTied:   squared distance between means.
enum class Variant { kFull, kScaled, kTied };

std::string_view variant_name(Variant v);
Variant parse_variant(std::string_view name);

/// V sqrt(Lambda) V^T of a symmetric PSD matrix; eigenvalues below zero
/// (down to -1e-8 relative) are clamped.
Eigen::MatrixXd sqrtm_psd(const Eigen::MatrixXd& m);

/// ||mu1 - mu2||^2 + tr S1 + tr S2 - 2 tr((S1^1/2 S2 S1^1/2)^1/2), clamped at 0.
double gaussian_w2_full(const GaussianComponent& a, const GaussianComponent& b);

/// ||mu_i - mu_j||^2 + sum_x lambda_x (1/d_i + 1/d_j - 2/sqrt(d_i d_j)), clamped at 0.
double gaussian_w2_scaled(const Eigen::VectorXd& mu_i, const Eigen::VectorXd& mu_j,
                          const Eigen::VectorXd& shared_eigenvalues, const Eigen::VectorXd& scales_i,
                          const Eigen::VectorXd& scales_j);

double gaussian_w2_tied(const Eigen::VectorXd& mu_i, const Eigen::VectorXd& mu_j);

struct CostMatrix {
  Eigen::MatrixXd values;
  Variant variant = Variant::kTied;
};

/// Pairwise component distances. For kScaled the two mixtures are projected
/// jointly first. Full and scaled variants need fitted covariances.
CostMatrix build_cost(const GaussianMixture& a, const GaussianMixture& b, Variant variant);
/// Scaled variant from an existing joint projection.
CostMatrix build_cost(const ScaledMixture& a, const ScaledMixture& b);

struct TransportPlan {
  Eigen::MatrixXd mass;  // n1 x n2, rows sum to 1/n1, columns to 1/n2
  double cost = 0.0;

  /// Number of strictly positive entries.
  std::size_t support() const;
};

/// Exact optimal coupling between uniform marginals.
TransportPlan solve_discrete_ot(const CostMatrix& cost);
TransportPlan solve_discrete_ot(const Eigen::MatrixXd& cost);

/// Exact transportation problem with integral supplies and demands of equal
/// total, solved with the network simplex method. Returns the flow matrix.
Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> solve_transportation(
    const Eigen::MatrixXd& cost, std::span<const std::int64_t> supply, std::span<const std::int64_t> demand);

/// CSV "i,j,mass" (1-based, row-major, every entry).
void write_plan_csv(std::ostream& out, const TransportPlan& plan);
/// CSV "i,j,cost" (1-based, row-major, every entry).
void write_cost_csv(std::ostream& out, const CostMatrix& cost);

}  // namespace gmot
