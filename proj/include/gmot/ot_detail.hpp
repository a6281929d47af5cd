#pragma once

#include <span>
#include <vector>

#include "gmot/ot.hpp"

namespace gmot::detail {

/// Square roots of every component covariance, reused across cost rows.
std::vector<Eigen::MatrixXd> covariance_roots(const GaussianMixture& m);

/// Full-variant cost with the roots of `a` precomputed.
CostMatrix full_cost(const GaussianMixture& a, std::span<const Eigen::MatrixXd> roots_a, const GaussianMixture& b);

}  // namespace gmot::detail
