#include <doctest.h>

#include "gmot/errors.hpp"
#include "gmot/generators.hpp"
#include "gmot/gmm.hpp"
#include "helpers.hpp"

using namespace gmot;

namespace {

GaussianMixture mixture_of(std::vector<Eigen::MatrixXd> covs) {
  GaussianMixture m;
  for (auto& c : covs) m.components.push_back({Eigen::VectorXd::Zero(c.rows()), std::move(c)});
  return m;
}

}  // namespace

TEST_CASE("fit_gaussian on the corners of a square") {
  RowMatrixXd x(4, 2);
  x << 0, 0, 2, 0, 0, 2, 2, 2;
  const GaussianComponent g = fit_gaussian(x, 0.0);
  CHECK(g.mean.isApprox(Eigen::Vector2d(1, 1)));
  CHECK(g.covariance.isApprox(Eigen::Matrix2d::Identity()));
  const GaussianComponent r = fit_gaussian(x, 0.5);
  CHECK(r.covariance(0, 0) == doctest::Approx(1.5));
  CHECK(r.covariance(0, 1) == doctest::Approx(0.0));
  CHECK_THROWS_AS(fit_gaussian(x.topRows(1)), DomainError);
}

TEST_CASE("fit_gaussian agrees with a two-pass estimate") {
  Rng rng(1);
  RowMatrixXd x(300, 6);
  std::normal_distribution<double> normal;
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = normal(rng);
  const GaussianComponent g = fit_gaussian(x, 0.0);
  const Eigen::RowVectorXd mu = x.colwise().mean();
  const RowMatrixXd c = x.rowwise() - mu;
  const Eigen::MatrixXd cov = c.transpose() * c / 300.0;
  CHECK((g.mean - mu.transpose()).norm() < 1e-12);
  CHECK((g.covariance - cov).norm() < 1e-12);
}

TEST_CASE("fit_mixture shapes and means-only mode") {
  const Graph g = generate({GraphModel::kErdosRenyi, 12, 4.0, 2});
  EmbeddingConfig cfg;
  cfg.colors = 3;
  cfg.depth = 2;
  cfg.samples = 20;
  const auto samples = sample_embeddings(g, cfg);
  const GaussianMixture full = fit_mixture(samples);
  CHECK(full.size() == 12);
  CHECK(full.dimension() == 9);
  CHECK(full.has_covariance());
  const GaussianMixture means = fit_mixture(samples, kDefaultRidge, CovarianceMode::kMeansOnly);
  CHECK_FALSE(means.has_covariance());
  for (std::size_t v = 0; v < 12; ++v) CHECK((means.components[v].mean - full.components[v].mean).norm() < 1e-12);
}

TEST_CASE("scaled projection: trace ratios of 2I and I") {
  // Mean covariance is 1.5 I, so the trace ratios are 4/3 and 2/3 and each
  // covariance is recovered exactly as shared / scale.
  const GaussianMixture m = mixture_of({2.0 * Eigen::MatrixXd::Identity(3, 3), Eigen::MatrixXd::Identity(3, 3)});
  const ScaledMixture s = scale_project(m);
  CHECK(s.shared_eigenvalues.isApprox(Eigen::Vector3d::Constant(1.5)));
  CHECK(s.node_scales[0].isApprox(Eigen::Vector3d::Constant(3.0 / 4.0)));
  CHECK(s.node_scales[1].isApprox(Eigen::Vector3d::Constant(3.0 / 2.0)));
  CHECK(s.covariance(0).isApprox(m.components[0].covariance));
  CHECK(s.covariance(1).isApprox(m.components[1].covariance));
}

TEST_CASE("property: scaled projection round-trips exact scaled copies") {
  Rng rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::MatrixXd base = test::random_spd(5, rng);
    std::uniform_real_distribution<double> c(0.2, 4.0);
    std::vector<Eigen::MatrixXd> covs;
    for (int v = 0; v < 6; ++v) covs.push_back(c(rng) * base);
    const GaussianMixture m = mixture_of(covs);
    const ScaledMixture s = scale_project(m);
    for (std::size_t v = 0; v < 6; ++v) CHECK((s.covariance(v) - covs[v]).norm() < 1e-9 * covs[v].norm());
  }
}

TEST_CASE("joint projection shares one spectrum") {
  const GaussianMixture a = mixture_of({2.0 * Eigen::MatrixXd::Identity(2, 2)});
  const GaussianMixture b = mixture_of({4.0 * Eigen::MatrixXd::Identity(2, 2), 6.0 * Eigen::MatrixXd::Identity(2, 2)});
  const auto [pa, pb] = scale_project_joint(a, b);
  CHECK(pa.shared_eigenvalues.isApprox(pb.shared_eigenvalues));
  CHECK(pa.shared_eigenvalues.isApprox(Eigen::Vector2d::Constant(4.0)));
  CHECK(pa.covariance(0).isApprox(2.0 * Eigen::Matrix2d::Identity()));
  CHECK(pb.covariance(1).isApprox(6.0 * Eigen::Matrix2d::Identity()));

  const GaussianMixture c = mixture_of({Eigen::MatrixXd::Identity(3, 3)});
  CHECK_THROWS_AS(scale_project_joint(a, c), ShapeError);
}
