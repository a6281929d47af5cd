#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "gmot/errors.hpp"
#include "gmot/eval.hpp"
#include "gmot/generators.hpp"
#include "helpers.hpp"

using namespace gmot;
using gmot::test::complete_graph;
using gmot::test::path_graph;

namespace {

Eigen::MatrixXd line_distances(std::span<const double> x) {
  const auto n = static_cast<Eigen::Index>(x.size());
  Eigen::MatrixXd d(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) d(i, j) = std::abs(x[static_cast<std::size_t>(i)] - x[static_cast<std::size_t>(j)]);
  return d;
}

Eigen::MatrixXd random_distances(Eigen::Index n, Rng& rng) {
  std::uniform_real_distribution<double> u(0.1, 1.0);
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) d(i, j) = d(j, i) = u(rng);
  return d;
}

}  // namespace

TEST_CASE("degree baseline oracles") {
  // P3 has degrees (1,2,1), the triangle (2,2,2): |(2/3,1/3) - (0,1)| over bins {1,2}.
  const Graph tri = complete_graph(3);
  CHECK(baseline_degree(path_graph(3), tri) == doctest::Approx(std::sqrt(8.0 / 9.0)).epsilon(1e-12));
  CHECK(baseline_degree(tri, tri) == 0.0);
  const std::size_t perm[] = {2, 0, 1};
  CHECK(baseline_degree(tri, permute(tri, perm)) == 0.0);
  // Different sizes pad the shorter histogram.
  CHECK(baseline_degree(path_graph(2), path_graph(5)) == doctest::Approx(std::sqrt(0.6 * 0.6 + 0.6 * 0.6)).epsilon(1e-12));
}

TEST_CASE("dominant eigenvector against a dense solver") {
  Rng rng(21);
  for (int trial = 0; trial < 8; ++trial) {
    const Graph g = generate({kAllModels[trial % 4], 30, 5.0, rng()});
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g.dense());
    Eigen::VectorXd ref = es.eigenvectors().col(es.eigenvalues().size() - 1);
    Eigen::Index arg;
    ref.cwiseAbs().maxCoeff(&arg);
    if (ref(arg) < 0) ref = -ref;
    const Eigen::VectorXd v = dominant_eigenvector(g);
    CHECK(v.norm() == doctest::Approx(1.0));
    CHECK((v - ref).norm() < 1e-6);
  }
}

TEST_CASE("EV baseline on the triangle and the three-node path") {
  // Triangle: (1,1,1)/sqrt3. Path (bipartite, so plain power iteration would
  // oscillate): (1, sqrt2, 1)/2, sorted (sqrt2/2, 1/2, 1/2).
  const double s = 1.0 / std::sqrt(3.0);
  const double expected = std::sqrt(std::pow(s - std::sqrt(0.5), 2) + 2 * std::pow(s - 0.5, 2));
  CHECK(baseline_ev(complete_graph(3), path_graph(3)) == doctest::Approx(expected).epsilon(1e-8));
  CHECK(baseline_ev(path_graph(3), path_graph(3)) == doctest::Approx(0.0));
}

TEST_CASE("label encoding follows first appearance") {
  const std::string labels[] = {"WS", "ER", "WS", "BA"};
  CHECK(encode_labels(labels) == std::vector<int>{0, 1, 0, 2});
}

TEST_CASE("kNN on separated clusters is perfect") {
  const double x[] = {0, 0.1, 0.2, 0.3, 0.4, 10, 10.1, 10.2, 10.3, 10.4};
  const int y[] = {0, 0, 0, 0, 0, 1, 1, 1, 1, 1};
  KnnOptions opt;
  opt.neighbors = 3;
  opt.seed = 5;
  const EvalReport r = knn_cv(line_distances(x), y, opt);
  CHECK(r.knn_mean == 1.0);
  CHECK(r.knn_std == 0.0);
  CHECK(r.fold_accuracy.size() == 20);
  CHECK(r.regenerated_folds == 0);
}

TEST_CASE("kNN with shuffled labels stays at chance") {
  // 80 points in 4 balanced classes with structureless distances.
  Rng rng(13);
  const Eigen::MatrixXd d = random_distances(80, rng);
  std::vector<int> y(80);
  for (std::size_t i = 0; i < 80; ++i) y[i] = static_cast<int>(i / 20);
  std::shuffle(y.begin(), y.end(), rng);
  const EvalReport r = knn_cv(d, y, {5, 20, 0.2, 1});
  CHECK(r.knn_mean >= 0.15);
  CHECK(r.knn_mean <= 0.35);
}

TEST_CASE("kNN spread uses the population standard deviation") {
  Rng rng(2);
  const Eigen::MatrixXd d = random_distances(40, rng);
  std::vector<int> y(40);
  for (std::size_t i = 0; i < 40; ++i) y[i] = static_cast<int>(i % 2);
  const EvalReport r = knn_cv(d, y, {3, 7, 0.25, 3});
  REQUIRE(r.fold_accuracy.size() == 7);
  double m = 0.0, v = 0.0;
  for (double a : r.fold_accuracy) m += a / 7.0;
  for (double a : r.fold_accuracy) v += (a - m) * (a - m) / 7.0;
  CHECK(r.knn_mean == doctest::Approx(m));
  CHECK(r.knn_std == doctest::Approx(std::sqrt(v)));
  CHECK_THROWS_AS(knn_cv(d, y, {0, 7, 0.25, 3}), DomainError);
  CHECK_THROWS_AS(knn_cv(d, y, {3, 7, 1.0, 3}), DomainError);
}

TEST_CASE("silhouette of two pairs on a line") {
  // Points 0,1 | 10,11: s = 1 - 1/10.5 for the outer points, 1 - 1/9.5 for the inner ones.
  const double x[] = {0, 1, 10, 11};
  const int y[] = {0, 0, 1, 1};
  const double expected = ((1 - 1 / 10.5) + (1 - 1 / 9.5)) / 2;
  CHECK(silhouette(line_distances(x), y) == doctest::Approx(expected).epsilon(1e-12));

  // A singleton contributes 0 but still counts in the mean.
  const double x3[] = {0, 1, 10};
  const int y3[] = {0, 0, 1};
  const double s3 = ((1 - 1 / 10.0) + (1 - 1 / 9.0)) / 3;
  CHECK(silhouette(line_distances(x3), y3) == doctest::Approx(s3).epsilon(1e-12));
  const int one[] = {0, 0, 0};
  CHECK_THROWS_AS(silhouette(line_distances(x3), one), DomainError);
}

TEST_CASE("average-linkage leaf order") {
  const double x[] = {10, 0, 11, 1};
  const auto order = hierarchical_order(line_distances(x));
  // Two merges tie at distance 1; (0,2) goes first as cluster 4, then (1,3) as 5.
  CHECK(order == std::vector<std::size_t>{0, 2, 1, 3});
}

TEST_CASE("property: leaf order is a permutation, invariant to a constant shift") {
  Rng rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::MatrixXd d = random_distances(25, rng);
    const auto order = hierarchical_order(d);
    std::vector<std::size_t> sorted = order;
    std::sort(sorted.begin(), sorted.end());
    std::vector<std::size_t> iota(25);
    std::iota(iota.begin(), iota.end(), std::size_t{0});
    CHECK(sorted == iota);
    Eigen::MatrixXd shifted = d.array() + 3.0;
    shifted.diagonal().setZero();
    CHECK(hierarchical_order(shifted) == order);
  }
}

TEST_CASE("pairwise distances: baselines and transport") {
  std::vector<Graph> graphs{path_graph(3), complete_graph(3), path_graph(4)};
  const DistanceMatrix deg = pairwise_distances(graphs, MethodSpec::parse("degree"));
  CHECK(deg.method == "Degree");
  CHECK(deg.values(0, 1) == doctest::Approx(baseline_degree(graphs[0], graphs[1])));
  CHECK(deg.values.isApprox(deg.values.transpose()));
  CHECK(deg.values.diagonal().isZero());

  PairwiseOptions opt;
  opt.embedding.colors = 2;
  opt.embedding.depth = 2;
  opt.embedding.samples = 30;
  opt.threads = 2;
  std::set<std::pair<std::size_t, std::size_t>> seen;
  opt.on_pair = [&](std::size_t i, std::size_t j, const MixtureDistance&) { seen.insert({i, j}); };
  const DistanceMatrix ccb = pairwise_distances(graphs, MethodSpec::parse("ccb", "full"), opt);
  CHECK(ccb.method == "CCB-full");
  CHECK(ccb.pair_evaluations == 3);
  CHECK(seen.size() == 3);
  CHECK(ccb.mean_pair_ms > 0.0);
  CHECK(ccb.values(0, 2) == doctest::Approx(mixture_distance(graphs[0], graphs[2], opt.embedding, Variant::kFull).distance));
  CHECK_THROWS_AS(MethodSpec::parse("wl"), DomainError);
}
