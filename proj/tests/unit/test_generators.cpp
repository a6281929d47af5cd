#include <doctest.h>

#include <set>

#include "gmot/errors.hpp"
#include "gmot/generators.hpp"

using namespace gmot;

namespace {

bool simple_undirected(const Graph& g) {
  const Eigen::MatrixXd a = g.dense();
  return a.isApprox(a.transpose(), 0.0) && a.minCoeff() >= 0.0 && a.diagonal().isZero() &&
         (a.array() == 0.0 || a.array() == 1.0).all();
}

double mean_degree(const Graph& g) { return g.degrees().mean(); }

}  // namespace

TEST_CASE("every model yields a simple symmetric graph with n nodes") {
  for (const auto model : kAllModels) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const Graph g = generate({model, 10 + 19 * seed, 6.0, seed});
      CAPTURE(model_name(model));
      CHECK(g.size() == 10 + 19 * seed);
      CHECK(simple_undirected(g));
    }
  }
}

TEST_CASE("generation is a pure function of the spec") {
  for (const auto model : kAllModels) {
    const GeneratorSpec spec{model, 80, 6.0, 42};
    CHECK(generate(spec).dense() == generate(spec).dense());
    GeneratorSpec other = spec;
    other.seed = 43;
    CHECK(generate(spec).dense() != generate(other).dense());
  }
}

TEST_CASE("edge counts of the deterministic-size models") {
  // WS rewiring moves edges but never adds or removes them; BA starts from
  // an (m+1)-clique and adds m edges per further node.
  const std::size_t n = 50;
  const Graph ws = generate({GraphModel::kWattsStrogatz, n, 6.0, 1});
  CHECK(ws.edges().size() == n * 3);
  const Graph ba = generate({GraphModel::kBarabasiAlbert, n, 6.0, 1});
  CHECK(ba.edges().size() == 3 * 4 / 2 + (n - 4) * 3);
}

TEST_CASE("expected degree is respected on average") {
  for (const auto model : kAllModels) {
    double total = 0.0;
    const int trials = 20;
    for (int t = 0; t < trials; ++t) total += mean_degree(generate({model, 200, 6.0, 100u + t}));
    const double mean = total / trials;
    CAPTURE(model_name(model));
    // BA with m = 3 averages 2m minus a small clique correction; CF loses a
    // little to discarded self-loops and duplicate stubs.
    CHECK(mean == doctest::Approx(6.0).epsilon(0.06));
  }
}

TEST_CASE("spec validation") {
  CHECK_THROWS_AS(generate({GraphModel::kErdosRenyi, 1, 0.5, 0}), DomainError);
  CHECK_THROWS_AS(generate({GraphModel::kErdosRenyi, 10, 0.0, 0}), DomainError);
  CHECK_THROWS_AS(generate({GraphModel::kErdosRenyi, 10, 9.5, 0}), DomainError);
  CHECK_NOTHROW(generate({GraphModel::kErdosRenyi, 10, 9.0, 0}));
  CHECK_THROWS_AS(parse_model("XX"), DomainError);
  CHECK(parse_model("CF") == GraphModel::kConfiguration);
}

TEST_CASE("synthetic dataset layout") {
  DatasetOptions opt;
  opt.seed = 9;
  const auto entries = synthetic_dataset(opt);
  REQUIRE(entries.size() == 80);
  std::set<std::string> names;
  for (const auto& e : entries) {
    CHECK(e.spec.n >= 10);
    CHECK(e.spec.n <= 200);
    CHECK(e.label == model_name(e.spec.model));
    CHECK(e.name.substr(0, 3) == e.label + "_");
    names.insert(e.name);
  }
  CHECK(names.size() == 80);
  CHECK(entries.front().name == "ER_00");

  const auto again = synthetic_dataset(opt);
  for (std::size_t i = 0; i < entries.size(); ++i) CHECK(entries[i].spec.seed == again[i].spec.seed);
}
