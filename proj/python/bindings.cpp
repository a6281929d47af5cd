#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <string>
#include <tuple>
#include <vector>

#include "gmot/errors.hpp"
#include "gmot/eval.hpp"
#include "gmot/generators.hpp"
#include "gmot/graph.hpp"
#include "gmot/ot.hpp"
#include "gmot/pipeline.hpp"

namespace py = pybind11;
using namespace gmot;

namespace {

EmbeddingConfig make_config(const std::string& method, std::size_t colors, std::size_t depth, std::size_t samples,
                            std::uint64_t seed) {
  EmbeddingConfig cfg;
  cfg.method = parse_embedding_method(method);
  cfg.colors = colors;
  cfg.depth = depth;
  cfg.samples = samples;
  cfg.seed = seed;
  return cfg;
}

// Labels may be strings or integers; both end up as dense ids.
std::vector<int> label_ids(const py::sequence& labels) {
  std::vector<std::string> names;
  names.reserve(labels.size());
  for (const auto& l : labels) names.push_back(py::str(l));
  return encode_labels(names);
}

py::dict plan_dict(const MixtureDistance& r) {
  py::dict d;
  d["distance"] = r.distance;
  d["plan"] = r.plan.mass;
  d["cost"] = r.cost.values;
  return d;
}

}  // namespace

PYBIND11_MODULE(_gmot, m) {
  m.doc() = "Graph distances from optimal transport between Gaussian mixtures of node embeddings.";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

  py::class_<Graph>(m, "Graph")
      .def(py::init([](const Eigen::MatrixXd& adjacency) { return Graph::from_dense(adjacency); }), py::arg("adjacency"),
           "Graph from a symmetric non-negative adjacency matrix.")
      .def_static(
          "from_edges",
          [](std::size_t n, const std::vector<std::tuple<std::size_t, std::size_t, double>>& edges) {
            std::vector<Edge> e;
            e.reserve(edges.size());
            for (const auto& [u, v, w] : edges) e.push_back({u, v, w});
            return Graph::from_edges(n, e);
          },
          py::arg("n"), py::arg("edges"), "Graph from 0-based (u, v, weight) triples.")
      .def_property_readonly("size", &Graph::size)
      .def("dense", &Graph::dense)
      .def("degrees", &Graph::degrees)
      .def("edges",
           [](const Graph& g) {
             std::vector<std::tuple<std::size_t, std::size_t, double>> out;
             for (const auto& e : g.edges()) out.emplace_back(e.u, e.v, e.weight);
             return out;
           })
      .def("__len__", &Graph::size)
      .def("__repr__", [](const Graph& g) {
        return "<Graph n=" + std::to_string(g.size()) + " edges=" + std::to_string(g.edges().size()) + ">";
      });

  m.def("load_graph", py::overload_cast<const std::filesystem::path&>(&load_graph), py::arg("path"),
        "Reads a .csv dense matrix or a 1-based edge list.");
  m.def("matrix_norm", &matrix_norm, py::arg("graph"));
  m.def(
      "generate",
      [](const std::string& model, std::size_t n, double expected_degree, std::uint64_t seed) {
        return generate({parse_model(model), n, expected_degree, seed});
      },
      py::arg("model"), py::arg("n"), py::arg("expected_degree") = 6.0, py::arg("seed") = 0);
  m.def(
      "synthetic_dataset",
      [](std::size_t per_model, std::size_t min_nodes, std::size_t max_nodes, double expected_degree,
         std::uint64_t seed) {
        DatasetOptions opt;
        opt.per_model = per_model;
        opt.min_nodes = min_nodes;
        opt.max_nodes = max_nodes;
        opt.expected_degree = expected_degree;
        opt.seed = seed;
        py::list out;
        for (const auto& e : synthetic_dataset(opt)) out.append(py::make_tuple(e.name, e.label, generate(e.spec)));
        return out;
      },
      py::arg("per_model") = 20, py::arg("min_nodes") = 10, py::arg("max_nodes") = 200,
      py::arg("expected_degree") = 6.0, py::arg("seed") = 0, "List of (name, label, graph).");

  py::class_<EmbeddingConfig>(m, "EmbeddingConfig")
      .def(py::init(&make_config), py::arg("method") = "ccb", py::arg("colors") = 10, py::arg("depth") = 5,
           py::arg("samples") = 1000, py::arg("seed") = 0)
      .def_property(
          "method", [](const EmbeddingConfig& c) { return std::string(method_name(c.method)); },
          [](EmbeddingConfig& c, const std::string& s) { c.method = parse_embedding_method(s); })
      .def_readwrite("colors", &EmbeddingConfig::colors)
      .def_readwrite("depth", &EmbeddingConfig::depth)
      .def_readwrite("samples", &EmbeddingConfig::samples)
      .def_readwrite("seed", &EmbeddingConfig::seed)
      .def_property_readonly("dimension", &EmbeddingConfig::dimension);

  m.def(
      "sample_embeddings",
      [](const Graph& g, const EmbeddingConfig& cfg) {
        EmbeddingSamples s = sample_embeddings(g, cfg);
        py::array_t<double> out({s.nodes(), s.samples(), s.dimension()});
        std::copy(s.data().begin(), s.data().end(), out.mutable_data());
        return out;
      },
      py::arg("graph"), py::arg("config"), "Array of shape (nodes, samples, dimension).");

  m.def(
      "gaussian_w2_full",
      [](const Eigen::VectorXd& mu1, const Eigen::MatrixXd& cov1, const Eigen::VectorXd& mu2,
         const Eigen::MatrixXd& cov2) { return gaussian_w2_full({mu1, cov1}, {mu2, cov2}); },
      py::arg("mean1"), py::arg("cov1"), py::arg("mean2"), py::arg("cov2"));
  m.def("gaussian_w2_scaled", &gaussian_w2_scaled, py::arg("mean1"), py::arg("mean2"), py::arg("shared_eigenvalues"),
        py::arg("scales1"), py::arg("scales2"));
  m.def("gaussian_w2_tied", &gaussian_w2_tied, py::arg("mean1"), py::arg("mean2"));

  m.def(
      "solve_discrete_ot",
      [](const Eigen::MatrixXd& cost) {
        const TransportPlan p = solve_discrete_ot(cost);
        return py::make_tuple(p.mass, p.cost);
      },
      py::arg("cost"), "Exact coupling between uniform marginals: (plan, cost).");

  m.def(
      "mixture_distance",
      [](const Graph& g1, const Graph& g2, const EmbeddingConfig& cfg, const std::string& variant, double ridge) {
        MixtureDistance r;
        {
          py::gil_scoped_release release;
          r = mixture_distance(g1, g2, cfg, parse_variant(variant), ridge);
        }
        return plan_dict(r);
      },
      py::arg("graph1"), py::arg("graph2"), py::arg("config") = EmbeddingConfig{}, py::arg("variant") = "tied",
      py::arg("ridge") = kDefaultRidge, "dict with distance, plan and cost.");

  m.def(
      "pairwise_distances",
      [](const std::vector<Graph>& graphs, const std::string& method, const std::string& variant,
         const EmbeddingConfig& cfg, std::size_t threads) {
        PairwiseOptions opt;
        opt.embedding = cfg;
        opt.threads = threads;
        DistanceMatrix d;
        {
          py::gil_scoped_release release;
          d = pairwise_distances(graphs, MethodSpec::parse(method, variant), opt);
        }
        py::dict out;
        out["distances"] = d.values;
        out["method"] = d.method;
        out["mean_pair_ms"] = d.mean_pair_ms;
        out["pairs"] = d.pair_evaluations;
        return out;
      },
      py::arg("graphs"), py::arg("method") = "ccb", py::arg("variant") = "tied", py::arg("config") = EmbeddingConfig{},
      py::arg("threads") = 0);

  m.def("baseline_degree", &baseline_degree, py::arg("graph1"), py::arg("graph2"));
  m.def("baseline_ev", &baseline_ev, py::arg("graph1"), py::arg("graph2"));

  m.def(
      "knn_cv",
      [](const Eigen::MatrixXd& distances, const py::sequence& labels, std::size_t neighbors, std::size_t folds,
         double test_fraction, std::uint64_t seed) {
        const EvalReport r = knn_cv(distances, label_ids(labels), {neighbors, folds, test_fraction, seed});
        py::dict out;
        out["mean"] = r.knn_mean;
        out["std"] = r.knn_std;
        out["folds"] = r.fold_accuracy;
        out["regenerated_folds"] = r.regenerated_folds;
        return out;
      },
      py::arg("distances"), py::arg("labels"), py::arg("neighbors") = 5, py::arg("folds") = 20,
      py::arg("test_fraction") = 0.2, py::arg("seed") = 0);
  m.def(
      "silhouette",
      [](const Eigen::MatrixXd& distances, const py::sequence& labels) {
        return silhouette(distances, label_ids(labels));
      },
      py::arg("distances"), py::arg("labels"));
  m.def("hierarchical_order", &hierarchical_order, py::arg("distances"), "0-based leaf order of the UPGMA dendrogram.");
}
