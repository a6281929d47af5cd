#include "cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gmot/errors.hpp"
#include "gmot/eval.hpp"
#include "gmot/generators.hpp"
#include "gmot/graph.hpp"
#include "gmot/ot.hpp"
#include "gmot/parallel.hpp"
#include "gmot/pipeline.hpp"

namespace gmot::cli {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

constexpr const char* kSeedEnv = "GMOT_SEED";

// Files written by a command; removed again unless the command commits.
class OutputSet {
 public:
  OutputSet() = default;
  OutputSet(const OutputSet&) = delete;
  OutputSet& operator=(const OutputSet&) = delete;
  ~OutputSet() {
    if (committed_) return;
    std::error_code ec;
    for (auto it = files_.rbegin(); it != files_.rend(); ++it) fs::remove(*it, ec);
  }

  void write(const fs::path& path, const std::string& contents) {
    if (path.has_parent_path()) {
      std::error_code ec;
      fs::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    files_.push_back(path);
    out << contents;
    out.close();
    if (!out) throw std::runtime_error("failed writing " + path.string());
  }

  void commit() { committed_ = true; }

 private:
  std::vector<fs::path> files_;
  bool committed_ = false;
};

struct CommonOptions {
  std::uint64_t seed = 0;
  std::size_t threads = 0;
};

struct EmbeddingOptions {
  std::string method = "ccb";
  std::string variant = "tied";
  std::size_t samples = 1000;
  std::size_t colors = 10;
  std::size_t depth = 5;
  double ridge = kDefaultRidge;

  EmbeddingConfig config(std::uint64_t seed) const {
    EmbeddingConfig cfg;
    cfg.method = method == "cnp" ? EmbeddingMethod::kCnp : EmbeddingMethod::kCcb;
    cfg.samples = samples;
    cfg.colors = colors;
    cfg.depth = depth;
    cfg.seed = seed;
    return cfg;
  }
};

void add_embedding_options(CLI::App& cmd, EmbeddingOptions& opts, bool baselines) {
  std::vector<std::string> methods{"ccb", "cnp"};
  if (baselines) {
    methods.emplace_back("degree");
    methods.emplace_back("ev");
  }
  cmd.add_option("--method", opts.method, "Graph distance")->check(CLI::IsMember(methods))->capture_default_str();
  cmd.add_option("--variant", opts.variant, "Component distance")
      ->check(CLI::IsMember({"full", "scaled", "tied"}))
      ->capture_default_str();
  cmd.add_option("--samples,-s", opts.samples, "Embedding samples per node")->check(CLI::Range(2, 1 << 30))->capture_default_str();
  cmd.add_option("--colors,-k", opts.colors, "Number of colors")->check(CLI::PositiveNumber)->capture_default_str();
  cmd.add_option("--depth,-d", opts.depth, "Propagation depth")->capture_default_str();
  cmd.add_option("--ridge", opts.ridge, "Covariance ridge")->check(CLI::NonNegativeNumber)->capture_default_str();
}

std::string format_matrix_csv(const Eigen::MatrixXd& m) {
  std::ostringstream out;
  out << std::setprecision(17);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) out << (j ? "," : "") << m(i, j);
    out << '\n';
  }
  return out.str();
}

Eigen::MatrixXd read_matrix_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
      } catch (const std::exception&) {
        throw ParseError(path.string() + ": non-numeric cell \"" + cell + "\"", line_no);
      }
    }
    rows.push_back(std::move(row));
  }
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.size()) throw ShapeError(path.string() + " is not a square matrix");
    for (std::size_t j = 0; j < rows.size(); ++j) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  }
  return m;
}

Json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

fs::path sidecar_path(const fs::path& csv) {
  fs::path p = csv;
  p.replace_extension(".json");
  return p;
}

// ---- generate -------------------------------------------------------------

struct GenerateOptions {
  std::vector<std::string> models{"ER", "WS", "BA", "CF"};
  std::size_t per_model = 20;
  std::size_t min_nodes = 10;
  std::size_t max_nodes = 200;
  double degree = 6.0;
  std::string out;
};

void cmd_generate(const GenerateOptions& opts, const CommonOptions& common) {
  DatasetOptions ds;
  ds.models.clear();
  for (const auto& m : opts.models) ds.models.push_back(parse_model(m));
  ds.per_model = opts.per_model;
  ds.min_nodes = opts.min_nodes;
  ds.max_nodes = opts.max_nodes;
  ds.expected_degree = opts.degree;
  ds.seed = common.seed;

  const fs::path dir(opts.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (!fs::is_directory(dir)) throw std::runtime_error("cannot create output directory " + dir.string());

  OutputSet outputs;
  Json manifest = Json::object();
  for (const DatasetEntry& entry : synthetic_dataset(ds)) {
    const Graph g = generate(entry.spec);
    std::ostringstream text;
    text << "# model: " << entry.label << ", seed: " << entry.spec.seed << '\n';
    write_edge_list(text, g);
    const std::string file = entry.name + ".edges";
    outputs.write(dir / file, text.str());
    manifest[file] = entry.label;
  }
  outputs.write(dir / "manifest.json", manifest.dump(2) + "\n");
  outputs.commit();
  std::cout << "wrote " << manifest.size() << " graphs to " << dir.string() << '\n';
}

// ---- distance -------------------------------------------------------------

struct DistanceOptions {
  std::vector<std::string> inputs;
  std::string manifest;
  EmbeddingOptions embedding;
  std::string out = "distances.csv";
  std::string plans;
};

struct Dataset {
  std::vector<std::string> names;  // as listed in the manifest or on the command line
  std::vector<Graph> graphs;
  std::vector<std::string> labels;  // empty without a manifest
};

Dataset load_dataset(const std::vector<std::string>& inputs, const std::string& manifest) {
  Dataset ds;
  std::vector<fs::path> paths;
  if (!manifest.empty()) {
    const fs::path mpath(manifest);
    const Json m = read_json(mpath);
    if (!m.is_object()) throw std::runtime_error(manifest + ": expected an object mapping file to class");
    for (const auto& [file, label] : m.items()) {
      ds.names.push_back(file);
      ds.labels.push_back(label.get<std::string>());
      paths.push_back(mpath.parent_path() / file);
    }
  }
  for (const auto& in : inputs) {
    ds.names.push_back(in);
    paths.emplace_back(in);
  }
  if (!ds.labels.empty() && !inputs.empty()) ds.labels.clear();
  for (std::size_t i = 0; i < paths.size(); ++i) {
    try {
      ds.graphs.push_back(load_graph(paths[i]));
    } catch (const std::exception& e) {
      throw std::runtime_error("cannot read graph " + paths[i].string() + ": " + e.what());
    }
  }
  return ds;
}

void cmd_distance(const DistanceOptions& opts, const CommonOptions& common) {
  Dataset ds = load_dataset(opts.inputs, opts.manifest);
  if (ds.graphs.size() < 2) throw std::runtime_error("distance needs at least two graphs");

  const MethodSpec method = MethodSpec::parse(opts.embedding.method, opts.embedding.variant);
  PairwiseOptions pw;
  pw.embedding = opts.embedding.config(common.seed);
  pw.ridge = opts.embedding.ridge;
  pw.threads = common.threads;

  OutputSet outputs;
  if (!opts.plans.empty() && method.is_transport()) {
    pw.on_pair = [&](std::size_t i, std::size_t j, const MixtureDistance& r) {
      std::ostringstream text;
      write_plan_csv(text, r.plan);
      outputs.write(fs::path(opts.plans) / ("plan_" + std::to_string(i + 1) + "_" + std::to_string(j + 1) + ".csv"),
                    text.str());
    };
  }
  const DistanceMatrix dm = pairwise_distances(ds.graphs, method, pw);

  const fs::path csv(opts.out);
  outputs.write(csv, format_matrix_csv(dm.values));
  Json side;
  side["method"] = dm.method;
  side["variant"] = method.is_transport() ? std::string(variant_name(method.variant)) : "";
  side["config"] = {{"samples", pw.embedding.samples}, {"colors", pw.embedding.colors},
                    {"depth", pw.embedding.depth},     {"seed", pw.embedding.seed},
                    {"ridge", pw.ridge},               {"threads", resolve_threads(common.threads)}};
  side["files"] = ds.names;
  if (!ds.labels.empty()) side["labels"] = ds.labels;
  side["times"] = {{"mean_pair_ms", dm.mean_pair_ms}, {"pairs", dm.pair_evaluations}};
  outputs.write(sidecar_path(csv), side.dump(2) + "\n");
  outputs.commit();
  std::cout << dm.method << ": " << ds.graphs.size() << " graphs, " << dm.pair_evaluations << " pairs, "
            << std::setprecision(4) << dm.mean_pair_ms << " ms/pair -> " << csv.string() << '\n';
}

// ---- eval -----------------------------------------------------------------

struct EvalOptions {
  std::string distances;
  std::string manifest;
  std::size_t neighbors = 5;
  std::size_t folds = 20;
  double test_fraction = 0.2;
  std::string out = "report.json";
  std::string order;
};

void cmd_eval(const EvalOptions& opts, const CommonOptions& common) {
  const fs::path csv(opts.distances);
  const Eigen::MatrixXd d = read_matrix_csv(csv);
  const fs::path side_path = sidecar_path(csv);
  const Json side = fs::exists(side_path) ? read_json(side_path) : Json::object();

  std::vector<std::string> labels;
  if (!opts.manifest.empty()) {
    const Json manifest = read_json(opts.manifest);
    std::map<std::string, std::string> by_name;
    for (const auto& [file, label] : manifest.items()) {
      by_name[file] = label.get<std::string>();
      by_name.try_emplace(fs::path(file).filename().string(), label.get<std::string>());
    }
    if (!side.contains("files")) throw std::runtime_error(side_path.string() + " lists no files to label");
    std::vector<std::string> missing;
    for (const auto& f : side["files"]) {
      const auto name = f.get<std::string>();
      auto it = by_name.find(name);
      if (it == by_name.end()) it = by_name.find(fs::path(name).filename().string());
      if (it == by_name.end()) missing.push_back(name);
      else labels.push_back(it->second);
    }
    if (!missing.empty()) {
      std::string list;
      for (const auto& m : missing) list += (list.empty() ? "" : ", ") + m;
      throw std::runtime_error("no label in " + opts.manifest + " for: " + list);
    }
  } else if (side.contains("labels")) {
    labels = side["labels"].get<std::vector<std::string>>();
  } else {
    throw std::runtime_error("no labels: pass --manifest");
  }
  if (labels.size() != static_cast<std::size_t>(d.rows()))
    throw ShapeError("distance matrix has " + std::to_string(d.rows()) + " rows but " + std::to_string(labels.size()) +
                     " labels");

  const std::vector<int> ids = encode_labels(labels);
  KnnOptions knn{opts.neighbors, opts.folds, opts.test_fraction, common.seed};
  EvalReport report = knn_cv(d, ids, knn);
  report.silhouette = silhouette(d, ids);
  if (side.contains("times")) report.time_ms = side["times"].value("mean_pair_ms", report.time_ms);
  const std::vector<std::size_t> order = hierarchical_order(d);

  Json out;
  out["method"] = side.value("method", "");
  out["knn_mean"] = report.knn_mean;
  out["knn_std"] = report.knn_std;
  out["silhouette"] = report.silhouette;
  out["time_ms"] = std::isnan(report.time_ms) ? Json(nullptr) : Json(report.time_ms);
  out["fold_accuracy"] = report.fold_accuracy;
  out["params"] = {{"neighbors", knn.neighbors}, {"folds", knn.folds}, {"test_fraction", knn.test_fraction},
                   {"seed", knn.seed}};
  out["regenerated_folds"] = report.regenerated_folds;

  std::ostringstream order_text;
  for (std::size_t i : order) order_text << i + 1 << '\n';

  OutputSet outputs;
  const fs::path report_path(opts.out);
  outputs.write(report_path, out.dump(2) + "\n");
  fs::path order_path = opts.order.empty() ? fs::path(report_path).replace_extension(".order.txt") : fs::path(opts.order);
  outputs.write(order_path, order_text.str());
  outputs.commit();
  std::cout << std::fixed << std::setprecision(3) << "kNN " << report.knn_mean << " +- " << report.knn_std
            << ", silhouette " << report.silhouette << '\n';
}

// ---- plan-export ----------------------------------------------------------

struct PlanOptions {
  std::vector<std::string> inputs;
  EmbeddingOptions embedding;
  std::string out = "plan.csv";
  std::string cost;
};

void cmd_plan_export(const PlanOptions& opts, const CommonOptions& common) {
  if (opts.inputs.size() != 2) throw std::runtime_error("plan-export takes exactly two graph files");
  const Dataset ds = load_dataset(opts.inputs, "");
  const EmbeddingConfig cfg = opts.embedding.config(common.seed);
  const MixtureDistance r =
      mixture_distance(ds.graphs[0], ds.graphs[1], cfg, parse_variant(opts.embedding.variant), opts.embedding.ridge);

  OutputSet outputs;
  std::ostringstream plan;
  write_plan_csv(plan, r.plan);
  outputs.write(opts.out, plan.str());
  if (!opts.cost.empty()) {
    std::ostringstream cost;
    write_cost_csv(cost, r.cost);
    outputs.write(opts.cost, cost.str());
  }
  outputs.commit();
  std::cout << std::setprecision(17) << r.distance << '\n';
}

bool seed_on_command_line(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    const std::string_view a(argv[i]);
    if (a == "--seed" || a.starts_with("--seed=")) return true;
  }
  return false;
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"gmot: graph distances from optimal transport between Gaussian mixtures of node embeddings"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "Read options from a TOML config file");
  std::string write_config;
  app.add_option("--write-config", write_config, "Write the effective configuration to this file");

  CommonOptions common;
  app.add_option("--seed", common.seed, "Seed for the whole run (env " + std::string(kSeedEnv) + ")")->capture_default_str();
  app.add_option("--threads", common.threads, "Worker threads, 0 = all cores")->capture_default_str();

  GenerateOptions gen;
  auto* generate_cmd = app.add_subcommand("generate", "Sample a labeled synthetic graph dataset");
  generate_cmd->add_option("--models", gen.models, "Generative models")->delimiter(',')->capture_default_str();
  generate_cmd->add_option("--per-model", gen.per_model, "Graphs per model")->capture_default_str();
  generate_cmd->add_option("--min-nodes", gen.min_nodes, "Smallest node count")->capture_default_str();
  generate_cmd->add_option("--max-nodes", gen.max_nodes, "Largest node count")->capture_default_str();
  generate_cmd->add_option("--degree", gen.degree, "Expected degree")->capture_default_str();
  generate_cmd->add_option("--out", gen.out, "Output directory")->required();

  DistanceOptions dist;
  auto* distance_cmd = app.add_subcommand("distance", "Pairwise distance matrix between graphs");
  distance_cmd->add_option("inputs", dist.inputs, "Graph files (.csv dense matrix, otherwise edge list)");
  distance_cmd->add_option("--manifest", dist.manifest, "JSON manifest mapping graph file to class");
  add_embedding_options(*distance_cmd, dist.embedding, true);
  distance_cmd->add_option("--out", dist.out, "Distance matrix CSV; a .json sidecar is written next to it")
      ->capture_default_str();
  distance_cmd->add_option("--plans", dist.plans, "Directory for per-pair transport plans");

  EvalOptions ev;
  auto* eval_cmd = app.add_subcommand("eval", "kNN accuracy, silhouette and dendrogram order of a distance matrix");
  eval_cmd->add_option("--distances", ev.distances, "Distance matrix CSV")->required();
  eval_cmd->add_option("--manifest", ev.manifest, "JSON manifest mapping graph file to class");
  eval_cmd->add_option("--neighbors", ev.neighbors, "kNN neighbors")->capture_default_str();
  eval_cmd->add_option("--folds", ev.folds, "Random splits")->capture_default_str();
  eval_cmd->add_option("--test-fraction", ev.test_fraction, "Test share per split")->capture_default_str();
  eval_cmd->add_option("--out", ev.out, "Report JSON")->capture_default_str();
  eval_cmd->add_option("--order", ev.order, "Leaf order file (default: <out>.order.txt)");

  PlanOptions plan;
  auto* plan_cmd = app.add_subcommand("plan-export", "Transport plan (node alignment) between two graphs");
  plan_cmd->add_option("inputs", plan.inputs, "Exactly two graph files")->required()->expected(2);
  add_embedding_options(*plan_cmd, plan.embedding, false);
  plan_cmd->add_option("--out", plan.out, "Plan CSV (i,j,mass)")->capture_default_str();
  plan_cmd->add_option("--cost", plan.cost, "Also write the cost matrix CSV (i,j,cost)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  if (!seed_on_command_line(argc, argv)) {
    if (const char* env = std::getenv(kSeedEnv); env != nullptr && *env != '\0') {
      try {
        common.seed = std::stoull(env);
      } catch (const std::exception&) {
        std::cerr << "error: " << kSeedEnv << " is not an unsigned integer\n";
        return 1;
      }
    }
  }

  try {
    if (!write_config.empty()) {
      std::ofstream cfg(write_config);
      if (!cfg) throw std::runtime_error("cannot write " + write_config);
      cfg << app.config_to_str(true, false);
    }
    if (*generate_cmd) cmd_generate(gen, common);
    else if (*distance_cmd) cmd_distance(dist, common);
    else if (*eval_cmd) cmd_eval(ev, common);
    else if (*plan_cmd) cmd_plan_export(plan, common);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace gmot::cli
