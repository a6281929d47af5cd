#include "gmot/generators.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <set>
#include <utility>

#include "gmot/errors.hpp"
#include "gmot/rng.hpp"

namespace gmot {
namespace {

using AdjacencySets = std::vector<std::set<std::size_t>>;

Graph from_sets(const AdjacencySets& adj) {
  std::vector<Edge> edges;
  for (std::size_t u = 0; u < adj.size(); ++u)
    for (std::size_t v : adj[u])
      if (u < v) edges.push_back({u, v, 1.0});
  return Graph::from_edges(adj.size(), edges);
}

Graph erdos_renyi(const GeneratorSpec& spec, Rng& rng) {
  const double p = spec.expected_degree / static_cast<double>(spec.n - 1);
  if (p > 1.0) throw DomainError("ER edge probability exceeds 1");
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Edge> edges;
  for (std::size_t u = 0; u < spec.n; ++u)
    for (std::size_t v = u + 1; v < spec.n; ++v)
      if (unit(rng) < p) edges.push_back({u, v, 1.0});
  return Graph::from_edges(spec.n, edges);
}

Graph watts_strogatz(const GeneratorSpec& spec, Rng& rng) {
  const std::size_t n = spec.n;
  const auto half = static_cast<std::size_t>(std::llround(spec.expected_degree / 2.0));
  if (half == 0 || 2 * half >= n) throw DomainError("WS lattice degree must lie in [2, n-1]");

  AdjacencySets adj(n);
  for (std::size_t j = 1; j <= half; ++j)
    for (std::size_t u = 0; u < n; ++u) {
      const std::size_t v = (u + j) % n;
      adj[u].insert(v);
      adj[v].insert(u);
    }

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  for (std::size_t j = 1; j <= half; ++j)
    for (std::size_t u = 0; u < n; ++u) {
      if (unit(rng) >= kRewiringProbability) continue;
      const std::size_t v = (u + j) % n;
      if (!adj[u].contains(v) || adj[u].size() >= n - 1) continue;
      std::size_t w = pick(rng);
      while (w == u || adj[u].contains(w)) w = pick(rng);
      adj[u].erase(v);
      adj[v].erase(u);
      adj[u].insert(w);
      adj[w].insert(u);
    }
  return from_sets(adj);
}

Graph barabasi_albert(const GeneratorSpec& spec, Rng& rng) {
  const std::size_t n = spec.n;
  const auto m = static_cast<std::size_t>(std::llround(spec.expected_degree / 2.0));
  if (m < 1 || m >= n) throw DomainError("BA attachment count must lie in [1, n-1]");

  AdjacencySets adj(n);
  std::vector<std::size_t> endpoints;  // node repeated once per incident edge
  for (std::size_t u = 0; u <= m; ++u)
    for (std::size_t v = u + 1; v <= m; ++v) {
      adj[u].insert(v);
      adj[v].insert(u);
      endpoints.push_back(u);
      endpoints.push_back(v);
    }
  for (std::size_t source = m + 1; source < n; ++source) {
    std::set<std::size_t> targets;
    std::uniform_int_distribution<std::size_t> pick(0, endpoints.size() - 1);
    while (targets.size() < m) targets.insert(endpoints[pick(rng)]);
    for (std::size_t t : targets) {
      adj[source].insert(t);
      adj[t].insert(source);
      endpoints.push_back(source);
      endpoints.push_back(t);
    }
  }
  return from_sets(adj);
}

Graph configuration_model(const GeneratorSpec& spec, Rng& rng) {
  const std::size_t n = spec.n;
  std::poisson_distribution<std::size_t> poisson(spec.expected_degree);
  std::vector<std::size_t> degree(n);
  std::size_t total = 0;
  for (auto& d : degree) {
    d = poisson(rng);
    total += d;
  }
  if (total % 2 == 1) {
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    ++degree[pick(rng)];
  }
  std::vector<std::size_t> stubs;
  for (std::size_t u = 0; u < n; ++u) stubs.insert(stubs.end(), degree[u], u);
  std::shuffle(stubs.begin(), stubs.end(), rng);

  AdjacencySets adj(n);
  for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
    const std::size_t u = stubs[i];
    const std::size_t v = stubs[i + 1];
    if (u == v) continue;
    adj[u].insert(v);
    adj[v].insert(u);
  }
  return from_sets(adj);
}

}  // namespace

std::string_view model_name(GraphModel model) {
  switch (model) {
    case GraphModel::kErdosRenyi: return "ER";
    case GraphModel::kWattsStrogatz: return "WS";
    case GraphModel::kBarabasiAlbert: return "BA";
    case GraphModel::kConfiguration: return "CF";
  }
  return "?";
}

GraphModel parse_model(std::string_view name) {
  for (GraphModel m : kAllModels)
    if (model_name(m) == name) return m;
  throw DomainError("unknown graph model \"" + std::string(name) + "\" (expected ER, WS, BA or CF)");
}

void GeneratorSpec::validate() const {
  if (n < 2) throw DomainError("generator needs n >= 2");
  if (!(expected_degree > 0.0) || expected_degree > static_cast<double>(n - 1))
    throw DomainError("expected degree must lie in (0, n-1]");
}

Graph generate(const GeneratorSpec& spec) {
  spec.validate();
  Rng rng = make_rng(spec.seed, {static_cast<std::uint64_t>(spec.model)});
  switch (spec.model) {
    case GraphModel::kErdosRenyi: return erdos_renyi(spec, rng);
    case GraphModel::kWattsStrogatz: return watts_strogatz(spec, rng);
    case GraphModel::kBarabasiAlbert: return barabasi_albert(spec, rng);
    case GraphModel::kConfiguration: return configuration_model(spec, rng);
  }
  throw DomainError("unknown graph model");
}

std::vector<DatasetEntry> synthetic_dataset(const DatasetOptions& options) {
  if (options.min_nodes < 2 || options.min_nodes > options.max_nodes) throw DomainError("invalid node-count range");
  std::vector<DatasetEntry> out;
  for (GraphModel model : options.models) {
    const auto tag = static_cast<std::uint64_t>(model);
    Rng sizes = make_rng(options.seed, {0x5125, tag});
    std::uniform_int_distribution<std::size_t> size_dist(options.min_nodes, options.max_nodes);
    for (std::size_t i = 0; i < options.per_model; ++i) {
      DatasetEntry entry;
      entry.spec = {model, size_dist(sizes), options.expected_degree, derive_seed(options.seed, {tag, i})};
      entry.label = std::string(model_name(model));
      char buf[32];
      std::snprintf(buf, sizeof buf, "%s_%02zu", entry.label.c_str(), i);
      entry.name = buf;
      out.push_back(std::move(entry));
    }
  }
  return out;
}

}  // namespace gmot
