#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "gmot/graph.hpp"

namespace gmot {

enum class GraphModel { kErdosRenyi, kWattsStrogatz, kBarabasiAlbert, kConfiguration };

inline constexpr GraphModel kAllModels[] = {GraphModel::kErdosRenyi, GraphModel::kWattsStrogatz,
                                            GraphModel::kBarabasiAlbert, GraphModel::kConfiguration};

/// Short names "ER", "WS", "BA", "CF".
std::string_view model_name(GraphModel model);
GraphModel parse_model(std::string_view name);

/// Watts-Strogatz rewiring probability.
inline constexpr double kRewiringProbability = 0.1;

struct GeneratorSpec {
  GraphModel model = GraphModel::kErdosRenyi;
  std::size_t n = 0;
  double expected_degree = 6.0;
  std::uint64_t seed = 0;

  /// Throws DomainError unless n >= 2 and expected_degree lies in (0, n-1].
  void validate() const;
};

/// Samples one graph; a pure function of `spec`.
///  ER: edge probability expected_degree / (n-1).
///  WS: ring lattice with the nearest even k = 2*round(expected_degree/2), then rewiring.
///  BA: m = round(expected_degree/2) attachments per node, seeded by a (m+1)-clique.
///  CF: i.i.d. Poisson(expected_degree) degree sequence, stub matching; self-loops
///      are dropped and multi-edges collapse to a single unit edge.
Graph generate(const GeneratorSpec& spec);

struct DatasetOptions {
  std::vector<GraphModel> models{std::begin(kAllModels), std::end(kAllModels)};
  std::size_t per_model = 20;
  std::size_t min_nodes = 10;
  std::size_t max_nodes = 200;
  double expected_degree = 6.0;
  std::uint64_t seed = 0;
};

struct DatasetEntry {
  GeneratorSpec spec;
  std::string label;
  std::string name;  // e.g. "BA_07"
};

/// Specs for a labeled synthetic dataset; node counts are drawn uniformly
/// from [min_nodes, max_nodes] per graph.
std::vector<DatasetEntry> synthetic_dataset(const DatasetOptions& options);

}  // namespace gmot
