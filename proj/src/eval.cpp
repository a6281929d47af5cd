#include "gmot/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <utility>

#include "gmot/errors.hpp"
#include "gmot/parallel.hpp"
#include "gmot/rng.hpp"

namespace gmot {
namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

void require_square(const Eigen::MatrixXd& d, std::size_t labels) {
  if (d.rows() != d.cols()) throw ShapeError("distance matrix must be square");
  if (static_cast<std::size_t>(d.rows()) != labels) throw ShapeError("distance matrix and labels differ in size");
}

Eigen::VectorXd degree_histogram(const Graph& g, std::size_t bins) {
  Eigen::VectorXd h = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(bins));
  if (g.size() == 0) return h;
  const Eigen::VectorXd deg = g.degrees();
  for (Eigen::Index v = 0; v < deg.size(); ++v) h[std::llround(deg[v])] += 1.0;
  return h / static_cast<double>(g.size());
}

std::size_t max_degree_bin(const Graph& g) {
  if (g.size() == 0) return 0;
  return static_cast<std::size_t>(std::llround(g.degrees().maxCoeff()));
}

}  // namespace

std::string MethodSpec::name() const {
  switch (kind) {
    case Kind::kDegree: return "Degree";
    case Kind::kEv: return "EV";
    case Kind::kCcb: return "CCB-" + std::string(variant_name(variant));
    case Kind::kCnp: return "CNP-" + std::string(variant_name(variant));
  }
  return "?";
}

MethodSpec MethodSpec::parse(std::string_view method, std::string_view variant) {
  MethodSpec spec;
  spec.variant = parse_variant(variant);
  if (method == "ccb" || method == "CCB") spec.kind = Kind::kCcb;
  else if (method == "cnp" || method == "CNP") spec.kind = Kind::kCnp;
  else if (method == "degree" || method == "Degree") spec.kind = Kind::kDegree;
  else if (method == "ev" || method == "EV") spec.kind = Kind::kEv;
  else throw DomainError("unknown method \"" + std::string(method) + "\" (expected ccb, cnp, degree or ev)");
  return spec;
}

DistanceMatrix pairwise_distances(std::span<const Graph> graphs, const MethodSpec& method,
                                  const PairwiseOptions& options) {
  const std::size_t n = graphs.size();
  if (n < 2) throw DomainError("need at least two graphs");

  DistanceMatrix out;
  out.values = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  out.method = method.name();
  out.config = options.embedding;
  if (method.is_transport())
    out.config.method = method.kind == MethodSpec::Kind::kCcb ? EmbeddingMethod::kCcb : EmbeddingMethod::kCnp;

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  std::vector<double> pair_ms(pairs.size(), 0.0);

  if (method.is_transport()) {
    std::vector<GraphRepresentation> reps(n);
    parallel_for(n, options.threads, [&](std::size_t i) {
      reps[i] = prepare_graph(graphs[i], out.config, method.variant, options.ridge);
    });
    std::mutex callback_mutex;
    parallel_for(pairs.size(), options.threads, [&](std::size_t p) {
      const auto [i, j] = pairs[p];
      const auto start = Clock::now();
      MixtureDistance result = compare(reps[i], reps[j], method.variant);
      pair_ms[p] = elapsed_ms(start) + reps[i].prepare_ms + reps[j].prepare_ms;
      out.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = result.distance;
      out.values(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = result.distance;
      if (options.on_pair) {
        std::lock_guard lock(callback_mutex);
        options.on_pair(i, j, result);
      }
    });
  } else {
    parallel_for(pairs.size(), options.threads, [&](std::size_t p) {
      const auto [i, j] = pairs[p];
      const auto start = Clock::now();
      const double d = method.kind == MethodSpec::Kind::kDegree ? baseline_degree(graphs[i], graphs[j])
                                                                : baseline_ev(graphs[i], graphs[j]);
      pair_ms[p] = elapsed_ms(start);
      out.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = d;
      out.values(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = d;
    });
  }
  out.pair_evaluations = pairs.size();
  out.mean_pair_ms = std::accumulate(pair_ms.begin(), pair_ms.end(), 0.0) / static_cast<double>(pairs.size());
  return out;
}

double baseline_degree(const Graph& a, const Graph& b) {
  const std::size_t bins = std::max(max_degree_bin(a), max_degree_bin(b)) + 1;
  return (degree_histogram(a, bins) - degree_histogram(b, bins)).norm();
}

Eigen::VectorXd dominant_eigenvector(const Graph& g) {
  const auto n = static_cast<Eigen::Index>(g.size());
  Eigen::VectorXd x = Eigen::VectorXd::Constant(n, 1.0 / std::sqrt(static_cast<double>(std::max<Eigen::Index>(n, 1))));
  if (g.adjacency().nonZeros() == 0) return x;
  // The shift separates the Perron root from -rho on bipartite graphs.
  const double shift = 0.5 * matrix_norm(g);
  Eigen::VectorXd y(n);
  for (int it = 0; it < 100000; ++it) {
    y.noalias() = g.adjacency() * x;
    y += shift * x;
    y.normalize();
    const bool done = (y - x).norm() <= 1e-9;
    x.swap(y);
    if (done) break;
  }
  Eigen::Index arg = 0;
  x.cwiseAbs().maxCoeff(&arg);
  if (x[arg] < 0.0) x = -x;
  return x;
}

double baseline_ev(const Graph& a, const Graph& b) {
  auto sorted = [](const Graph& g) {
    Eigen::VectorXd v = dominant_eigenvector(g);
    std::sort(v.data(), v.data() + v.size(), std::greater<>());
    return v;
  };
  const Eigen::VectorXd va = sorted(a);
  const Eigen::VectorXd vb = sorted(b);
  const Eigen::Index len = std::max(va.size(), vb.size());
  Eigen::VectorXd pa = Eigen::VectorXd::Zero(len);
  Eigen::VectorXd pb = Eigen::VectorXd::Zero(len);
  pa.head(va.size()) = va;
  pb.head(vb.size()) = vb;
  return (pa - pb).norm();
}

std::vector<int> encode_labels(std::span<const std::string> labels) {
  std::map<std::string, int> ids;
  std::vector<int> out;
  out.reserve(labels.size());
  for (const auto& l : labels) {
    auto [it, inserted] = ids.try_emplace(l, static_cast<int>(ids.size()));
    out.push_back(it->second);
  }
  return out;
}

EvalReport knn_cv(const Eigen::MatrixXd& distances, std::span<const int> labels, const KnnOptions& options) {
  require_square(distances, labels.size());
  if (options.neighbors < 1) throw DomainError("kNN needs k >= 1");
  if (options.folds < 2) throw DomainError("need at least two folds");
  if (!(options.test_fraction > 0.0 && options.test_fraction < 1.0)) throw DomainError("test fraction must lie in (0, 1)");

  std::map<int, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);
  const std::size_t n = labels.size();

  EvalReport report;
  report.neighbors = options.neighbors;
  report.folds = options.folds;
  report.test_fraction = options.test_fraction;

  constexpr std::size_t kMaxAttempts = 1000;
  std::vector<char> is_test(n);
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
  for (std::size_t fold = 0; fold < options.folds; ++fold) {
    for (std::size_t attempt = 0;; ++attempt) {
      if (attempt == kMaxAttempts) throw DomainError("cannot draw a split with every class in training");
      Rng rng = make_rng(options.seed, {fold, attempt});
      std::fill(is_test.begin(), is_test.end(), 0);
      bool every_class_trains = true;
      for (auto& [label, members] : by_class) {
        std::vector<std::size_t> shuffled = members;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        auto take = static_cast<std::size_t>(std::llround(options.test_fraction * static_cast<double>(members.size())));
        if (members.size() >= 2) take = std::clamp<std::size_t>(take, 1, members.size() - 1);
        for (std::size_t t = 0; t < take; ++t) is_test[shuffled[t]] = 1;
        every_class_trains = every_class_trains && take < members.size();
      }
      if (every_class_trains) break;
      ++report.regenerated_folds;
    }
    train.clear();
    test.clear();
    for (std::size_t i = 0; i < n; ++i) (is_test[i] ? test : train).push_back(i);

    std::size_t correct = 0;
    std::vector<std::size_t> order;
    for (std::size_t t : test) {
      order = train;
      const std::size_t k = std::min(options.neighbors, order.size());
      std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(),
                        [&](std::size_t a, std::size_t b) {
                          const double da = distances(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(a));
                          const double db = distances(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(b));
                          return da != db ? da < db : a < b;
                        });
      std::map<int, double> votes;
      for (std::size_t r = 0; r < k; ++r) {
        const double d = distances(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(order[r]));
        votes[labels[order[r]]] += 1.0 / std::max(d, 1e-12);
      }
      int best = votes.begin()->first;
      for (const auto& [label, w] : votes)
        if (w > votes[best]) best = label;
      if (best == labels[t]) ++correct;
    }
    report.fold_accuracy.push_back(static_cast<double>(correct) / static_cast<double>(test.size()));
  }

  const double folds = static_cast<double>(report.fold_accuracy.size());
  report.knn_mean = std::accumulate(report.fold_accuracy.begin(), report.fold_accuracy.end(), 0.0) / folds;
  double var = 0.0;
  for (double a : report.fold_accuracy) var += (a - report.knn_mean) * (a - report.knn_mean);
  report.knn_std = std::sqrt(var / folds);
  return report;
}

double silhouette(const Eigen::MatrixXd& distances, std::span<const int> labels) {
  require_square(distances, labels.size());
  std::map<int, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);
  if (by_class.size() < 2) throw DomainError("silhouette needs at least two classes");

  auto mean_to = [&](std::size_t i, const std::vector<std::size_t>& members, bool skip_self) {
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t j : members) {
      if (skip_self && j == i) continue;
      sum += distances(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      ++count;
    }
    return sum / static_cast<double>(count);
  };

  double total = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto& own = by_class[labels[i]];
    if (own.size() < 2) continue;  // singleton: s(i) = 0
    const double a = mean_to(i, own, true);
    double b = std::numeric_limits<double>::infinity();
    for (const auto& [label, members] : by_class)
      if (label != labels[i]) b = std::min(b, mean_to(i, members, false));
    const double denom = std::max(a, b);
    if (denom > 0.0) total += (b - a) / denom;
  }
  return total / static_cast<double>(labels.size());
}

std::vector<std::size_t> hierarchical_order(const Eigen::MatrixXd& distances) {
  if (distances.rows() != distances.cols()) throw ShapeError("distance matrix must be square");
  const auto n = static_cast<std::size_t>(distances.rows());
  if (n == 0) return {};

  const std::size_t slots = 2 * n - 1;
  std::vector<std::vector<double>> dist(slots, std::vector<double>(slots, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) dist[i][j] = distances(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  std::vector<std::size_t> size(slots, 1);
  std::vector<std::pair<std::size_t, std::size_t>> children(slots, {slots, slots});
  std::vector<std::size_t> active(n);
  std::iota(active.begin(), active.end(), std::size_t{0});

  for (std::size_t next = n; next < slots; ++next) {
    // Closest active pair; scanning ids in increasing order keeps the
    // lexicographically smallest pair on ties.
    std::size_t best_a = 0;
    std::size_t best_b = 1;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t p = 0; p < active.size(); ++p)
      for (std::size_t q = p + 1; q < active.size(); ++q)
        if (dist[active[p]][active[q]] < best) {
          best = dist[active[p]][active[q]];
          best_a = p;
          best_b = q;
        }
    const std::size_t a = active[best_a];
    const std::size_t b = active[best_b];
    children[next] = {a, b};
    size[next] = size[a] + size[b];
    active.erase(active.begin() + static_cast<std::ptrdiff_t>(best_b));
    active.erase(active.begin() + static_cast<std::ptrdiff_t>(best_a));
    for (std::size_t c : active) {
      const double d = (static_cast<double>(size[a]) * dist[a][c] + static_cast<double>(size[b]) * dist[b][c]) /
                       static_cast<double>(size[next]);
      dist[next][c] = d;
      dist[c][next] = d;
    }
    active.push_back(next);
  }

  std::vector<std::size_t> order;
  order.reserve(n);
  std::vector<std::size_t> stack{slots - 1};
  while (!stack.empty()) {
    const std::size_t c = stack.back();
    stack.pop_back();
    if (c < n) {
      order.push_back(c);
      continue;
    }
    stack.push_back(children[c].second);
    stack.push_back(children[c].first);
  }
  return order;
}

}  // namespace gmot
