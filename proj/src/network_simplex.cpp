// Primal network simplex for the uncapacitated transportation problem.
//
// Nodes 0..m-1 are sources, m..m+n-1 sinks, and m+n an artificial root.
// Arc a < m*n is the real arc (a / n) -> m + (a % n); the remaining m+n arcs
// connect every node to the root at a prohibitive cost and form the initial
// spanning tree. The tree is kept strongly feasible (Cunningham's rule for
// the leaving arc), which rules out cycling on the highly degenerate
// uniform-marginal problems. Entering arcs are priced by block search.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "gmot/errors.hpp"
#include "gmot/ot.hpp"

namespace gmot {
namespace {

class TransportSimplex {
 public:
  TransportSimplex(const Eigen::MatrixXd& cost, std::span<const std::int64_t> supply,
                   std::span<const std::int64_t> demand)
      : m_(static_cast<int>(cost.rows())),
        n_(static_cast<int>(cost.cols())),
        root_(m_ + n_),
        real_arcs_(m_ * n_),
        cost_(cost) {
    const int nodes = m_ + n_ + 1;
    const int arcs = real_arcs_ + m_ + n_;
    flow_.assign(static_cast<std::size_t>(arcs), 0);
    in_tree_.assign(static_cast<std::size_t>(arcs), 0);
    art_source_.resize(static_cast<std::size_t>(m_ + n_));
    art_target_.resize(static_cast<std::size_t>(m_ + n_));
    parent_.assign(static_cast<std::size_t>(nodes), -1);
    pred_.assign(static_cast<std::size_t>(nodes), -1);
    dir_.assign(static_cast<std::size_t>(nodes), 0);
    children_.assign(static_cast<std::size_t>(nodes), {});
    pi_.assign(static_cast<std::size_t>(nodes), 0.0);
    mark_.assign(static_cast<std::size_t>(nodes), 0);

    const double max_cost = cost.size() > 0 ? cost.cwiseAbs().maxCoeff() : 0.0;
    artificial_cost_ = (max_cost + 1.0) * static_cast<double>(nodes);
    epsilon_ = 1e-12 * std::max(1.0, max_cost);

    for (int v = 0; v < m_ + n_; ++v) {
      const int arc = real_arcs_ + v;
      const bool is_source = v < m_;
      const std::int64_t amount = is_source ? supply[static_cast<std::size_t>(v)]
                                            : demand[static_cast<std::size_t>(v - m_)];
      // Zero-flow tree arcs must point away from the root.
      const bool up = is_source && amount > 0;
      art_source_[static_cast<std::size_t>(v)] = up ? v : root_;
      art_target_[static_cast<std::size_t>(v)] = up ? root_ : v;
      flow_[static_cast<std::size_t>(arc)] = amount;
      in_tree_[static_cast<std::size_t>(arc)] = 1;
      parent_[static_cast<std::size_t>(v)] = root_;
      pred_[static_cast<std::size_t>(v)] = arc;
      dir_[static_cast<std::size_t>(v)] = up ? 1 : -1;
      pi_[static_cast<std::size_t>(v)] = up ? -artificial_cost_ : artificial_cost_;
      children_[static_cast<std::size_t>(root_)].push_back(v);
    }

    const int total = arcs;
    block_size_ = std::max(10, static_cast<int>(std::sqrt(static_cast<double>(total))));
  }

  void run() {
    const long long max_pivots = 1000LL * (static_cast<long long>(flow_.size()) + 1000);
    for (long long pivots = 0;; ++pivots) {
      if (pivots > max_pivots) throw std::runtime_error("network simplex did not converge");
      if (!find_entering_arc()) {
        recompute_potentials();
        if (!find_entering_arc()) break;
      }
      pivot();
    }
    for (int v = 0; v < m_ + n_; ++v)
      if (flow_[static_cast<std::size_t>(real_arcs_ + v)] != 0)
        throw DomainError("transportation problem is infeasible");
  }

  std::int64_t flow(int i, int j) const { return flow_[static_cast<std::size_t>(i * n_ + j)]; }

 private:
  int source(int arc) const {
    return arc < real_arcs_ ? arc / n_ : art_source_[static_cast<std::size_t>(arc - real_arcs_)];
  }
  int target(int arc) const {
    return arc < real_arcs_ ? m_ + arc % n_ : art_target_[static_cast<std::size_t>(arc - real_arcs_)];
  }
  double cost(int arc) const { return arc < real_arcs_ ? cost_(arc / n_, arc % n_) : artificial_cost_; }

  double reduced_cost(int arc) const {
    return cost(arc) + pi_[static_cast<std::size_t>(source(arc))] - pi_[static_cast<std::size_t>(target(arc))];
  }

  // Block search: scan blocks cyclically, take the most negative arc of the
  // first block that has one (first index wins ties).
  bool find_entering_arc() {
    const int arcs = static_cast<int>(flow_.size());
    double best = -epsilon_;
    int best_arc = -1;
    int count = block_size_;
    for (int step = 0; step < arcs; ++step) {
      int e = next_arc_ + step;
      if (e >= arcs) e -= arcs;
      if (!in_tree_[static_cast<std::size_t>(e)]) {
        const double rc = reduced_cost(e);
        if (rc < best) {
          best = rc;
          best_arc = e;
        }
      }
      if (--count == 0) {
        if (best_arc >= 0) {
          next_arc_ = e + 1 < arcs ? e + 1 : 0;
          in_arc_ = best_arc;
          return true;
        }
        count = block_size_;
      }
    }
    if (best_arc < 0) return false;
    in_arc_ = best_arc;
    return true;
  }

  int find_join(int a, int b) {
    ++stamp_;
    for (int u = a; u != -1; u = parent_[static_cast<std::size_t>(u)]) mark_[static_cast<std::size_t>(u)] = stamp_;
    int v = b;
    while (mark_[static_cast<std::size_t>(v)] != stamp_) v = parent_[static_cast<std::size_t>(v)];
    return v;
  }

  void remove_child(int parent, int child) {
    auto& c = children_[static_cast<std::size_t>(parent)];
    c.erase(std::find(c.begin(), c.end(), child));
  }

  void pivot() {
    constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max();
    const int first = source(in_arc_);
    const int second = target(in_arc_);
    const int join = find_join(first, second);

    std::int64_t delta = kInf;
    int u_out = -1;
    int side = 0;
    for (int u = first; u != join; u = parent_[static_cast<std::size_t>(u)]) {
      if (dir_[static_cast<std::size_t>(u)] == 1) {  // flow decreases along this arc
        const std::int64_t d = flow_[static_cast<std::size_t>(pred_[static_cast<std::size_t>(u)])];
        if (d < delta) {
          delta = d;
          u_out = u;
          side = 1;
        }
      }
    }
    for (int u = second; u != join; u = parent_[static_cast<std::size_t>(u)]) {
      if (dir_[static_cast<std::size_t>(u)] == -1) {
        const std::int64_t d = flow_[static_cast<std::size_t>(pred_[static_cast<std::size_t>(u)])];
        if (d <= delta) {
          delta = d;
          u_out = u;
          side = 2;
        }
      }
    }
    if (side == 0) throw std::runtime_error("unbounded transportation problem");

    if (delta > 0) {
      flow_[static_cast<std::size_t>(in_arc_)] += delta;
      for (int u = first; u != join; u = parent_[static_cast<std::size_t>(u)])
        flow_[static_cast<std::size_t>(pred_[static_cast<std::size_t>(u)])] -= dir_[static_cast<std::size_t>(u)] * delta;
      for (int u = second; u != join; u = parent_[static_cast<std::size_t>(u)])
        flow_[static_cast<std::size_t>(pred_[static_cast<std::size_t>(u)])] += dir_[static_cast<std::size_t>(u)] * delta;
    }

    const int u_in = side == 1 ? first : second;
    const int v_in = side == 1 ? second : first;
    const int out_arc = pred_[static_cast<std::size_t>(u_out)];

    // Re-hang the subtree cut off at u_out below v_in, reversing the path u_in..u_out.
    int u = u_in;
    int new_parent = v_in;
    int new_arc = in_arc_;
    signed char new_dir = source(in_arc_) == u_in ? 1 : -1;
    while (true) {
      const int old_parent = parent_[static_cast<std::size_t>(u)];
      const int old_arc = pred_[static_cast<std::size_t>(u)];
      const signed char old_dir = dir_[static_cast<std::size_t>(u)];
      remove_child(old_parent, u);
      parent_[static_cast<std::size_t>(u)] = new_parent;
      pred_[static_cast<std::size_t>(u)] = new_arc;
      dir_[static_cast<std::size_t>(u)] = new_dir;
      children_[static_cast<std::size_t>(new_parent)].push_back(u);
      if (u == u_out) break;
      new_parent = u;
      new_arc = old_arc;
      new_dir = static_cast<signed char>(-old_dir);
      u = old_parent;
    }
    in_tree_[static_cast<std::size_t>(out_arc)] = 0;
    in_tree_[static_cast<std::size_t>(in_arc_)] = 1;

    const double sigma = pi_[static_cast<std::size_t>(v_in)] - pi_[static_cast<std::size_t>(u_in)] -
                         dir_[static_cast<std::size_t>(u_in)] * cost(in_arc_);
    shift_subtree(u_in, sigma);
  }

  void shift_subtree(int top, double sigma) {
    stack_.clear();
    stack_.push_back(top);
    while (!stack_.empty()) {
      const int u = stack_.back();
      stack_.pop_back();
      pi_[static_cast<std::size_t>(u)] += sigma;
      for (int c : children_[static_cast<std::size_t>(u)]) stack_.push_back(c);
    }
  }

  void recompute_potentials() {
    pi_[static_cast<std::size_t>(root_)] = 0.0;
    stack_.assign(1, root_);
    while (!stack_.empty()) {
      const int u = stack_.back();
      stack_.pop_back();
      for (int c : children_[static_cast<std::size_t>(u)]) {
        const int arc = pred_[static_cast<std::size_t>(c)];
        pi_[static_cast<std::size_t>(c)] = pi_[static_cast<std::size_t>(u)] - dir_[static_cast<std::size_t>(c)] * cost(arc);
        stack_.push_back(c);
      }
    }
  }

  int m_;
  int n_;
  int root_;
  int real_arcs_;
  const Eigen::MatrixXd& cost_;
  double artificial_cost_ = 0.0;
  double epsilon_ = 0.0;
  int block_size_ = 10;
  int next_arc_ = 0;
  int in_arc_ = -1;
  int stamp_ = 0;

  std::vector<std::int64_t> flow_;
  std::vector<char> in_tree_;
  std::vector<int> art_source_;
  std::vector<int> art_target_;
  std::vector<int> parent_;
  std::vector<int> pred_;
  std::vector<signed char> dir_;  // +1: tree arc points to the parent, -1: from the parent
  std::vector<std::vector<int>> children_;
  std::vector<double> pi_;
  std::vector<int> mark_;
  std::vector<int> stack_;
};

}  // namespace

Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> solve_transportation(
    const Eigen::MatrixXd& cost, std::span<const std::int64_t> supply, std::span<const std::int64_t> demand) {
  if (static_cast<std::size_t>(cost.rows()) != supply.size() || static_cast<std::size_t>(cost.cols()) != demand.size())
    throw ShapeError("cost matrix does not match the marginals");
  if (cost.size() == 0) throw ShapeError("empty transportation problem");
  if (!cost.allFinite()) throw DomainError("cost matrix must be finite");
  if (std::any_of(supply.begin(), supply.end(), [](std::int64_t s) { return s < 0; }) ||
      std::any_of(demand.begin(), demand.end(), [](std::int64_t d) { return d < 0; }))
    throw DomainError("marginals must be non-negative");
  if (std::accumulate(supply.begin(), supply.end(), std::int64_t{0}) !=
      std::accumulate(demand.begin(), demand.end(), std::int64_t{0}))
    throw DomainError("supply and demand totals differ");

  TransportSimplex simplex(cost, supply, demand);
  simplex.run();
  Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> flow(cost.rows(), cost.cols());
  for (Eigen::Index i = 0; i < cost.rows(); ++i)
    for (Eigen::Index j = 0; j < cost.cols(); ++j) flow(i, j) = simplex.flow(static_cast<int>(i), static_cast<int>(j));
  return flow;
}

}  // namespace gmot
