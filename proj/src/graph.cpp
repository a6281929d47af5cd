#include "gmot/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>

#include "gmot/errors.hpp"

namespace gmot {
namespace {

constexpr double kNormTolerance = 1e-9;

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_whitespace(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

bool parse_size(std::string_view tok, std::size_t& out) {
  const char* end = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(tok.data(), end, out);
  return ec == std::errc() && ptr == end;
}

bool parse_double(std::string_view tok, double& out) {
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  const char* end = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(tok.data(), end, out);
  return ec == std::errc() && ptr == end && std::isfinite(out);
}

// "# nodes: N" or "# nodes N"; returns false for ordinary comments.
bool parse_nodes_directive(std::string_view comment, std::size_t& n) {
  comment = trim(comment.substr(1));
  constexpr std::string_view kKey = "nodes";
  if (comment.substr(0, kKey.size()) != kKey) return false;
  comment = trim(comment.substr(kKey.size()));
  if (!comment.empty() && comment.front() == ':') comment = trim(comment.substr(1));
  return parse_size(comment, n);
}

std::ifstream open_or_throw(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return in;
}

}  // namespace

Graph::Graph(std::size_t n) : n_(n), adjacency_(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)) {}

Graph Graph::from_edges(std::size_t n, std::span<const Edge> edges) {
  std::map<std::pair<std::size_t, std::size_t>, double> unique;
  for (const Edge& e : edges) {
    if (e.u >= n || e.v >= n) throw DomainError("edge endpoint out of range");
    if (!std::isfinite(e.weight) || e.weight < 0.0) throw DomainError("edge weight must be finite and non-negative");
    unique[{std::min(e.u, e.v), std::max(e.u, e.v)}] = e.weight;
  }
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(2 * unique.size());
  for (const auto& [key, w] : unique) {
    if (w == 0.0) continue;
    const auto u = static_cast<Eigen::Index>(key.first);
    const auto v = static_cast<Eigen::Index>(key.second);
    triplets.emplace_back(u, v, w);
    if (u != v) triplets.emplace_back(v, u, w);
  }
  Graph g(n);
  g.adjacency_.setFromTriplets(triplets.begin(), triplets.end());
  g.adjacency_.makeCompressed();
  return g;
}

Graph Graph::from_dense(const Eigen::MatrixXd& adjacency) {
  if (adjacency.rows() != adjacency.cols()) throw ShapeError("adjacency must be square");
  const auto n = static_cast<std::size_t>(adjacency.rows());
  std::vector<Edge> edges;
  for (Eigen::Index u = 0; u < adjacency.rows(); ++u) {
    for (Eigen::Index v = u; v < adjacency.cols(); ++v) {
      const double a = adjacency(u, v);
      if (a != adjacency(v, u)) throw DomainError("adjacency must be symmetric");
      if (a < 0.0) throw DomainError("adjacency must be non-negative");
      if (a > 0.0) edges.push_back({static_cast<std::size_t>(u), static_cast<std::size_t>(v), a});
    }
  }
  return from_edges(n, edges);
}

Eigen::MatrixXd Graph::dense() const { return Eigen::MatrixXd(adjacency_); }

double Graph::weight(std::size_t u, std::size_t v) const {
  if (u >= n_ || v >= n_) throw DomainError("node out of range");
  return adjacency_.coeff(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(v));
}

Eigen::VectorXd Graph::degrees() const {
  Eigen::VectorXd d = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n_));
  for (Eigen::Index u = 0; u < adjacency_.outerSize(); ++u)
    for (SparseMatrix::InnerIterator it(adjacency_, u); it; ++it) d[u] += it.value();
  return d;
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  for (Eigen::Index u = 0; u < adjacency_.outerSize(); ++u)
    for (SparseMatrix::InnerIterator it(adjacency_, u); it; ++it)
      if (it.col() >= u)
        out.push_back({static_cast<std::size_t>(u), static_cast<std::size_t>(it.col()), it.value()});
  return out;
}

double Graph::max_weight() const {
  double w = 0.0;
  for (Eigen::Index k = 0; k < adjacency_.nonZeros(); ++k) w = std::max(w, adjacency_.valuePtr()[k]);
  return w;
}

Graph load_edge_list(std::istream& in, bool weighted) {
  std::vector<Edge> edges;
  std::size_t n = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view body = trim(line);
    if (body.empty()) continue;
    if (body.front() == '#') {
      std::size_t declared = 0;
      if (parse_nodes_directive(body, declared)) n = std::max(n, declared);
      continue;
    }
    const auto tokens = split_whitespace(body);
    if (tokens.size() != 2 && tokens.size() != 3)
      throw ParseError("expected \"u v\" or \"u v w\"", line_no);
    std::size_t u = 0;
    std::size_t v = 0;
    if (!parse_size(tokens[0], u) || !parse_size(tokens[1], v) || u == 0 || v == 0)
      throw ParseError("node ids must be positive integers", line_no);
    double w = 1.0;
    if (tokens.size() == 3) {
      if (!parse_double(tokens[2], w)) throw ParseError("edge weight is not a number", line_no);
      if (w <= 0.0)
        throw DomainError("line " + std::to_string(line_no) + ": edge weight must be positive");
      if (!weighted) w = 1.0;
    }
    edges.push_back({u - 1, v - 1, w});
    n = std::max({n, u, v});
  }
  return Graph::from_edges(n, edges);
}

Graph load_edge_list(const std::filesystem::path& path, bool weighted) {
  auto in = open_or_throw(path);
  return load_edge_list(in, weighted);
}

Graph load_dense_matrix(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::vector<double> row;
    std::string_view rest(line);
    while (true) {
      const auto comma = rest.find(',');
      std::string_view cell = trim(rest.substr(0, comma));
      if (cell.size() >= 2 && cell.front() == '"' && cell.back() == '"') cell = trim(cell.substr(1, cell.size() - 2));
      double value = 0.0;
      if (!parse_double(cell, value))
        throw ParseError("non-numeric cell \"" + std::string(cell) + "\"", line_no);
      row.push_back(value);
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    rows.push_back(std::move(row));
  }
  const std::size_t n = rows.size();
  if (n == 0) throw ShapeError("empty matrix");
  for (const auto& row : rows)
    if (row.size() != n)
      throw ShapeError("matrix is not square: " + std::to_string(n) + " rows but a row has " +
                       std::to_string(row.size()) + " columns");

  Eigen::MatrixXd m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
  sym = sym.cwiseMax(0.0);
  return Graph::from_dense(sym);
}

Graph load_dense_matrix(const std::filesystem::path& path) {
  auto in = open_or_throw(path);
  return load_dense_matrix(in);
}

Graph load_graph(const std::filesystem::path& path) {
  auto ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == ".csv" ? load_dense_matrix(path) : load_edge_list(path);
}

void write_edge_list(std::ostream& out, const Graph& g) {
  out << "# nodes: " << g.size() << '\n';
  const auto old_precision = out.precision(17);
  for (const Edge& e : g.edges()) {
    out << e.u + 1 << ' ' << e.v + 1;
    if (e.weight != 1.0) out << ' ' << e.weight;
    out << '\n';
  }
  out.precision(old_precision);
}

double matrix_norm(const Graph& g) {
  const auto& a = g.adjacency();
  if (g.size() == 0 || a.nonZeros() == 0) return 1.0;

  const auto n = static_cast<Eigen::Index>(g.size());
  Eigen::VectorXd x = Eigen::VectorXd::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
  Eigen::VectorXd y(n);
  double estimate = 0.0;
  const std::size_t max_iter = 10 * g.size();
  for (std::size_t it = 0; it < max_iter; ++it) {
    y.noalias() = a * x;
    const double next = y.norm();
    if (next == 0.0) return 1.0;
    x = y / next;
    const bool converged = it > 0 && std::abs(next - estimate) <= kNormTolerance * next;
    estimate = next;
    if (converged) break;
  }
  return estimate;
}

Graph permute(const Graph& g, std::span<const std::size_t> perm) {
  const std::size_t n = g.size();
  if (perm.size() != n) throw DomainError("permutation length does not match node count");
  std::vector<bool> seen(n, false);
  for (std::size_t p : perm) {
    if (p >= n || seen[p]) throw DomainError("not a permutation");
    seen[p] = true;
  }
  auto edges = g.edges();
  for (Edge& e : edges) {
    e.u = perm[e.u];
    e.v = perm[e.v];
  }
  return Graph::from_edges(n, edges);
}

}  // namespace gmot
