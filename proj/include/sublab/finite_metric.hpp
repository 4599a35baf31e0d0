#ifndef SUBLAB_FINITE_METRIC_HPP
#define SUBLAB_FINITE_METRIC_HPP

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <queue>
#include <sstream>
#include <string>
#include <system_error>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "sublab/error.hpp"
#include "sublab/parallel.hpp"

namespace sublab {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Finite (extended) metric space. Distances between points in different
/// connected components are +inf; everything else is finite.
class FiniteMetricSpace {
 public:
  FiniteMetricSpace() = default;

  FiniteMetricSpace(std::vector<std::string> labels, Eigen::MatrixXd dist)
      : labels_(std::move(labels)), dist_(std::move(dist)) {
    const auto n = static_cast<Eigen::Index>(labels_.size());
    if (n < 1) throw Error(ErrorCode::InvalidInput, "metric space needs at least one point");
    if (dist_.rows() != n || dist_.cols() != n) throw Error(ErrorCode::InvalidInput, "distance matrix shape mismatch");
    for (Eigen::Index i = 0; i < n; ++i) {
      if (dist_(i, i) != 0.0) throw Error(ErrorCode::InvalidInput, "nonzero diagonal in distance matrix");
      for (Eigen::Index j = i + 1; j < n; ++j) {
        const double a = dist_(i, j);
        const double b = dist_(j, i);
        if (std::isnan(a) || std::isnan(b) || a < 0.0 || b < 0.0) {
          throw Error(ErrorCode::InvalidInput, "distances must be nonnegative");
        }
        const bool both_inf = std::isinf(a) && std::isinf(b);
        if (!both_inf && std::abs(a - b) > 1e-9) throw Error(ErrorCode::InvalidInput, "distance matrix not symmetric");
      }
    }
  }

  /// Unlabeled space; labels are the decimal indices.
  static FiniteMetricSpace from_matrix(Eigen::MatrixXd dist) {
    std::vector<std::string> labels(static_cast<std::size_t>(dist.rows()));
    for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = std::to_string(i);
    return FiniteMetricSpace(std::move(labels), std::move(dist));
  }

  std::size_t size() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const Eigen::MatrixXd& matrix() const { return dist_; }
  double operator()(std::size_t i, std::size_t j) const {
    return dist_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }

  /// Largest finite distance.
  double diameter() const {
    double d = 0.0;
    for (Eigen::Index i = 0; i < dist_.rows(); ++i)
      for (Eigen::Index j = 0; j < dist_.cols(); ++j)
        if (std::isfinite(dist_(i, j))) d = std::max(d, dist_(i, j));
    return d;
  }

  /// Worst violation of d(i,k) <= d(i,j) + d(j,k). O(n^3).
  double triangle_violation() const {
    double worst = 0.0;
    const Eigen::Index n = dist_.rows();
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index i = 0; i < n; ++i) {
        const double dij = dist_(i, j);
        if (std::isinf(dij)) continue;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double via = dij + dist_(j, k);
          if (std::isinf(via)) continue;
          worst = std::max(worst, dist_(i, k) - via);
        }
      }
    return worst;
  }

  /// Sub-space on the given indices (in the given order).
  FiniteMetricSpace subspace(const std::vector<std::size_t>& idx) const {
    std::vector<std::string> labels;
    labels.reserve(idx.size());
    Eigen::MatrixXd d(static_cast<Eigen::Index>(idx.size()), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t a = 0; a < idx.size(); ++a) {
      labels.push_back(labels_[idx[a]]);
      for (std::size_t b = 0; b < idx.size(); ++b) {
        d(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = (*this)(idx[a], idx[b]);
      }
    }
    return FiniteMetricSpace(std::move(labels), std::move(d));
  }

 private:
  std::vector<std::string> labels_;
  Eigen::MatrixXd dist_;
};

/// Shortest decimal representation that reads back to the same double.
inline std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text == "inf" || text == "+inf") return kInfinity;
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw Error(ErrorCode::InvalidInput, "cannot parse number '" + std::string(text) + "'");
  }
  return v;
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

}  // namespace detail

/// CSV: a header row of labels, then n rows of n distances, row-major.
inline void write_csv(std::ostream& out, const FiniteMetricSpace& x) {
  for (std::size_t i = 0; i < x.size(); ++i) out << (i ? "," : "") << x.labels()[i];
  out << '\n';
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = 0; j < x.size(); ++j) out << (j ? "," : "") << format_double(x(i, j));
    out << '\n';
  }
}

inline FiniteMetricSpace read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::InvalidInput, "empty metric-space CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::vector<std::string> labels = detail::split_csv_line(line);
  const auto n = static_cast<Eigen::Index>(labels.size());
  Eigen::MatrixXd d(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!std::getline(in, line)) throw Error(ErrorCode::InvalidInput, "metric-space CSV has too few rows");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto cells = detail::split_csv_line(line);
    if (static_cast<Eigen::Index>(cells.size()) != n) throw Error(ErrorCode::InvalidInput, "ragged metric-space CSV row");
    for (Eigen::Index j = 0; j < n; ++j) d(i, j) = parse_double(cells[static_cast<std::size_t>(j)]);
  }
  FiniteMetricSpace x(std::move(labels), std::move(d));
  if (x.size() <= 512 && x.triangle_violation() > 1e-6) {
    throw Error(ErrorCode::InvalidInput, "metric-space CSV violates the triangle inequality");
  }
  return x;
}

inline FiniteMetricSpace read_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidInput, "cannot open " + path);
  return read_csv(in);
}

inline void write_csv_file(const std::string& path, const FiniteMetricSpace& x) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::InvalidInput, "cannot write " + path);
  write_csv(out, x);
}

/// Undirected weighted graph with nonnegative edge weights.
class WeightedGraph {
 public:
  explicit WeightedGraph(std::size_t n) : adj_(n) {}

  std::size_t size() const { return adj_.size(); }
  void add_edge(std::size_t i, std::size_t j, double w) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw Error(ErrorCode::InvalidInput, "edge weight must be finite and >= 0");
    adj_[i].emplace_back(j, w);
    adj_[j].emplace_back(i, w);
  }
  const std::vector<std::pair<std::size_t, double>>& edges(std::size_t i) const { return adj_[i]; }

  /// Dijkstra from one source; unreachable nodes get +inf.
  std::vector<double> distances_from(std::size_t source) const {
    std::vector<double> dist(adj_.size(), kInfinity);
    using Item = std::pair<double, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    dist[source] = 0.0;
    heap.emplace(0.0, source);
    while (!heap.empty()) {
      const auto [d, u] = heap.top();
      heap.pop();
      if (d > dist[u]) continue;
      for (const auto& [v, w] : adj_[u]) {
        const double nd = d + w;
        if (nd < dist[v]) {
          dist[v] = nd;
          heap.emplace(nd, v);
        }
      }
    }
    return dist;
  }

  /// Number of connected components.
  std::size_t component_count() const {
    std::vector<int> seen(adj_.size(), 0);
    std::size_t count = 0;
    std::vector<std::size_t> stack;
    for (std::size_t s = 0; s < adj_.size(); ++s) {
      if (seen[s]) continue;
      ++count;
      stack.push_back(s);
      seen[s] = 1;
      while (!stack.empty()) {
        const std::size_t u = stack.back();
        stack.pop_back();
        for (const auto& e : adj_[u]) {
          if (!seen[e.first]) {
            seen[e.first] = 1;
            stack.push_back(e.first);
          }
        }
      }
    }
    return count;
  }

 private:
  std::vector<std::vector<std::pair<std::size_t, double>>> adj_;
};

/// All-pairs shortest paths by independent single-source solves.
inline FiniteMetricSpace graph_metric_space(const WeightedGraph& graph, std::vector<std::string> labels) {
  const std::size_t n = graph.size();
  Eigen::MatrixXd d(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  parallel_for(n, [&](std::size_t s) {
    const std::vector<double> row = graph.distances_from(s);
    for (std::size_t t = 0; t < n; ++t) d(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(t)) = row[t];
  });
  // Dijkstra sums in different orders from each end; keep the matrix exactly symmetric.
  for (Eigen::Index i = 0; i < d.rows(); ++i)
    for (Eigen::Index j = i + 1; j < d.cols(); ++j) {
      const double m = std::min(d(i, j), d(j, i));
      d(i, j) = m;
      d(j, i) = m;
    }
  return FiniteMetricSpace(std::move(labels), std::move(d));
}

}  // namespace sublab

#endif  // SUBLAB_FINITE_METRIC_HPP
