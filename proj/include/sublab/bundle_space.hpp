#ifndef SUBLAB_BUNDLE_SPACE_HPP
#define SUBLAB_BUNDLE_SPACE_HPP

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "sublab/bundle.hpp"
#include "sublab/finite_metric.hpp"
#include "sublab/lattice.hpp"
#include "sublab/parallel.hpp"

namespace sublab {

/// A sampled space together with where each node lives.
struct SampledSpace {
  FiniteMetricSpace space;
  std::vector<std::size_t> lattice_index;  ///< lattice node of each sample
  std::vector<Vec> fiber;                  ///< fibre vector of each sample (bundle spaces only)
};

/// Midpoint-rule Riemannian length of the coordinate segment a -> a + d.
inline double segment_length(const ManifoldModel& m, const Vec& a, const Vec& d) {
  if (d.squaredNorm() == 0.0) return 0.0;
  const Vec mid = m.advance(a, 0.5 * d);
  return std::sqrt(std::max(0.0, d.dot(m.metric_at(mid) * d)));
}

/// Graph-geodesic metric on a lattice: every node is joined to its stencil
/// neighbours with the Riemannian length of the connecting segment.
inline SampledSpace manifold_space(const ManifoldModel& m, const Lattice& lattice) {
  const std::size_t n = lattice.size();
  std::vector<std::vector<std::pair<std::size_t, double>>> local(n);
  parallel_for(n, [&](std::size_t i) {
    for (std::size_t j : lattice.neighbors(i)) {
      if (j < i) continue;
      const Vec d = m.displacement(lattice.point(i), lattice.point(j));
      local[i].emplace_back(j, segment_length(m, lattice.point(i), d));
    }
  });
  WeightedGraph graph(n);
  for (std::size_t i = 0; i < n; ++i)
    for (const auto& [j, w] : local[i]) graph.add_edge(i, j, w);
  if (graph.component_count() != 1) throw Error(ErrorCode::DisconnectedGraph, m.name() + " sample graph is disconnected");
  std::vector<std::string> labels(n);
  std::vector<std::size_t> index(n);
  for (std::size_t i = 0; i < n; ++i) {
    labels[i] = std::to_string(i);
    index[i] = i;
  }
  return SampledSpace{graph_metric_space(graph, std::move(labels)), std::move(index), {}};
}

/// Sampled unit bundle of `e` with the (p,q)-metric. Nodes are the lattice
/// crossed with a grid on the unit sphere of each fibre ({+e1, -e1} for rank 1,
/// `sphere_resolution` equally spaced directions for rank 2).
///
/// Edge length between (x1, xi1) and (x2, xi2) is
///   sqrt(L_g(x1 -> x2)^2 + 2^{-p} |xi2 - tau(xi1)|^2)
/// with tau the one-step parallel transport along the segment. The q-term is
/// dropped: <xi2 - tau(xi1), xi> is second order on the unit sphere.
inline SampledSpace unit_bundle_space(const VectorBundle& e, const PQParams& pq, const Lattice& lattice,
                                      int sphere_resolution) {
  const ManifoldModel& m = e.manifold();
  const int rank = e.fiber_rank();
  if (rank > 2) throw Error(ErrorCode::InvalidInput, "unit-bundle sampling supports fibres of rank 1 or 2");
  const int per_fiber = rank == 1 ? 2 : sphere_resolution;
  if (per_fiber < 3 && rank == 2) throw Error(ErrorCode::InvalidInput, "sphere resolution must be >= 3");
  const std::size_t nb = lattice.size();
  const auto pf = static_cast<std::size_t>(per_fiber);
  const std::size_t n = nb * pf;

  std::vector<Vec> fibers(n);
  parallel_for(nb, [&](std::size_t i) {
    const Mat frame = e.fiber_frame(lattice.point(i));
    for (std::size_t k = 0; k < pf; ++k) {
      Vec xi;
      if (rank == 1) {
        xi = k == 0 ? Vec(frame.col(0)) : Vec(-frame.col(0));
      } else {
        const double t = 2.0 * std::numbers::pi * static_cast<double>(k) / per_fiber;
        xi = std::cos(t) * frame.col(0) + std::sin(t) * frame.col(1);
      }
      fibers[i * pf + k] = std::move(xi);
    }
  });

  const double fiber_scale = std::pow(2.0, -0.5 * pq.p);
  std::vector<std::vector<std::pair<std::size_t, double>>> local(n);
  parallel_for(nb, [&](std::size_t i) {
    const Vec& xi_point = lattice.point(i);
    std::vector<std::size_t> targets = lattice.neighbors(i);
    targets.push_back(i);
    for (std::size_t j : targets) {
      if (j < i) continue;
      const Vec d = m.displacement(xi_point, lattice.point(j));
      const double base_len = segment_length(m, xi_point, d);
      const Vec xj = m.advance(xi_point, d);
      const Mat gj = m.metric_at(xj);
      for (std::size_t k = 0; k < pf; ++k) {
        Vec moved = fibers[i * pf + k];
        if (j != i) {
          moved = detail::transport_step(e, xi_point, moved, [&d](const Vec&) { return d; }, 1.0).second;
          if (e.is_horizontal()) moved = e.fiber_projector(xj) * moved;
        }
        for (int dk = -1; dk <= 1; ++dk) {
          if (rank == 1 && dk != 0) continue;
          const std::size_t kk = (k + pf + static_cast<std::size_t>(dk + static_cast<int>(pf))) % pf;
          const std::size_t a = i * pf + k;
          const std::size_t b = j * pf + kk;
          if (b <= a) continue;
          const Vec diff = fibers[b] - moved;
          const double fiber_len = fiber_scale * std::sqrt(std::max(0.0, diff.dot(gj * diff)));
          local[a].emplace_back(b, std::hypot(base_len, fiber_len));
        }
      }
    }
  });

  WeightedGraph graph(n);
  for (std::size_t a = 0; a < n; ++a)
    for (const auto& [b, w] : local[a]) graph.add_edge(a, b, w);
  const std::size_t expected = rank == 1 ? 2 : 1;
  if (graph.component_count() != expected) {
    throw Error(ErrorCode::DisconnectedGraph, "unit-bundle sample graph has unexpected components");
  }
  std::vector<std::string> labels(n);
  std::vector<std::size_t> index(n);
  for (std::size_t a = 0; a < n; ++a) {
    labels[a] = std::to_string(a / pf) + ":" + std::to_string(a % pf);
    index[a] = a / pf;
  }
  return SampledSpace{graph_metric_space(graph, std::move(labels)), std::move(index), std::move(fibers)};
}

/// Index of the lattice node nearest (in coordinates, minimal image) to y.
inline std::size_t nearest_lattice_node(const ManifoldModel& m, const Lattice& lattice, const Vec& y) {
  std::size_t best = 0;
  double best_d = kInfinity;
  for (std::size_t i = 0; i < lattice.size(); ++i) {
    const double d = m.displacement(lattice.point(i), y).squaredNorm();
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

/// Sample-level image of P: total lattice node -> nearest base lattice node.
inline std::vector<std::size_t> projection_image(const SubmersionModel& s, const Lattice& total,
                                                 const Lattice& base) {
  std::vector<std::size_t> out(total.size());
  parallel_for(total.size(), [&](std::size_t i) {
    out[i] = nearest_lattice_node(s.base(), base, s.project(total.point(i)));
  });
  return out;
}

/// Sample-level image of P~ = P_*: (x~, xi) -> nearest (x, u) with u the
/// sampled fibre direction closest to J xi.
inline std::vector<std::size_t> bundle_projection_image(const SubmersionModel& s, const Lattice& total_lattice,
                                                        const SampledSpace& upstairs, const Lattice& base_lattice,
                                                        const SampledSpace& downstairs) {
  const std::vector<std::size_t> base_image = projection_image(s, total_lattice, base_lattice);
  std::vector<std::vector<std::size_t>> by_base(base_lattice.size());
  for (std::size_t a = 0; a < downstairs.lattice_index.size(); ++a) by_base[downstairs.lattice_index[a]].push_back(a);
  std::vector<std::size_t> out(upstairs.lattice_index.size());
  parallel_for(out.size(), [&](std::size_t a) {
    const std::size_t i = upstairs.lattice_index[a];
    const std::size_t b = base_image[i];
    const Vec pushed = s.jacobian(total_lattice.point(i)) * upstairs.fiber[a];
    const Mat g = s.base().metric_at(base_lattice.point(b));
    std::size_t best = by_base[b].front();
    double best_cos = -kInfinity;
    for (std::size_t c : by_base[b]) {
      const double cosine = pushed.dot(g * downstairs.fiber[c]);
      if (cosine > best_cos) {
        best_cos = cosine;
        best = c;
      }
    }
    out[a] = best;
  });
  return out;
}

}  // namespace sublab

#endif  // SUBLAB_BUNDLE_SPACE_HPP
