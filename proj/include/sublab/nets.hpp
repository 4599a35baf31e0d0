#ifndef SUBLAB_NETS_HPP
#define SUBLAB_NETS_HPP

#include <algorithm>
#include <vector>

#include "sublab/finite_metric.hpp"

namespace sublab {

struct NetReport {
  std::vector<std::size_t> subset;
  double covering_radius = 0.0;
};

/// max over points of the distance to the nearest subset point.
inline double covering_radius(const FiniteMetricSpace& x, const std::vector<std::size_t>& subset) {
  if (subset.empty()) return kInfinity;
  double worst = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double best = kInfinity;
    for (std::size_t s : subset) best = std::min(best, x(i, s));
    worst = std::max(worst, best);
  }
  return worst;
}

/// Greedy farthest-point eps-net seeded at index 0; ties go to the lowest index.
inline NetReport eps_net(const FiniteMetricSpace& x, double eps) {
  if (!(eps > 0.0)) throw Error(ErrorCode::InvalidInput, "eps must be positive");
  NetReport out;
  std::vector<double> nearest(x.size(), kInfinity);
  std::size_t next = 0;
  while (true) {
    out.subset.push_back(next);
    for (std::size_t i = 0; i < x.size(); ++i) nearest[i] = std::min(nearest[i], x(i, next));
    std::size_t far = 0;
    for (std::size_t i = 1; i < x.size(); ++i)
      if (nearest[i] > nearest[far]) far = i;
    if (nearest[far] <= eps) {
      out.covering_radius = nearest[far];
      break;
    }
    next = far;
  }
  return out;
}

/// Union of per-fibre nets, each given as indices into the total space, with
/// its covering radius recomputed in the total space. `fiber_nets[k]` belongs
/// to the fibre over `base_net.subset[k]`.
inline NetReport merge_fiber_nets(const NetReport& base_net, const std::vector<std::vector<std::size_t>>& fiber_nets,
                                  const FiniteMetricSpace& total) {
  if (fiber_nets.size() != base_net.subset.size()) {
    throw Error(ErrorCode::EmptyFiberNet, "need exactly one fibre net per base-net point");
  }
  NetReport out;
  for (const auto& net : fiber_nets) {
    if (net.empty()) throw Error(ErrorCode::EmptyFiberNet, "fibre net is empty");
    out.subset.insert(out.subset.end(), net.begin(), net.end());
  }
  std::sort(out.subset.begin(), out.subset.end());
  out.subset.erase(std::unique(out.subset.begin(), out.subset.end()), out.subset.end());
  out.covering_radius = covering_radius(total, out.subset);
  return out;
}

/// Image of a net under the projection, given as total-index -> base-index.
/// Coincident images are merged.
inline NetReport project_net(const NetReport& net, const std::vector<std::size_t>& projection,
                             const FiniteMetricSpace& base) {
  NetReport out;
  for (std::size_t i : net.subset) out.subset.push_back(projection.at(i));
  std::sort(out.subset.begin(), out.subset.end());
  out.subset.erase(std::unique(out.subset.begin(), out.subset.end()), out.subset.end());
  out.covering_radius = covering_radius(base, out.subset);
  return out;
}

struct MergedNet {
  NetReport base_net;
  NetReport merged;
};

/// Base eps-net, an eps-net of every fibre over it (fibre distances induced
/// from the total space), and their union.
inline MergedNet build_merged_net(const FiniteMetricSpace& total, const FiniteMetricSpace& base,
                                  const std::vector<std::size_t>& projection, double eps) {
  MergedNet out;
  out.base_net = eps_net(base, eps);
  std::vector<std::vector<std::size_t>> fiber_nets;
  for (std::size_t b : out.base_net.subset) {
    std::vector<std::size_t> fiber;
    for (std::size_t i = 0; i < projection.size(); ++i)
      if (projection[i] == b) fiber.push_back(i);
    if (fiber.empty()) throw Error(ErrorCode::EmptyFiberNet, "no sampled point over a base-net point");
    const NetReport local = eps_net(total.subspace(fiber), eps);
    std::vector<std::size_t> mapped;
    for (std::size_t k : local.subset) mapped.push_back(fiber[k]);
    fiber_nets.push_back(std::move(mapped));
  }
  out.merged = merge_fiber_nets(out.base_net, fiber_nets, total);
  return out;
}

}  // namespace sublab

#endif  // SUBLAB_NETS_HPP
