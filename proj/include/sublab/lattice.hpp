#ifndef SUBLAB_LATTICE_HPP
#define SUBLAB_LATTICE_HPP

#include <algorithm>
#include <vector>

#include "sublab/manifold.hpp"

namespace sublab {

/// Regular coordinate lattice on a chart box. Index order is row-major: the
/// last axis varies fastest. Periodic axes omit the duplicate endpoint.
class Lattice {
 public:
  Lattice() = default;

  /// `inset` shrinks non-periodic axes on both ends, keeping finite-difference
  /// stencils inside the chart.
  Lattice(const ManifoldModel& m, std::vector<int> resolution, double inset = 0.0)
      : res_(std::move(resolution)) {
    if (static_cast<int>(res_.size()) != m.dim()) {
      throw Error(ErrorCode::InvalidInput, "lattice resolution must give one entry per axis");
    }
    axes_.reserve(res_.size());
    for (int i = 0; i < m.dim(); ++i) {
      const Axis& a = m.axis(i);
      const int r = res_[static_cast<std::size_t>(i)];
      if (r < 1) throw Error(ErrorCode::InvalidInput, "lattice resolution must be positive");
      std::vector<double> values(static_cast<std::size_t>(r));
      if (a.periodic) {
        for (int k = 0; k < r; ++k) values[static_cast<std::size_t>(k)] = a.lo + a.period() * k / r;
      } else {
        const double lo = a.lo + inset;
        const double hi = a.hi - inset;
        if (r == 1) {
          values[0] = 0.5 * (lo + hi);
        } else {
          for (int k = 0; k < r; ++k) values[static_cast<std::size_t>(k)] = lo + (hi - lo) * k / (r - 1);
        }
      }
      axes_.push_back(std::move(values));
      periodic_.push_back(a.periodic);
    }
    std::size_t n = 1;
    for (int r : res_) n *= static_cast<std::size_t>(r);
    points_.reserve(n);
    std::vector<int> idx(res_.size(), 0);
    for (std::size_t flat = 0; flat < n; ++flat) {
      Vec x(m.dim());
      for (std::size_t a = 0; a < res_.size(); ++a) x[static_cast<Eigen::Index>(a)] = axes_[a][static_cast<std::size_t>(idx[a])];
      points_.push_back(std::move(x));
      for (int a = static_cast<int>(res_.size()) - 1; a >= 0; --a) {
        if (++idx[static_cast<std::size_t>(a)] < res_[static_cast<std::size_t>(a)]) break;
        idx[static_cast<std::size_t>(a)] = 0;
      }
    }
  }

  std::size_t size() const { return points_.size(); }
  const std::vector<Vec>& points() const { return points_; }
  const Vec& point(std::size_t i) const { return points_[i]; }
  const std::vector<int>& resolution() const { return res_; }
  int dim() const { return static_cast<int>(res_.size()); }
  const std::vector<double>& axis_values(int a) const { return axes_[static_cast<std::size_t>(a)]; }

  std::vector<int> multi_index(std::size_t flat) const {
    std::vector<int> idx(res_.size());
    for (int a = static_cast<int>(res_.size()) - 1; a >= 0; --a) {
      const int r = res_[static_cast<std::size_t>(a)];
      idx[static_cast<std::size_t>(a)] = static_cast<int>(flat % static_cast<std::size_t>(r));
      flat /= static_cast<std::size_t>(r);
    }
    return idx;
  }

  std::size_t flat_index(const std::vector<int>& idx) const {
    std::size_t flat = 0;
    for (std::size_t a = 0; a < res_.size(); ++a) flat = flat * static_cast<std::size_t>(res_[a]) + static_cast<std::size_t>(idx[a]);
    return flat;
  }

  /// All lattice nodes reachable by moving each index by -1, 0 or +1,
  /// excluding the node itself. Sorted and free of duplicates.
  std::vector<std::size_t> neighbors(std::size_t flat) const {
    const std::vector<int> base = multi_index(flat);
    std::vector<std::size_t> out;
    std::vector<int> offset(res_.size(), -1);
    while (true) {
      std::vector<int> idx = base;
      bool valid = true;
      for (std::size_t a = 0; a < res_.size() && valid; ++a) {
        int k = idx[a] + offset[a];
        const int r = res_[a];
        if (periodic_[a]) {
          k = ((k % r) + r) % r;
        } else if (k < 0 || k >= r) {
          valid = false;
        }
        idx[a] = k;
      }
      if (valid) {
        const std::size_t j = flat_index(idx);
        if (j != flat) out.push_back(j);
      }
      std::size_t a = 0;
      for (; a < res_.size(); ++a) {
        if (++offset[a] <= 1) break;
        offset[a] = -1;
      }
      if (a == res_.size()) break;
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

 private:
  std::vector<int> res_;
  std::vector<bool> periodic_;
  std::vector<std::vector<double>> axes_;
  std::vector<Vec> points_;
};

/// Deterministic lattice of coordinates; periodic axes exclude the duplicate endpoint.
inline std::vector<Vec> sample_grid(const ManifoldModel& m, const std::vector<int>& resolution) {
  for (int r : resolution) {
    if (r < 2) throw Error(ErrorCode::InvalidInput, "sample_grid needs resolution >= 2 per axis");
  }
  return Lattice(m, resolution).points();
}

}  // namespace sublab

#endif  // SUBLAB_LATTICE_HPP
