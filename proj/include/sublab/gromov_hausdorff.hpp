#ifndef SUBLAB_GROMOV_HAUSDORFF_HPP
#define SUBLAB_GROMOV_HAUSDORFF_HPP

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "sublab/finite_metric.hpp"

namespace sublab {

/// Relation between two finite spaces given by index pairs (i in X, j in Y).
struct Correspondence {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;

  /// Throws NotSurjective unless every point of X and of Y is related.
  void validate(std::size_t nx, std::size_t ny) const {
    std::vector<char> hit_x(nx, 0), hit_y(ny, 0);
    for (const auto& [i, j] : pairs) {
      if (i >= nx || j >= ny) throw Error(ErrorCode::InvalidInput, "correspondence index out of range");
      hit_x[i] = 1;
      hit_y[j] = 1;
    }
    if (std::find(hit_x.begin(), hit_x.end(), 0) != hit_x.end() ||
        std::find(hit_y.begin(), hit_y.end(), 0) != hit_y.end()) {
      throw Error(ErrorCode::NotSurjective, "correspondence misses a point");
    }
  }

  static Correspondence identity(std::size_t n) {
    Correspondence r;
    for (std::size_t i = 0; i < n; ++i) r.pairs.emplace_back(i, i);
    return r;
  }
};

/// |a - b| with the convention |inf - inf| = 0.
inline double distance_gap(double a, double b) {
  if (std::isinf(a) && std::isinf(b)) return 0.0;
  return std::abs(a - b);
}

/// max over related pairs (i,j), (i',j') of |d_X(i,i') - d_Y(j,j')|.
inline double distortion(const Correspondence& r, const FiniteMetricSpace& x, const FiniteMetricSpace& y) {
  r.validate(x.size(), y.size());
  double worst = 0.0;
  const auto& p = r.pairs;
  for (std::size_t a = 0; a < p.size(); ++a)
    for (std::size_t b = a + 1; b < p.size(); ++b)
      worst = std::max(worst, distance_gap(x(p[a].first, p[b].first), y(p[a].second, p[b].second)));
  return worst;
}

/// d_GH(X, Y) <= distortion(R) / 2.
inline double gh_upper(const Correspondence& r, const FiniteMetricSpace& x, const FiniteMetricSpace& y) {
  return 0.5 * distortion(r, x, y);
}

/// Largest pair-grid size gh_exact accepts.
inline constexpr std::size_t kExactGhLimit = 36;

namespace detail {

/// Searches for a correspondence whose pairwise gaps are all <= bound:
/// first one partner per x, then one partner for every y still uncovered.
class CorrespondenceSearch {
 public:
  CorrespondenceSearch(const FiniteMetricSpace& x, const FiniteMetricSpace& y, double bound)
      : x_(x), y_(y), bound_(bound), covered_(y.size(), 0) {}

  bool run() { return assign_x(0); }

 private:
  bool compatible(std::size_t i, std::size_t j) const {
    for (const auto& [a, b] : chosen_)
      if (distance_gap(x_(i, a), y_(j, b)) > bound_) return false;
    return true;
  }

  bool assign_x(std::size_t i) {
    if (i == x_.size()) return assign_y(0);
    for (std::size_t j = 0; j < y_.size(); ++j) {
      if (!compatible(i, j)) continue;
      chosen_.emplace_back(i, j);
      ++covered_[j];
      if (assign_x(i + 1)) return true;
      --covered_[j];
      chosen_.pop_back();
    }
    return false;
  }

  bool assign_y(std::size_t j) {
    while (j < y_.size() && covered_[j]) ++j;
    if (j == y_.size()) return true;
    for (std::size_t i = 0; i < x_.size(); ++i) {
      if (!compatible(i, j)) continue;
      chosen_.emplace_back(i, j);
      ++covered_[j];
      if (assign_y(j + 1)) return true;
      --covered_[j];
      chosen_.pop_back();
    }
    return false;
  }

  const FiniteMetricSpace& x_;
  const FiniteMetricSpace& y_;
  double bound_;
  std::vector<int> covered_;
  std::vector<std::pair<std::size_t, std::size_t>> chosen_;
};

}  // namespace detail

/// Exact d_GH for small spaces: half the least distortion over all
/// correspondences. Every correspondence contains one made of a map X -> Y
/// together with a map Y -> X, and distortion only grows with more pairs, so
/// the search ranges over those. The optimum is one of the finitely many
/// gaps |d_X - d_Y|; a binary search over them finds it.
inline double gh_exact(const FiniteMetricSpace& x, const FiniteMetricSpace& y) {
  if (x.size() * y.size() > kExactGhLimit) {
    throw Error(ErrorCode::TooLarge, "exact Gromov-Hausdorff limited to |X||Y| <= 36");
  }
  std::vector<double> gaps{0.0};
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t a = 0; a < x.size(); ++a)
      for (std::size_t j = 0; j < y.size(); ++j)
        for (std::size_t b = 0; b < y.size(); ++b) gaps.push_back(distance_gap(x(i, a), y(j, b)));
  std::sort(gaps.begin(), gaps.end());
  gaps.erase(std::unique(gaps.begin(), gaps.end()), gaps.end());
  std::size_t lo = 0;
  std::size_t hi = gaps.size() - 1;  // the full relation always fits the largest gap
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (detail::CorrespondenceSearch(x, y, gaps[mid]).run()) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return 0.5 * gaps[lo];
}

/// Correspondence {(k, image[k])} induced by a map from sampled X into sampled
/// Y. Throws UncoveredTarget when some point of Y is nobody's image.
inline Correspondence projection_correspondence(const std::vector<std::size_t>& image, std::size_t target_size) {
  Correspondence r;
  std::vector<char> hit(target_size, 0);
  for (std::size_t k = 0; k < image.size(); ++k) {
    if (image[k] >= target_size) throw Error(ErrorCode::InvalidInput, "image index out of range");
    r.pairs.emplace_back(k, image[k]);
    hit[image[k]] = 1;
  }
  if (std::find(hit.begin(), hit.end(), 0) != hit.end()) {
    throw Error(ErrorCode::UncoveredTarget, "a target sample is not the image of any source sample");
  }
  return r;
}

struct GhBounds {
  double lower = 0.0;
  double upper = 0.0;
};

/// Bounds for spaces with no given correspondence. The upper value is the
/// better of max(diam)/2 and the index-aligned correspondence
/// {(i, i*|Y|/|X|)} together with {(j*|X|/|Y|, j)}.
inline GhBounds gh_bounds(const FiniteMetricSpace& x, const FiniteMetricSpace& y) {
  const double dx = x.diameter();
  const double dy = y.diameter();
  GhBounds b;
  b.lower = 0.5 * distance_gap(dx, dy);
  b.upper = 0.5 * std::max(dx, dy);
  Correspondence r;
  for (std::size_t i = 0; i < x.size(); ++i) r.pairs.emplace_back(i, i * y.size() / x.size());
  for (std::size_t j = 0; j < y.size(); ++j) r.pairs.emplace_back(j * x.size() / y.size(), j);
  b.upper = std::min(b.upper, gh_upper(r, x, y));
  return b;
}

}  // namespace sublab

#endif  // SUBLAB_GROMOV_HAUSDORFF_HPP
