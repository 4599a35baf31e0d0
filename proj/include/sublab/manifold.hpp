#ifndef SUBLAB_MANIFOLD_HPP
#define SUBLAB_MANIFOLD_HPP

#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "sublab/error.hpp"

namespace sublab {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Finite-difference step for metric derivatives.
inline constexpr double kMetricStep = 1e-5;
/// Metrics whose smallest eigenvalue falls at or below this are rejected.
inline constexpr double kEigenvalueFloor = 1e-10;

/// One coordinate axis of a chart box. A periodic axis identifies lo with hi.
struct Axis {
  double lo = 0.0;
  double hi = 1.0;
  bool periodic = false;

  double period() const { return hi - lo; }
};

/// Tangent vector in the coordinate frame at `base`.
struct TangentVec {
  Vec base;
  Vec comp;
};

/// Christoffel symbols of the second kind, stored as gamma(k, i, j).
class Christoffel {
 public:
  explicit Christoffel(int dim) : dim_(dim), data_(static_cast<std::size_t>(dim * dim * dim), 0.0) {}

  int dim() const { return dim_; }
  double& operator()(int k, int i, int j) { return data_[index(k, i, j)]; }
  double operator()(int k, int i, int j) const { return data_[index(k, i, j)]; }

  /// Gamma^k_{ij} u^i v^j.
  Vec contract(const Vec& u, const Vec& v) const {
    Vec out = Vec::Zero(dim_);
    for (int k = 0; k < dim_; ++k) {
      double s = 0.0;
      for (int i = 0; i < dim_; ++i) {
        if (u[i] == 0.0) continue;
        for (int j = 0; j < dim_; ++j) s += (*this)(k, i, j) * u[i] * v[j];
      }
      out[k] = s;
    }
    return out;
  }

 private:
  std::size_t index(int k, int i, int j) const {
    return static_cast<std::size_t>((k * dim_ + i) * dim_ + j);
  }
  int dim_;
  std::vector<double> data_;
};

/// A Riemannian manifold given by a single coordinate box with optional
/// periodic identifications and a metric tensor field on it.
class ManifoldModel {
 public:
  using MetricFn = std::function<Mat(const Vec&)>;
  using EmbeddingFn = std::function<Vec(const Vec&)>;

  ManifoldModel() = default;
  ManifoldModel(std::string name, std::vector<Axis> axes, MetricFn metric, EmbeddingFn embedding = {})
      : name_(std::move(name)), axes_(std::move(axes)), metric_(std::move(metric)), embedding_(std::move(embedding)) {
    if (axes_.empty()) throw Error(ErrorCode::InvalidInput, "manifold needs at least one axis");
    for (const auto& a : axes_) {
      if (!(a.hi > a.lo)) throw Error(ErrorCode::InvalidInput, "axis with empty range in " + name_);
    }
  }

  const std::string& name() const { return name_; }
  int dim() const { return static_cast<int>(axes_.size()); }
  const std::vector<Axis>& axes() const { return axes_; }
  const Axis& axis(int i) const { return axes_[static_cast<std::size_t>(i)]; }
  bool has_embedding() const { return static_cast<bool>(embedding_); }
  const MetricFn& metric_fn() const { return metric_; }

  bool contains(const Vec& x) const {
    if (x.size() != dim()) return false;
    for (int i = 0; i < dim(); ++i) {
      const Axis& a = axis(i);
      if (!std::isfinite(x[i])) return false;
      if (!a.periodic && (x[i] < a.lo - slack(a) || x[i] > a.hi + slack(a))) return false;
    }
    return true;
  }

  /// Reduces periodic coordinates into [lo, hi); rejects anything outside a
  /// non-periodic bound.
  Vec wrap(const Vec& x) const {
    if (x.size() != dim()) throw Error(ErrorCode::InvalidInput, "coordinate dimension mismatch on " + name_);
    Vec out = x;
    for (int i = 0; i < dim(); ++i) {
      const Axis& a = axis(i);
      if (!std::isfinite(x[i])) throw Error(ErrorCode::OutOfDomain, "non-finite coordinate on " + name_);
      if (a.periodic) {
        double r = std::fmod(x[i] - a.lo, a.period());
        if (r < 0) r += a.period();
        if (r >= a.period()) r = 0.0;
        out[i] = a.lo + r;
      } else if (x[i] < a.lo - slack(a) || x[i] > a.hi + slack(a)) {
        throw Error(ErrorCode::OutOfDomain,
                    name_ + ": coordinate " + std::to_string(i) + " = " + std::to_string(x[i]) + " outside [" +
                        std::to_string(a.lo) + ", " + std::to_string(a.hi) + "]");
      }
    }
    return out;
  }

  /// Shortest coordinate difference b - a, using the minimal image on periodic axes.
  Vec displacement(const Vec& a, const Vec& b) const {
    Vec d = b - a;
    for (int i = 0; i < dim(); ++i) {
      const Axis& ax = axis(i);
      if (!ax.periodic) continue;
      const double p = ax.period();
      d[i] -= p * std::round(d[i] / p);
    }
    return d;
  }

  /// Coordinates of x + v (wrapped).
  Vec advance(const Vec& x, const Vec& v) const { return wrap(x + v); }

  /// True when x is at least `margin` away from every non-periodic bound.
  bool interior(const Vec& x, double margin) const {
    for (int i = 0; i < dim(); ++i) {
      const Axis& a = axis(i);
      if (a.periodic) continue;
      if (x[i] - margin < a.lo - slack(a) || x[i] + margin > a.hi + slack(a)) return false;
    }
    return true;
  }

  Mat metric_at(const Vec& x) const {
    const Vec y = wrap(x);
    Mat g = metric_(y);
    if (g.rows() != dim() || g.cols() != dim()) {
      throw Error(ErrorCode::InvalidInput, name_ + ": metric has wrong shape");
    }
    const double scale = std::max(1.0, g.cwiseAbs().maxCoeff());
    if (!g.allFinite() || (g - g.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
      throw Error(ErrorCode::DegenerateMetric, name_ + ": metric not symmetric at sample");
    }
    const double min_eig = smallest_eigenvalue(g);
    if (!(min_eig > kEigenvalueFloor)) {
      throw Error(ErrorCode::DegenerateMetric,
                  name_ + ": smallest metric eigenvalue " + std::to_string(min_eig) + " below floor");
    }
    return g;
  }

  double inner(const Vec& x, const Vec& u, const Vec& v) const { return u.dot(metric_at(x) * v); }
  double norm(const TangentVec& v) const { return std::sqrt(inner(v.base, v.comp, v.comp)); }

  /// Levi-Civita symbols from central differences of the metric with step h.
  Christoffel christoffel(const Vec& x, double h = kMetricStep) const {
    const Vec y = wrap(x);
    if (!interior(y, h)) {
      throw Error(ErrorCode::OutOfDomain, name_ + ": Christoffel stencil leaves the chart");
    }
    const int d = dim();
    const Mat g = metric_at(y);
    const Mat ginv = g.inverse();
    std::vector<Mat> dg(static_cast<std::size_t>(d));
    for (int l = 0; l < d; ++l) {
      Vec e = Vec::Zero(d);
      e[l] = h;
      dg[static_cast<std::size_t>(l)] = (metric_at(y + e) - metric_at(y - e)) / (2.0 * h);
    }
    // lower[l](i,j) = 1/2 (d_i g_lj + d_j g_li - d_l g_ij)
    Christoffel gamma(d);
    for (int i = 0; i < d; ++i) {
      for (int j = i; j < d; ++j) {
        Vec lower(d);
        for (int l = 0; l < d; ++l) {
          lower[l] = 0.5 * (dg[static_cast<std::size_t>(i)](l, j) + dg[static_cast<std::size_t>(j)](l, i) -
                            dg[static_cast<std::size_t>(l)](i, j));
        }
        const Vec upper = ginv * lower;
        for (int k = 0; k < d; ++k) {
          gamma(k, i, j) = upper[k];
          gamma(k, j, i) = upper[k];
        }
      }
    }
    return gamma;
  }

  Vec embed(const Vec& x) const {
    if (!embedding_) throw Error(ErrorCode::InvalidInput, name_ + " has no embedding");
    return embedding_(wrap(x));
  }

 private:
  static double slack(const Axis& a) { return 1e-12 * std::max(1.0, std::abs(a.hi) + std::abs(a.lo)); }

  static double smallest_eigenvalue(const Mat& g) {
    if (g.rows() == 1) return g(0, 0);
    if (g.rows() == 2) {
      const double tr = g(0, 0) + g(1, 1);
      const double det = g(0, 0) * g(1, 1) - g(0, 1) * g(1, 0);
      const double disc = std::sqrt(std::max(0.0, 0.25 * tr * tr - det));
      return 0.5 * tr - disc;
    }
    Eigen::SelfAdjointEigenSolver<Mat> es(g, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
  }

  std::string name_;
  std::vector<Axis> axes_;
  MetricFn metric_;
  EmbeddingFn embedding_;
};

/// Free-function spelling of ManifoldModel::metric_at.
inline Mat metric_at(const ManifoldModel& m, const Vec& x) { return m.metric_at(x); }
inline Christoffel christoffel(const ManifoldModel& m, const Vec& x, double h = kMetricStep) {
  return m.christoffel(x, h);
}

}  // namespace sublab

#endif  // SUBLAB_MANIFOLD_HPP
