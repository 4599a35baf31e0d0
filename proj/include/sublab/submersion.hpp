#ifndef SUBLAB_SUBMERSION_HPP
#define SUBLAB_SUBMERSION_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include "sublab/curve.hpp"
#include "sublab/manifold.hpp"

namespace sublab {

/// Default step for finite-difference Jacobians of the projection.
inline constexpr double kJacobianStep = 1e-5;
/// Step for Lie brackets and derivatives of lifted fields.
inline constexpr double kBracketStep = 1e-4;

/// Orthonormalizes the columns of `candidates` against `existing` in the inner
/// product <u, v> = u^T g v (modified Gram-Schmidt, two passes). Columns whose
/// residual norm drops below `tol` are skipped; at most `limit` are accepted.
inline Mat gram_schmidt(const Mat& g, const Mat& candidates, const Mat& existing, int limit, double tol = 1e-8) {
  Mat basis = existing;
  int accepted = 0;
  for (Eigen::Index c = 0; c < candidates.cols() && accepted < limit; ++c) {
    Vec v = candidates.col(c);
    const double scale = std::sqrt(std::max(0.0, v.dot(g * v)));
    if (scale == 0.0) continue;
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index q = 0; q < basis.cols(); ++q) v -= basis.col(q).dot(g * v) * basis.col(q);
    }
    const double n = std::sqrt(std::max(0.0, v.dot(g * v)));
    if (n <= tol * scale) continue;
    basis.conservativeResize(g.rows(), basis.cols() + 1);
    basis.col(basis.cols() - 1) = v / n;
    ++accepted;
  }
  return basis.rightCols(basis.cols() - existing.cols());
}

/// A submersion P between two coordinate manifolds, with the induced
/// splitting of the total tangent space into H^P (horizontal) and V^P = ker P_*.
class SubmersionModel {
 public:
  using ProjFn = std::function<Vec(const Vec&)>;
  using JacobianFn = std::function<Mat(const Vec&)>;

  SubmersionModel(ManifoldModel total, ManifoldModel base, ProjFn proj, JacobianFn jacobian = {})
      : total_(std::move(total)), base_(std::move(base)), proj_(std::move(proj)), jacobian_(std::move(jacobian)) {
    if (base_.dim() > total_.dim()) {
      throw Error(ErrorCode::InvalidInput, "base dimension exceeds total dimension");
    }
  }

  const ManifoldModel& total() const { return total_; }
  const ManifoldModel& base() const { return base_; }
  /// b = dim M.
  int base_dim() const { return base_.dim(); }
  /// a = dim M~ - dim M.
  int fiber_dim() const { return total_.dim() - base_.dim(); }
  const ProjFn& proj_fn() const { return proj_; }
  const JacobianFn& jacobian_fn() const { return jacobian_; }

  Vec project(const Vec& x) const { return base_.wrap(proj_(total_.wrap(x))); }

  Mat jacobian(const Vec& x) const {
    const Vec y = total_.wrap(x);
    if (jacobian_) return jacobian_(y);
    Mat jac(base_dim(), total_.dim());
    for (int i = 0; i < total_.dim(); ++i) {
      Vec e = Vec::Zero(total_.dim());
      e[i] = kJacobianStep;
      const Vec plus = proj_(total_.wrap(y + e));
      const Vec minus = proj_(total_.wrap(y - e));
      jac.col(i) = base_.displacement(minus, plus) / (2.0 * kJacobianStep);
    }
    return jac;
  }

  /// g~-orthogonal projector onto H^P: G^{-1} J^T (J G^{-1} J^T)^{-1} J.
  Mat horizontal_projector(const Vec& x) const {
    const Mat g = total_.metric_at(x);
    const Mat jac = jacobian(x);
    check_rank(jac);
    const Mat ginv_jt = g.ldlt().solve(jac.transpose());
    const Mat gram = jac * ginv_jt;
    return ginv_jt * gram.ldlt().solve(jac);
  }

  /// Horizontal lift of base components w at x (no base-point check).
  Vec lift_components(const Vec& x, const Vec& w) const {
    const Mat g = total_.metric_at(x);
    const Mat jac = jacobian(x);
    check_rank(jac);
    const Mat ginv_jt = g.ldlt().solve(jac.transpose());
    const Mat gram = jac * ginv_jt;
    return ginv_jt * gram.ldlt().solve(w);
  }

  /// Columns: g~-orthonormal frame of H^P, ordered by base coordinate.
  Mat horizontal_space(const Vec& x) const {
    const Mat g = total_.metric_at(x);
    const Mat jac = jacobian(x);
    check_rank(jac);
    const Mat candidates = g.ldlt().solve(jac.transpose());
    const Mat frame = gram_schmidt(g, candidates, Mat(total_.dim(), 0), base_dim());
    if (frame.cols() != base_dim()) throw Error(ErrorCode::RankDeficient, "horizontal frame lost rank");
    return frame;
  }

  /// Columns: g~-orthonormal frame of V^P = ker P_*, built from the coordinate
  /// basis in coordinate order.
  Mat vertical_space(const Vec& x) const {
    if (fiber_dim() == 0) {
      // rank check still applies
      check_rank(jacobian(x));
      return Mat(total_.dim(), 0);
    }
    const Mat g = total_.metric_at(x);
    const Mat horizontal = horizontal_space(x);
    const Mat frame =
        gram_schmidt(g, Mat::Identity(total_.dim(), total_.dim()), horizontal, fiber_dim(), 1e-6);
    if (frame.cols() != fiber_dim()) throw Error(ErrorCode::RankDeficient, "vertical frame lost rank");
    return frame;
  }

 private:
  void check_rank(const Mat& jac) const {
    if (jac.rows() != base_dim() || jac.cols() != total_.dim()) {
      throw Error(ErrorCode::InvalidInput, "jacobian has wrong shape");
    }
    const Mat jjt = jac * jac.transpose();
    Eigen::SelfAdjointEigenSolver<Mat> es(jjt, Eigen::EigenvaluesOnly);
    const double smallest_sv = std::sqrt(std::max(0.0, es.eigenvalues().minCoeff()));
    if (!(smallest_sv > 1e-8)) {
      throw Error(ErrorCode::RankDeficient, "projection jacobian has rank < dim base");
    }
  }

  ManifoldModel total_;
  ManifoldModel base_;
  ProjFn proj_;
  JacobianFn jacobian_;
};

inline Mat vertical_space(const SubmersionModel& s, const Vec& x) { return s.vertical_space(x); }
inline Mat horizontal_space(const SubmersionModel& s, const Vec& x) { return s.horizontal_space(x); }

/// Unique horizontal vector at x projecting onto w.
inline TangentVec horizontal_lift_vector(const SubmersionModel& s, const Vec& x, const TangentVec& w) {
  const Vec px = s.project(x);
  if (s.base().displacement(px, s.base().wrap(w.base)).norm() > 1e-9) {
    throw Error(ErrorCode::BasePointMismatch, "tangent vector is not based at P(x)");
  }
  return TangentVec{s.total().wrap(x), s.lift_components(x, w.comp)};
}

/// Horizontal lift of a sampled base curve starting at x0. Each segment is
/// followed with the constant base velocity of the piecewise-linear
/// interpolant, integrated by `substeps` Runge-Kutta steps.
inline Curve horizontal_lift_curve(const SubmersionModel& s, const Vec& x0, const Curve& gamma, int substeps = 4) {
  if (gamma.samples.empty()) throw Error(ErrorCode::InvalidInput, "empty base curve");
  if (s.base().displacement(s.project(x0), s.base().wrap(gamma.front())).norm() > 1e-9) {
    throw Error(ErrorCode::BasePointMismatch, "start point does not project onto the curve start");
  }
  const ManifoldModel& total = s.total();
  auto shift = [&](const Vec& at, const Vec& dx) -> Vec {
    try {
      return total.advance(at, dx);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::OutOfDomain) throw Error(ErrorCode::LeftDomain, e.what());
      throw;
    }
  };
  auto rate = [&](const Vec& at, const Vec& w) -> Vec {
    try {
      return s.lift_components(at, w);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::OutOfDomain) throw Error(ErrorCode::LeftDomain, e.what());
      throw;
    }
  };

  Curve out;
  Vec x = total.wrap(x0);
  out.samples.push_back(x);
  out.param.push_back(gamma.param.front());
  for (std::size_t i = 1; i < gamma.size(); ++i) {
    const double dt = gamma.param[i] - gamma.param[i - 1];
    const Vec w = s.base().displacement(gamma.samples[i - 1], gamma.samples[i]) / dt;
    const double h = dt / substeps;
    for (int k = 0; k < substeps; ++k) {
      const Vec k1 = rate(x, w);
      const Vec k2 = rate(shift(x, 0.5 * h * k1), w);
      const Vec k3 = rate(shift(x, 0.5 * h * k2), w);
      const Vec k4 = rate(shift(x, h * k3), w);
      x = shift(x, h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
    }
    out.samples.push_back(x);
    out.param.push_back(gamma.param[i]);
  }
  return out;
}

namespace detail {

/// Basic extension of constant base components w: y -> lift(y, w).
inline Vec basic_field(const SubmersionModel& s, const Vec& y, const Vec& w) { return s.lift_components(y, w); }

/// Derivative of the basic field of w along direction v at x (central differences).
inline Vec basic_field_derivative(const SubmersionModel& s, const Vec& x, const Vec& w, const Vec& v,
                                  double step = kBracketStep) {
  const Vec plus = basic_field(s, s.total().advance(x, step * v), w);
  const Vec minus = basic_field(s, s.total().advance(x, -step * v), w);
  return (plus - minus) / (2.0 * step);
}

/// [X~, Y~] at x for the basic fields of base components wx, wy.
inline Vec basic_bracket(const SubmersionModel& s, const Vec& x, const Vec& wx, const Vec& wy) {
  const Vec fx = basic_field(s, x, wx);
  const Vec fy = basic_field(s, x, wy);
  return basic_field_derivative(s, x, wy, fx) - basic_field_derivative(s, x, wx, fy);
}

}  // namespace detail

struct Lemma1Residuals {
  double r_i = 0.0;
  double r_ii = 0.0;
};

/// Residuals of the two basic-field identities
///   (i)  P_*(D~_X~ Y~) = nabla_X Y
///   (ii) g~(D~_U X~, Y~) = -1/2 g~(U, [X~, Y~])
/// for basic lifts of base coordinate fields and vertical frame vectors U,
/// maximized over all sample points and field pairs.
inline Lemma1Residuals lemma1_residuals(const SubmersionModel& s, const std::vector<Vec>& samples) {
  Lemma1Residuals out;
  const int b = s.base_dim();
  const ManifoldModel& total = s.total();
  for (const Vec& x : samples) {
    const Mat g = total.metric_at(x);
    const Christoffel gamma_total = total.christoffel(x);
    const Vec px = s.project(x);
    const Christoffel gamma_base = s.base().christoffel(px);
    const Mat gbase = s.base().metric_at(px);
    const Mat proj_h = s.horizontal_projector(x);
    const Mat jac = s.jacobian(x);
    const Mat vertical = s.vertical_space(x);

    std::vector<Vec> coord(static_cast<std::size_t>(b));
    std::vector<Vec> lifted(static_cast<std::size_t>(b));
    for (int a = 0; a < b; ++a) {
      coord[static_cast<std::size_t>(a)] = Vec::Unit(b, a);
      lifted[static_cast<std::size_t>(a)] = detail::basic_field(s, x, coord[static_cast<std::size_t>(a)]);
    }
    for (int a = 0; a < b; ++a) {
      const Vec& xa = lifted[static_cast<std::size_t>(a)];
      for (int c = 0; c < b; ++c) {
        const Vec& yc = lifted[static_cast<std::size_t>(c)];
        const Vec cov = detail::basic_field_derivative(s, x, coord[static_cast<std::size_t>(c)], xa) +
                        gamma_total.contract(xa, yc);
        const Vec lhs = jac * (proj_h * cov);
        const Vec rhs = gamma_base.contract(coord[static_cast<std::size_t>(a)], coord[static_cast<std::size_t>(c)]);
        const Vec diff = lhs - rhs;
        out.r_i = std::max(out.r_i, std::sqrt(std::max(0.0, diff.dot(gbase * diff))));

        if (vertical.cols() == 0) continue;
        const Vec bracket =
            detail::basic_bracket(s, x, coord[static_cast<std::size_t>(a)], coord[static_cast<std::size_t>(c)]);
        for (Eigen::Index k = 0; k < vertical.cols(); ++k) {
          const Vec u = vertical.col(k);
          const Vec du = detail::basic_field_derivative(s, x, coord[static_cast<std::size_t>(a)], u) +
                         gamma_total.contract(u, xa);
          const double left = (proj_h * du).dot(g * yc);
          const double right = -0.5 * u.dot(g * bracket);
          out.r_ii = std::max(out.r_ii, std::abs(left - right));
        }
      }
    }
  }
  return out;
}

/// Largest g~-norm of the vertical part of [X~, Y~] over pairs drawn from the
/// horizontal frame at x. Zero iff H^P is integrable near x (up to truncation).
inline double integrability_defect(const SubmersionModel& s, const Vec& x) {
  if (s.fiber_dim() == 0 || s.base_dim() < 2) return 0.0;
  const Mat g = s.total().metric_at(x);
  const Mat frame = s.horizontal_space(x);
  const Mat jac = s.jacobian(x);
  const Mat proj_v = Mat::Identity(g.rows(), g.cols()) - s.horizontal_projector(x);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < frame.cols(); ++i) {
    for (Eigen::Index j = i + 1; j < frame.cols(); ++j) {
      const Vec bracket = detail::basic_bracket(s, x, jac * frame.col(i), jac * frame.col(j));
      const Vec vert = proj_v * bracket;
      worst = std::max(worst, std::sqrt(std::max(0.0, vert.dot(g * vert))));
    }
  }
  return worst;
}

/// Warping function f on the base together with its declared uniform bound.
struct WarpSpec {
  std::function<double(const Vec&)> f;
  double upper_bound = 1.0;

  double operator()(const Vec& base_point) const { return f(base_point); }

  void validate(const std::vector<Vec>& base_samples) const {
    for (const Vec& x : base_samples) {
      const double v = f(x);
      if (!(v > 0.0)) throw Error(ErrorCode::NonPositiveWarp, "warping function is not positive at a sample");
      if (v > upper_bound) throw Error(ErrorCode::InvalidInput, "warping function exceeds its declared bound");
    }
  }
};

/// Total metric g~_f: equal to g~ on H x H and to (f o P)^2 g~ on V x TM~.
/// Assembled as G F diag(1,..,1, f^2,..,f^2) F^T G for the split orthonormal
/// frame F = [H | V], which reduces to G + (f^2 - 1) G V V^T G.
inline ManifoldModel warp_metric(const SubmersionModel& s, const WarpSpec& warp) {
  SubmersionModel copy = s;
  auto metric = [copy, warp](const Vec& x) -> Mat {
    const Mat g = copy.total().metric_fn()(x);
    const double f = warp(copy.project(x));
    if (!(f > 0.0)) throw Error(ErrorCode::NonPositiveWarp, "warping function is not positive");
    if (copy.fiber_dim() == 0) return g;
    const Mat vertical = copy.vertical_space(x);
    const Mat gv = g * vertical;
    Mat out = g + (f * f - 1.0) * gv * gv.transpose();
    return 0.5 * (out + out.transpose());
  };
  std::vector<Axis> axes = s.total().axes();
  return ManifoldModel(s.total().name() + "-warped", std::move(axes), metric);
}

/// The same projection viewed as a submersion of (M~, g~_f) onto M.
inline SubmersionModel warped_submersion(const SubmersionModel& s, const WarpSpec& warp) {
  return SubmersionModel(warp_metric(s, warp), s.base(), s.proj_fn(), s.jacobian_fn());
}

struct SubmersionCheck {
  double max_riemannian_deviation = 0.0;
  double max_frame_error = 0.0;
  bool ok = true;
};

/// Checks the Riemannian-submersion property |P_* X| = |X| on horizontal frames
/// and completeness of the H/V splitting at every sample.
inline SubmersionCheck check_submersion(const SubmersionModel& s, const std::vector<Vec>& samples) {
  SubmersionCheck out;
  for (const Vec& x : samples) {
    const Mat g = s.total().metric_at(x);
    const Mat h = s.horizontal_space(x);
    const Mat v = s.vertical_space(x);
    const Mat gb = s.base().metric_at(s.project(x));
    const Mat jac = s.jacobian(x);
    for (Eigen::Index k = 0; k < h.cols(); ++k) {
      const Vec img = jac * h.col(k);
      const double up = std::sqrt(h.col(k).dot(g * h.col(k)));
      const double down = std::sqrt(img.dot(gb * img));
      out.max_riemannian_deviation = std::max(out.max_riemannian_deviation, std::abs(down - up) / up);
    }
    Mat frame(g.rows(), h.cols() + v.cols());
    frame << h, v;
    const Mat gram = frame.transpose() * g * frame;
    out.max_frame_error =
        std::max(out.max_frame_error, (gram - Mat::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff());
  }
  out.ok = out.max_riemannian_deviation < 1e-6 && out.max_frame_error < 1e-9;
  return out;
}

}  // namespace sublab

#endif  // SUBLAB_SUBMERSION_HPP
