#ifndef SUBLAB_BUNDLE_HPP
#define SUBLAB_BUNDLE_HPP

#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "sublab/curve.hpp"
#include "sublab/manifold.hpp"
#include "sublab/submersion.hpp"

namespace sublab {

/// Step used to finite-difference transported fields when building tangent
/// vectors to the unit bundle.
inline constexpr double kTransportStep = 1e-4;

struct PQParams {
  double p = 0.0;
  double q = 0.0;

  PQParams() = default;
  PQParams(double p_, double q_) : p(p_), q(q_) {
    if (!(q >= 0.0)) throw Error(ErrorCode::InvalidInput, "(p,q)-metric requires q >= 0");
  }
};

/// A point zeta of the bundle: base point and fibre components.
struct BundlePoint {
  Vec base;
  Vec fiber;
};

/// Tangent vector to the bundle total space at `at`, realized as the velocity
/// (dbase, dfiber) of a curve through `at`.
struct BundleTangent {
  BundlePoint at;
  Vec dbase;
  Vec dfiber;
};

/// Either the tangent bundle (TM, g, Levi-Civita) or the horizontal bundle
/// (H^P, g~, H nabla~) of a submersion. Fibre vectors are stored in the
/// coordinate frame of the underlying manifold.
class VectorBundle {
 public:
  static VectorBundle tangent(ManifoldModel m) { return VectorBundle(std::move(m), std::nullopt); }
  static VectorBundle horizontal(const SubmersionModel& s) { return VectorBundle(s.total(), s); }

  const ManifoldModel& manifold() const { return manifold_; }
  bool is_horizontal() const { return submersion_.has_value(); }
  const std::optional<SubmersionModel>& submersion() const { return submersion_; }
  int fiber_rank() const { return submersion_ ? submersion_->base_dim() : manifold_.dim(); }

  /// Orthogonal projector onto the fibre inside T_x.
  Mat fiber_projector(const Vec& x) const {
    if (!submersion_) return Mat::Identity(manifold_.dim(), manifold_.dim());
    return submersion_->horizontal_projector(x);
  }

  /// Orthonormal frame of the fibre at x, ordered by coordinate.
  Mat fiber_frame(const Vec& x) const {
    if (submersion_) return submersion_->horizontal_space(x);
    const Mat g = manifold_.metric_at(x);
    return gram_schmidt(g, Mat::Identity(g.rows(), g.cols()), Mat(g.rows(), 0), manifold_.dim());
  }

  double fiber_inner(const Vec& x, const Vec& u, const Vec& v) const { return manifold_.inner(x, u, v); }

  /// Rate of change of a D-parallel section along a curve with velocity v:
  /// xi' = -Pi Gamma(v, xi) + (d Pi)[v] xi. The second term is the vertical
  /// correction that keeps a horizontal section horizontal.
  Vec transport_rate(const Vec& x, const Vec& xi, const Vec& v) const {
    const Christoffel gamma = manifold_.christoffel(x);
    if (!submersion_) return -gamma.contract(v, xi);
    const Mat proj = submersion_->horizontal_projector(x);
    const double vn = v.norm();
    Vec correction = Vec::Zero(xi.size());
    if (vn > 0.0) {
      const double step = kMetricStep / vn;
      const Mat plus = submersion_->horizontal_projector(manifold_.advance(x, step * v));
      const Mat minus = submersion_->horizontal_projector(manifold_.advance(x, -step * v));
      correction = (plus - minus) / (2.0 * step) * xi;
    }
    return -proj * gamma.contract(v, xi) + correction;
  }

 private:
  VectorBundle(ManifoldModel m, std::optional<SubmersionModel> s)
      : manifold_(std::move(m)), submersion_(std::move(s)) {}

  ManifoldModel manifold_;
  std::optional<SubmersionModel> submersion_;
};

/// Connection map K: the covariant derivative D_v xi read off from a tangent
/// vector (v, d xi / dt). With dbase = 0 it is the canonical identification of
/// the tangent space of a fibre with the fibre itself.
inline Vec connection_map(const VectorBundle& e, const BundleTangent& a) {
  if (a.dbase.isZero(0.0)) return a.dfiber;
  const Christoffel gamma = e.manifold().christoffel(a.at.base);
  const Vec raw = a.dfiber + gamma.contract(a.dbase, a.at.fiber);
  if (!e.is_horizontal()) return raw;
  return e.fiber_projector(a.at.base) * raw;
}

namespace detail {

inline bool same_point(const ManifoldModel& m, const BundlePoint& a, const BundlePoint& b) {
  if (a.fiber.size() != b.fiber.size()) return false;
  const double scale = 1e-12 * std::max(1.0, a.fiber.cwiseAbs().maxCoeff());
  return m.displacement(a.base, b.base).cwiseAbs().maxCoeff() <= 1e-12 &&
         (a.fiber - b.fiber).cwiseAbs().maxCoeff() <= scale;
}

}  // namespace detail

/// h_{p,q}(A, B) = g(pi_* A, pi_* B)
///               + (1 + |zeta|^2)^{-p} (h(KA, KB) + q h(KA, zeta) h(KB, zeta)).
inline double pq_metric(const VectorBundle& e, const PQParams& pq, const BundlePoint& zeta, const BundleTangent& a,
                        const BundleTangent& b) {
  const ManifoldModel& m = e.manifold();
  if (!detail::same_point(m, zeta, a.at) || !detail::same_point(m, zeta, b.at)) {
    throw Error(ErrorCode::MismatchedBasePoint, "tangent vectors are not based at zeta");
  }
  const Mat g = m.metric_at(zeta.base);
  const Vec ka = connection_map(e, a);
  const Vec kb = connection_map(e, b);
  // each inner product is averaged over both orders so h(A,B) == h(B,A) bitwise
  auto inner = [&g](const Vec& u, const Vec& v) { return 0.5 * (u.dot(g * v) + v.dot(g * u)); };
  const double zeta2 = zeta.fiber.dot(g * zeta.fiber);
  const double weight = std::pow(1.0 + zeta2, -pq.p);
  const double ha = ka.dot(g * zeta.fiber);
  const double hb = kb.dot(g * zeta.fiber);
  return inner(a.dbase, b.dbase) + weight * (inner(ka, kb) + pq.q * ha * hb);
}

inline double pq_norm(const VectorBundle& e, const PQParams& pq, const BundleTangent& a) {
  return std::sqrt(std::max(0.0, pq_metric(e, pq, a.at, a, a)));
}

namespace detail {

inline Error as_left_domain(const Error& e) {
  if (e.code() == ErrorCode::OutOfDomain) return Error(ErrorCode::LeftDomain, e.what());
  return e;
}

/// One Runge-Kutta step of the coupled system x' = velocity(x), xi' = transport_rate(x, xi, x').
template <typename VelocityField>
std::pair<Vec, Vec> transport_step(const VectorBundle& e, const Vec& x, const Vec& xi, VelocityField&& velocity,
                                   double h) {
  const ManifoldModel& m = e.manifold();
  try {
    const Vec v1 = velocity(x);
    const Vec k1 = e.transport_rate(x, xi, v1);
    const Vec x2 = m.advance(x, 0.5 * h * v1);
    const Vec v2 = velocity(x2);
    const Vec k2 = e.transport_rate(x2, xi + 0.5 * h * k1, v2);
    const Vec x3 = m.advance(x, 0.5 * h * v2);
    const Vec v3 = velocity(x3);
    const Vec k3 = e.transport_rate(x3, xi + 0.5 * h * k2, v3);
    const Vec x4 = m.advance(x, h * v3);
    const Vec v4 = velocity(x4);
    const Vec k4 = e.transport_rate(x4, xi + h * k3, v4);
    return {m.advance(x, h / 6.0 * (v1 + 2.0 * v2 + 2.0 * v3 + v4)), xi + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)};
  } catch (const Error& err) {
    throw as_left_domain(err);
  }
}

/// Velocity of t -> transport of xi along the integral curve of `velocity`
/// through x, at t = 0, by central differences.
template <typename VelocityField>
BundleTangent transported_velocity(const VectorBundle& e, const BundlePoint& at, VelocityField&& velocity,
                                   double step = kTransportStep) {
  const auto fwd = transport_step(e, at.base, at.fiber, velocity, step);
  const auto bwd = transport_step(e, at.base, at.fiber, velocity, -step);
  return BundleTangent{at, velocity(at.base), (fwd.second - bwd.second) / (2.0 * step)};
}

}  // namespace detail

/// D-parallel transport of xi0 along a sampled curve in the bundle's
/// manifold. Segments are traversed with the piecewise-linear interpolant;
/// horizontal bundles re-project onto the fibre after each step.
inline std::vector<Vec> parallel_transport_bundle(const VectorBundle& e, const Curve& c, const Vec& xi0,
                                                  int substeps = 1) {
  if (c.samples.empty()) throw Error(ErrorCode::InvalidInput, "empty curve");
  const ManifoldModel& m = e.manifold();
  std::vector<Vec> out;
  out.reserve(c.size());
  Vec xi = xi0;
  if (e.is_horizontal()) xi = e.fiber_projector(c.front()) * xi;
  out.push_back(xi);
  for (std::size_t i = 1; i < c.size(); ++i) {
    const double dt = c.param[i] - c.param[i - 1];
    const Vec v = m.displacement(c.samples[i - 1], c.samples[i]) / dt;
    const double h = dt / substeps;
    Vec x = c.samples[i - 1];
    for (int k = 0; k < substeps; ++k) {
      auto next = detail::transport_step(e, x, xi, [&v](const Vec&) { return v; }, h);
      x = std::move(next.first);
      xi = std::move(next.second);
      if (e.is_horizontal()) xi = e.fiber_projector(x) * xi;
    }
    out.push_back(xi);
  }
  return out;
}

/// Frames of the three pairwise orthogonal subbundles of T(E~^1) at a unit
/// horizontal vector xi:
///   fiber_sphere  (H')  tangent to the unit sphere of the fibre, b - 1 vectors;
///   base_lift     (H'') transported xi along horizontal lifts of base
///                       coordinate directions, b vectors;
///   fiber_transport (V) transported xi along vertical frame directions, a vectors.
struct SplitFrames {
  std::vector<BundleTangent> fiber_sphere;
  std::vector<BundleTangent> base_lift;
  std::vector<BundleTangent> fiber_transport;
};

inline SplitFrames split_subbundles(const SubmersionModel& s, const BundlePoint& xi) {
  const VectorBundle e = VectorBundle::horizontal(s);
  const ManifoldModel& total = s.total();
  const Vec x = total.wrap(xi.base);
  const BundlePoint at{x, xi.fiber};
  const Mat g = total.metric_at(x);
  SplitFrames out;

  Mat unit(xi.fiber.size(), 1);
  unit.col(0) = xi.fiber / std::sqrt(xi.fiber.dot(g * xi.fiber));
  const Mat sphere = gram_schmidt(g, s.horizontal_space(x), unit, s.base_dim() - 1);
  for (Eigen::Index k = 0; k < sphere.cols(); ++k) {
    out.fiber_sphere.push_back(BundleTangent{at, Vec::Zero(x.size()), sphere.col(k)});
  }

  for (int a = 0; a < s.base_dim(); ++a) {
    const Vec w = Vec::Unit(s.base_dim(), a);
    out.base_lift.push_back(
        detail::transported_velocity(e, at, [&s, &w](const Vec& y) { return s.lift_components(y, w); }));
  }

  const Mat vertical = s.vertical_space(x);
  for (Eigen::Index k = 0; k < vertical.cols(); ++k) {
    const Vec u = vertical.col(k);
    out.fiber_transport.push_back(detail::transported_velocity(e, at, [&u](const Vec&) { return u; }));
  }
  return out;
}

/// Image of a bundle point under P~ = P_*: (x~, xi) -> (P x~, J xi).
inline BundlePoint push_point(const SubmersionModel& s, const BundlePoint& xi) {
  return BundlePoint{s.project(xi.base), s.jacobian(xi.base) * xi.fiber};
}

/// Differential of P~ applied to a tangent vector of the horizontal bundle:
/// (dbase, dfiber) -> (J dbase, J dfiber + (dJ[dbase]) xi).
inline BundleTangent push_tangent(const SubmersionModel& s, const BundleTangent& a, double step = kBracketStep) {
  const Mat jac = s.jacobian(a.at.base);
  Vec dfiber = jac * a.dfiber;
  if (!a.dbase.isZero(0.0)) {
    const Mat plus = s.jacobian(s.total().advance(a.at.base, step * a.dbase));
    const Mat minus = s.jacobian(s.total().advance(a.at.base, -step * a.dbase));
    dfiber += (plus - minus) / (2.0 * step) * a.at.fiber;
  }
  return BundleTangent{push_point(s, a.at), jac * a.dbase, dfiber};
}

}  // namespace sublab

#endif  // SUBLAB_BUNDLE_HPP
