#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "sublab/curve.hpp"
#include "sublab/scenarios.hpp"
#include "sublab/submersion.hpp"

using namespace sublab;
using std::numbers::pi;

namespace {

Vec v1(double a) { return Vec::Constant(1, a); }

Vec v2(double a, double b) {
  Vec x(2);
  x << a, b;
  return x;
}

Vec v3(double a, double b, double c) {
  Vec x(3);
  x << a, b, c;
  return x;
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an exception";
  return ErrorCode::InvalidInput;
}

std::vector<SubmersionModel> all_scenarios() {
  return {product_torus_submersion(), product_sphere_circle_submersion(), hopf_submersion(), identity_submersion()};
}

/// Horizontal lift for the Hopf map worked out by hand: with J = [[2,0,0],[0,1,-1]]
/// and metric diag(1, sin^2, cos^2), the lift of (w_theta, w_phi) at eta is
/// (w_theta / 2, w_phi cos^2 eta, -w_phi sin^2 eta).
Vec hopf_lift(double eta, const Vec& w) {
  const double c = std::cos(eta);
  const double s = std::sin(eta);
  return v3(0.5 * w[0], w[1] * c * c, -w[1] * s * s);
}

}  // namespace

TEST(VerticalSpace, ProductTorusIsSecondCoordinate) {
  const auto s = product_torus_submersion();
  const Mat v = vertical_space(s, v2(1.0, 2.0));
  ASSERT_EQ(v.cols(), 1);
  EXPECT_NEAR(std::abs(v(1, 0)), 1.0, 1e-12);
  EXPECT_NEAR(v(0, 0), 0.0, 1e-12);
}

TEST(VerticalSpace, HopfIsUnitFiberDirection) {
  const auto s = hopf_submersion();
  for (double eta : {0.2, pi / 4, 1.3}) {
    const Vec x = v3(eta, 0.4, 2.5);
    const Mat v = vertical_space(s, x);
    ASSERT_EQ(v.cols(), 1);
    const Mat g = s.total().metric_at(x);
    EXPECT_NEAR(v.col(0).dot(g * v.col(0)), 1.0, 1e-12);
    // the fibre circle direction is d/dxi1 + d/dxi2, already of unit length
    EXPECT_NEAR(std::abs(v(0, 0)), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(v(1, 0)), 1.0, 1e-9);
    EXPECT_NEAR(v(1, 0), v(2, 0), 1e-9);
  }
}

TEST(VerticalSpace, IdentityIsEmpty) {
  const auto s = identity_submersion();
  EXPECT_EQ(vertical_space(s, v2(1.0, 1.0)).cols(), 0);
  EXPECT_EQ(horizontal_space(s, v2(1.0, 1.0)).cols(), 2);
}

TEST(HorizontalSpace, ProductTorusIsFirstCoordinate) {
  const auto s = product_torus_submersion();
  const Mat h = horizontal_space(s, v2(3.0, 0.5));
  ASSERT_EQ(h.cols(), 1);
  EXPECT_NEAR(h(0, 0), 1.0, 1e-12);
  EXPECT_NEAR(h(1, 0), 0.0, 1e-12);
}

TEST(HorizontalSpace, IdentityIsOrthonormalFrame) {
  const auto s = identity_submersion();
  const Mat h = horizontal_space(s, v2(3.0, 0.5));
  EXPECT_TRUE((h.transpose() * h).isApprox(Mat::Identity(2, 2), 1e-12));
}

TEST(HorizontalSpace, HopfOrthogonalToFiber) {
  const auto s = hopf_submersion();
  const Vec x = v3(0.7, 1.0, 5.0);
  const Mat g = s.total().metric_at(x);
  const Mat h = horizontal_space(s, x);
  const Mat v = vertical_space(s, x);
  ASSERT_EQ(h.cols(), 2);
  EXPECT_LT((h.transpose() * g * v).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_LT((h.transpose() * g * h - Mat::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Splitting, FramesAreCompleteAndOrthonormal) {
  for (const auto& s : all_scenarios()) {
    for (const Vec& x : interior_samples(s.total(), 20, 3)) {
      const Mat g = s.total().metric_at(x);
      const Mat h = s.horizontal_space(x);
      const Mat v = s.vertical_space(x);
      Mat f(g.rows(), h.cols() + v.cols());
      f << h, v;
      ASSERT_EQ(f.cols(), g.rows());
      EXPECT_LT((f.transpose() * g * f - Mat::Identity(f.cols(), f.cols())).cwiseAbs().maxCoeff(), 1e-9)
          << s.total().name();
    }
  }
}

TEST(Splitting, FiniteDifferenceJacobianMatchesAnalytic) {
  const auto hopf = hopf_submersion();
  const SubmersionModel numeric(hopf.total(), hopf.base(), hopf.proj_fn());
  const Vec x = v3(0.6, 1.0, 2.0);
  EXPECT_LT((numeric.jacobian(x) - hopf.jacobian(x)).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(Splitting, RankDeficientJacobianIsRejected) {
  const SubmersionModel flat(models::flat_torus(2), models::circle(), [](const Vec&) { return v1(0.0); },
                             [](const Vec&) { return Mat::Zero(1, 2); });
  EXPECT_EQ(code_of([&] { flat.vertical_space(v2(1.0, 1.0)); }), ErrorCode::RankDeficient);
}

TEST(HorizontalLift, ProductTorus) {
  const auto s = product_torus_submersion();
  const TangentVec lift = horizontal_lift_vector(s, v2(1.0, 4.0), TangentVec{v1(1.0), v1(1.0)});
  EXPECT_NEAR(lift.comp[0], 1.0, 1e-12);
  EXPECT_NEAR(lift.comp[1], 0.0, 1e-12);
}

TEST(HorizontalLift, ZeroVectorLiftsToZero) {
  const auto s = hopf_submersion();
  const Vec x = v3(0.5, 1.0, 2.0);
  const TangentVec lift = horizontal_lift_vector(s, x, TangentVec{s.project(x), Vec::Zero(2)});
  EXPECT_EQ(lift.comp.norm(), 0.0);
}

TEST(HorizontalLift, HopfMatchesHandSolvedSystem) {
  const auto s = hopf_submersion();
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (const Vec& x : interior_samples(s.total(), 25, 5)) {
    const Vec px = s.project(x);
    Vec w = v2(u(rng), u(rng));
    w /= std::sqrt(w.dot(s.base().metric_at(px) * w));
    const TangentVec lift = horizontal_lift_vector(s, x, TangentVec{px, w});
    EXPECT_LT((lift.comp - hopf_lift(x[0], w)).norm(), 1e-9);
    EXPECT_NEAR(s.total().norm(lift), 1.0, 1e-6);
    EXPECT_LT((s.jacobian(x) * lift.comp - w).norm(), 1e-9);
    const Vec vert = s.vertical_space(x).col(0);
    EXPECT_LT(std::abs(vert.dot(s.total().metric_at(x) * lift.comp)), 1e-9);
  }
}

TEST(HorizontalLift, LiftThenProjectIsIdentity) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (const auto& s : all_scenarios()) {
    for (const Vec& x : interior_samples(s.total(), 10, 9)) {
      Vec w(s.base_dim());
      for (int i = 0; i < s.base_dim(); ++i) w[i] = u(rng);
      const TangentVec lift = horizontal_lift_vector(s, x, TangentVec{s.project(x), w});
      EXPECT_LT((s.jacobian(x) * lift.comp - w).cwiseAbs().maxCoeff(), 1e-9);
      const double up = s.total().norm(lift);
      const double down = s.base().norm(TangentVec{s.project(x), w});
      EXPECT_NEAR(up, down, 1e-6 * std::max(1.0, down));
    }
  }
}

TEST(HorizontalLift, BasePointMismatch) {
  const auto s = product_torus_submersion();
  EXPECT_EQ(code_of([&] { horizontal_lift_vector(s, v2(1.0, 0.0), TangentVec{v1(1.5), v1(1.0)}); }),
            ErrorCode::BasePointMismatch);
}

TEST(HorizontalLiftCurve, ProductKeepsFiberCoordinate) {
  const auto s = product_torus_submersion();
  const Curve gamma = sample_path(s.base(), [](double t) { return v1(t); }, 0.0, 2.0, 50);
  const Curve lifted = horizontal_lift_curve(s, v2(0.0, 1.7), gamma);
  for (std::size_t i = 0; i < lifted.size(); ++i) {
    EXPECT_NEAR(lifted.samples[i][0], gamma.samples[i][0], 1e-12);
    EXPECT_NEAR(lifted.samples[i][1], 1.7, 1e-12);
  }
}

TEST(HorizontalLiftCurve, ConstantCurveStaysPut) {
  const auto s = hopf_submersion();
  const Vec x0 = v3(0.6, 1.0, 2.0);
  Curve gamma;
  gamma.samples = {s.project(x0), s.project(x0), s.project(x0)};
  gamma.param = {0.0, 0.5, 1.0};
  const Curve lifted = horizontal_lift_curve(s, x0, gamma);
  for (const Vec& y : lifted.samples) EXPECT_LT(s.total().displacement(x0, y).norm(), 1e-15);
}

TEST(HorizontalLiftCurve, HopfEquatorHolonomy) {
  const auto s = hopf_submersion();
  const Curve gamma = sample_path(s.base(), [](double t) { return v2(pi / 2, t); }, 0.0, 2 * pi, 401);
  const Vec x0 = v3(pi / 4, 0.3, 0.3);
  const Curve lifted = horizontal_lift_curve(s, x0, gamma);

  // Along the equator eta stays at pi/4 and the hand-solved lift is
  // (0, 1/2, -1/2): after one loop the point has moved pi along the fibre.
  double worst_trace = 0.0;
  double worst_vertical = 0.0;
  for (std::size_t i = 0; i < lifted.size(); ++i) {
    worst_trace = std::max(worst_trace, s.base().displacement(gamma.samples[i], s.project(lifted.samples[i])).norm());
    if (i == 0) continue;
    const Vec vel = s.total().displacement(lifted.samples[i - 1], lifted.samples[i]) /
                    (lifted.param[i] - lifted.param[i - 1]);
    const Vec mid = s.total().advance(lifted.samples[i - 1], 0.5 * (lifted.param[i] - lifted.param[i - 1]) * vel);
    const Vec vert = s.vertical_space(mid).col(0);
    worst_vertical = std::max(worst_vertical, std::abs(vert.dot(s.total().metric_at(mid) * vel)));
  }
  EXPECT_LT(worst_trace, 1e-4);
  EXPECT_LT(worst_vertical, 1e-6);

  const Vec end = lifted.back();
  EXPECT_NEAR(end[0], pi / 4, 1e-9);
  const Vec shift = s.total().displacement(x0, end);
  const double fiber_shift = s.total().norm(TangentVec{x0, shift});
  EXPECT_GT(fiber_shift, 0.1);
  EXPECT_NEAR(fiber_shift, pi, 1e-6);
}

TEST(BasicFieldResiduals, ProductTorus) {
  const auto s = product_torus_submersion();
  const auto r = lemma1_residuals(s, interior_samples(s.total(), 10, 1));
  EXPECT_LT(r.r_i, 1e-5);
  EXPECT_LT(r.r_ii, 1e-5);
}

TEST(BasicFieldResiduals, IdentityHasNoVerticalPart) {
  const auto s = identity_submersion();
  const auto r = lemma1_residuals(s, interior_samples(s.total(), 10, 1));
  EXPECT_EQ(r.r_ii, 0.0);
  EXPECT_LT(r.r_i, 1e-5);
}

TEST(BasicFieldResiduals, HopfAndSphereCircle) {
  for (const auto& s : {hopf_submersion(), product_sphere_circle_submersion()}) {
    const auto r = lemma1_residuals(s, interior_samples(s.total(), 10, 1));
    EXPECT_LT(r.r_i, 1e-4) << s.total().name();
    EXPECT_LT(r.r_ii, 1e-4) << s.total().name();
  }
}

TEST(Integrability, ProductsAreIntegrable) {
  for (const auto& s : {product_torus_submersion(), product_sphere_circle_submersion()}) {
    for (const Vec& x : interior_samples(s.total(), 10, 4)) EXPECT_LT(integrability_defect(s, x), 1e-5);
  }
  EXPECT_EQ(integrability_defect(identity_submersion(), v2(1.0, 2.0)), 0.0);
}

TEST(Integrability, HopfDefectMatchesHandComputedBracket) {
  const auto s = hopf_submersion();
  for (const Vec& x : interior_samples(s.total(), 10, 4)) {
    const double eta = x[0];
    // X = lift of d/dtheta = (1/2, 0, 0), Y = lift of d/dphi = (0, cos^2, -sin^2):
    // [X, Y] = 1/2 dY/deta, whose vertical part over |X||Y| is 2.
    const double h = 1e-5;
    const Vec dy = (hopf_lift(eta + h, v2(0, 1)) - hopf_lift(eta - h, v2(0, 1))) / (2 * h);
    const Vec bracket = 0.5 * dy;
    const Mat g = s.total().metric_at(x);
    const Vec vert = s.vertical_space(x).col(0);
    const double vpart = std::abs(vert.dot(g * bracket));
    const double nx = 0.5;
    const double ny = std::sin(eta) * std::cos(eta);
    const double oracle = vpart / (nx * ny);
    const double defect = integrability_defect(s, x);
    EXPECT_GT(defect, 0.5);
    EXPECT_NEAR(defect, oracle, 1e-4);
  }
}

TEST(WarpMetric, UnitWarpIsIdentity) {
  for (const auto& s : all_scenarios()) {
    const ManifoldModel w = warp_metric(s, WarpSpec{[](const Vec&) { return 1.0; }, 1.0});
    for (const Vec& x : interior_samples(s.total(), 10, 8)) {
      EXPECT_LT((w.metric_at(x) - s.total().metric_at(x)).cwiseAbs().maxCoeff(), 1e-12);
    }
  }
}

TEST(WarpMetric, ConstantWarpScalesFiberLoop) {
  const auto s = product_torus_submersion();
  for (double c : {0.5, 0.1, 2.0}) {
    const ManifoldModel w = warp_metric(s, WarpSpec{[c](const Vec&) { return c; }, 2.0});
    const Curve loop = sample_path(w, [](double t) { return v2(1.0, t); }, 0.0, 2 * pi, 200);
    EXPECT_NEAR(curve_length(w, loop), 2 * pi * c, 1e-4);
  }
}

TEST(WarpMetric, HorizontalLengthsUnchangedVerticalScaled) {
  const WarpSpec wave{[](const Vec& y) { return 0.5 + 0.25 * std::sin(y[0]); }, 0.75};
  for (const auto& s : {product_torus_submersion(), product_sphere_circle_submersion(), hopf_submersion()}) {
    const ManifoldModel w = warp_metric(s, wave);
    for (const Vec& x : interior_samples(s.total(), 10, 6)) {
      const Mat g = s.total().metric_at(x);
      const Mat gf = w.metric_at(x);
      const Mat h = s.horizontal_space(x);
      const Mat v = s.vertical_space(x);
      const double f = wave(s.project(x));
      EXPECT_LT((h.transpose() * gf * h - h.transpose() * g * h).cwiseAbs().maxCoeff(), 1e-10);
      EXPECT_LT((v.transpose() * gf * v - f * f * v.transpose() * g * v).cwiseAbs().maxCoeff(), 1e-10);
      EXPECT_LT((v.transpose() * gf * h).cwiseAbs().maxCoeff(), 1e-10);
    }
  }
}

TEST(WarpMetric, WarpedProjectionStaysRiemannianSubmersion) {
  const WarpSpec wave{[](const Vec& y) { return 0.5 + 0.25 * std::sin(y[0]); }, 0.75};
  for (const auto& s : {product_torus_submersion(), hopf_submersion()}) {
    const SubmersionModel sf = warped_submersion(s, wave);
    EXPECT_TRUE(check_submersion(sf, interior_samples(s.total(), 10, 2)).ok);
  }
}

TEST(WarpMetric, NonPositiveWarpIsRejected) {
  const auto s = product_torus_submersion();
  const WarpSpec bad{[](const Vec& y) { return std::sin(y[0]); }, 1.0};
  const ManifoldModel w = warp_metric(s, bad);
  EXPECT_EQ(code_of([&] { w.metric_at(v2(4.0, 1.0)); }), ErrorCode::NonPositiveWarp);
  EXPECT_EQ(code_of([&] { bad.validate({v1(4.0)}); }), ErrorCode::NonPositiveWarp);
}
