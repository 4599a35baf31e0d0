#ifndef SUBLAB_MODELS_HPP
#define SUBLAB_MODELS_HPP

#include <cmath>
#include <numbers>

#include "sublab/manifold.hpp"

namespace sublab::models {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Chart margin keeping sphere-type charts away from their polar singularities.
inline constexpr double kPoleMargin = 1e-2;

/// Flat torus R^d / (2 pi Z)^d.
inline ManifoldModel flat_torus(int dim = 2) {
  std::vector<Axis> axes(static_cast<std::size_t>(dim), Axis{0.0, kTwoPi, true});
  return ManifoldModel("flat-torus", std::move(axes), [dim](const Vec&) { return Mat::Identity(dim, dim); });
}

/// Circle of circumference 2 pi r.
inline ManifoldModel circle(double radius = 1.0) {
  return ManifoldModel("circle", {Axis{0.0, kTwoPi, true}},
                       [radius](const Vec&) { return Mat::Constant(1, 1, radius * radius); });
}

/// Euclidean segment [lo, hi].
inline ManifoldModel interval(double lo = 0.0, double hi = 1.0) {
  return ManifoldModel("interval", {Axis{lo, hi, false}}, [](const Vec&) { return Mat::Identity(1, 1); });
}

/// Round sphere of the given radius in (theta, phi), theta restricted to
/// [margin, pi - margin].
inline ManifoldModel round_sphere(double radius = 1.0, double margin = kPoleMargin) {
  const double r2 = radius * radius;
  return ManifoldModel(
      "round-sphere", {Axis{margin, std::numbers::pi - margin, false}, Axis{0.0, kTwoPi, true}},
      [r2](const Vec& x) {
        Mat g = Mat::Zero(2, 2);
        const double s = std::sin(x[0]);
        g(0, 0) = r2;
        g(1, 1) = r2 * s * s;
        return g;
      },
      [radius](const Vec& x) {
        Vec p(3);
        p << radius * std::sin(x[0]) * std::cos(x[1]), radius * std::sin(x[0]) * std::sin(x[1]),
            radius * std::cos(x[0]);
        return p;
      });
}

/// Riemannian product S^2 x S^1 in (theta, phi, psi).
inline ManifoldModel sphere_times_circle(double margin = kPoleMargin) {
  return ManifoldModel("sphere-x-circle",
                       {Axis{margin, std::numbers::pi - margin, false}, Axis{0.0, kTwoPi, true},
                        Axis{0.0, kTwoPi, true}},
                       [](const Vec& x) {
                         Mat g = Mat::Identity(3, 3);
                         const double s = std::sin(x[0]);
                         g(1, 1) = s * s;
                         return g;
                       });
}

/// Unit 3-sphere in Hopf coordinates (eta, xi1, xi2):
/// (e^{i xi1} sin eta, e^{i xi2} cos eta), metric d eta^2 + sin^2 eta d xi1^2 + cos^2 eta d xi2^2.
inline ManifoldModel hopf_sphere(double margin = kPoleMargin) {
  return ManifoldModel(
      "hopf-s3",
      {Axis{margin, 0.5 * std::numbers::pi - margin, false}, Axis{0.0, kTwoPi, true}, Axis{0.0, kTwoPi, true}},
      [](const Vec& x) {
        Mat g = Mat::Zero(3, 3);
        const double s = std::sin(x[0]);
        const double c = std::cos(x[0]);
        g(0, 0) = 1.0;
        g(1, 1) = s * s;
        g(2, 2) = c * c;
        return g;
      },
      [](const Vec& x) {
        Vec p(4);
        p << std::sin(x[0]) * std::cos(x[1]), std::sin(x[0]) * std::sin(x[1]), std::cos(x[0]) * std::cos(x[2]),
            std::cos(x[0]) * std::sin(x[2]);
        return p;
      });
}

}  // namespace sublab::models

#endif  // SUBLAB_MODELS_HPP
