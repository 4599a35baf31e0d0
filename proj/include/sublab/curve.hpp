#ifndef SUBLAB_CURVE_HPP
#define SUBLAB_CURVE_HPP

#include <cmath>
#include <vector>

#include "sublab/manifold.hpp"

namespace sublab {

/// Sampled curve: coordinates together with strictly increasing parameters.
/// Samples are stored wrapped; consecutive samples are joined through the
/// minimal periodic displacement.
struct Curve {
  std::vector<Vec> samples;
  std::vector<double> param;

  std::size_t size() const { return samples.size(); }
  const Vec& front() const { return samples.front(); }
  const Vec& back() const { return samples.back(); }
};

/// Throws InvalidInput unless the curve is well formed on M.
inline void validate_curve(const ManifoldModel& m, const Curve& c, double max_step) {
  if (c.samples.empty() || c.samples.size() != c.param.size()) {
    throw Error(ErrorCode::InvalidInput, "curve needs matching, nonempty samples and parameters");
  }
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (!m.contains(c.samples[i])) throw Error(ErrorCode::OutOfDomain, "curve sample outside domain");
    if (i == 0) continue;
    if (!(c.param[i] > c.param[i - 1])) throw Error(ErrorCode::InvalidInput, "curve parameters not increasing");
    if (m.displacement(c.samples[i - 1], c.samples[i]).norm() >= max_step) {
      throw Error(ErrorCode::InvalidInput, "curve step exceeds max-step");
    }
  }
}

/// Builds a curve from a coordinate path t -> x(t) sampled at `count` equally
/// spaced parameters on [t0, t1].
template <typename Path>
Curve sample_path(const ManifoldModel& m, Path&& path, double t0, double t1, int count) {
  Curve c;
  c.samples.reserve(static_cast<std::size_t>(count));
  c.param.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const double t = count == 1 ? t0 : t0 + (t1 - t0) * i / (count - 1);
    c.samples.push_back(m.wrap(path(t)));
    c.param.push_back(t);
  }
  return c;
}

/// Sum of midpoint-rule segment lengths.
inline double curve_length(const ManifoldModel& m, const Curve& c) {
  double total = 0.0;
  for (std::size_t i = 1; i < c.size(); ++i) {
    const Vec d = m.displacement(c.samples[i - 1], c.samples[i]);
    if (d.squaredNorm() == 0.0) continue;
    const Vec mid = m.advance(c.samples[i - 1], 0.5 * d);
    total += std::sqrt(std::max(0.0, d.dot(m.metric_at(mid) * d)));
  }
  return total;
}

struct GeodesicSolution {
  Curve curve;
  std::vector<Vec> velocity;
};

/// Fixed-step classical Runge-Kutta integration of x'' + Gamma(x', x') = 0.
inline GeodesicSolution solve_geodesic(const ManifoldModel& m, const TangentVec& start, double length, int steps) {
  if (steps < 2 && length != 0.0) throw Error(ErrorCode::InvalidInput, "geodesic needs at least 2 steps");
  if (length < 0.0) throw Error(ErrorCode::InvalidInput, "geodesic parameter length must be nonnegative");
  GeodesicSolution sol;
  Vec x = m.wrap(start.base);
  Vec v = start.comp;
  sol.curve.samples.push_back(x);
  sol.curve.param.push_back(0.0);
  sol.velocity.push_back(v);
  if (length == 0.0) return sol;

  const double dt = length / steps;
  auto accel = [&](const Vec& at, const Vec& vel) -> Vec {
    try {
      return -m.christoffel(at).contract(vel, vel);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::OutOfDomain) throw Error(ErrorCode::LeftDomain, e.what());
      throw;
    }
  };
  auto shift = [&](const Vec& at, const Vec& dx) -> Vec {
    try {
      return m.advance(at, dx);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::OutOfDomain) throw Error(ErrorCode::LeftDomain, e.what());
      throw;
    }
  };

  sol.curve.samples.reserve(static_cast<std::size_t>(steps) + 1);
  for (int s = 1; s <= steps; ++s) {
    const Vec k1x = v;
    const Vec k1v = accel(x, v);
    const Vec k2x = v + 0.5 * dt * k1v;
    const Vec k2v = accel(shift(x, 0.5 * dt * k1x), k2x);
    const Vec k3x = v + 0.5 * dt * k2v;
    const Vec k3v = accel(shift(x, 0.5 * dt * k2x), k3x);
    const Vec k4x = v + dt * k3v;
    const Vec k4v = accel(shift(x, dt * k3x), k4x);
    x = shift(x, dt / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x));
    v = v + dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    sol.curve.samples.push_back(x);
    sol.curve.param.push_back(length * s / steps);
    sol.velocity.push_back(v);
  }
  return sol;
}

inline Curve integrate_geodesic(const ManifoldModel& m, const TangentVec& start, double length, int steps) {
  return solve_geodesic(m, start, length, steps).curve;
}

}  // namespace sublab

#endif  // SUBLAB_CURVE_HPP
