#ifndef SUBLAB_SCENARIOS_HPP
#define SUBLAB_SCENARIOS_HPP

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "sublab/config.hpp"
#include "sublab/lattice.hpp"
#include "sublab/models.hpp"
#include "sublab/submersion.hpp"

namespace sublab {

/// Non-periodic lattice axes stay this far inside the chart so that every
/// node supports a Christoffel stencil.
inline constexpr double kLatticeInset = 1e-4;

/// Product projection T^2 -> S^1, (x, y) -> x.
inline SubmersionModel product_torus_submersion() {
  return SubmersionModel(
      models::flat_torus(2), models::circle(), [](const Vec& x) { return Vec::Constant(1, x[0]); },
      [](const Vec&) {
        Mat j(1, 2);
        j << 1.0, 0.0;
        return j;
      });
}

/// Product projection S^2 x S^1 -> S^2.
inline SubmersionModel product_sphere_circle_submersion() {
  return SubmersionModel(
      models::sphere_times_circle(), models::round_sphere(1.0), [](const Vec& x) { return Vec(x.head(2)); },
      [](const Vec&) {
        Mat j = Mat::Zero(2, 3);
        j(0, 0) = 1.0;
        j(1, 1) = 1.0;
        return j;
      });
}

/// Hopf fibration S^3(1) -> S^2(1/2): (eta, xi1, xi2) -> (2 eta, xi1 - xi2).
inline SubmersionModel hopf_submersion() {
  return SubmersionModel(
      models::hopf_sphere(models::kPoleMargin), models::round_sphere(0.5, 2.0 * models::kPoleMargin),
      [](const Vec& x) {
        Vec y(2);
        y << 2.0 * x[0], x[1] - x[2];
        return y;
      },
      [](const Vec&) {
        Mat j = Mat::Zero(2, 3);
        j(0, 0) = 2.0;
        j(1, 1) = 1.0;
        j(1, 2) = -1.0;
        return j;
      });
}

/// Identity T^2 -> T^2 (no vertical directions).
inline SubmersionModel identity_submersion() {
  return SubmersionModel(
      models::flat_torus(2), models::flat_torus(2), [](const Vec& x) { return x; },
      [](const Vec&) { return Mat::Identity(2, 2); });
}

struct Scenario {
  ScenarioId id;
  SubmersionModel submersion;
  bool integrable = true;
  Lattice total_lattice;
  Lattice base_lattice;
};

/// Builds a catalog scenario with lattices chosen so that every total node
/// projects exactly onto a base node.
inline Scenario make_scenario(ScenarioId id, int base_resolution, int fiber_resolution) {
  switch (id) {
    case ScenarioId::ProductTorus: {
      auto s = product_torus_submersion();
      Lattice total(s.total(), {base_resolution, fiber_resolution});
      Lattice base(s.base(), {base_resolution});
      return Scenario{id, std::move(s), true, std::move(total), std::move(base)};
    }
    case ScenarioId::ProductSphereCircle: {
      auto s = product_sphere_circle_submersion();
      Lattice total(s.total(), {base_resolution, base_resolution, fiber_resolution}, kLatticeInset);
      Lattice base(s.base(), {base_resolution, base_resolution}, kLatticeInset);
      return Scenario{id, std::move(s), true, std::move(total), std::move(base)};
    }
    case ScenarioId::Hopf: {
      auto s = hopf_submersion();
      Lattice total(s.total(), {base_resolution, fiber_resolution, fiber_resolution}, kLatticeInset);
      Lattice base(s.base(), {base_resolution, fiber_resolution}, 2.0 * kLatticeInset);
      return Scenario{id, std::move(s), false, std::move(total), std::move(base)};
    }
    case ScenarioId::Identity: {
      auto s = identity_submersion();
      Lattice total(s.total(), {base_resolution, base_resolution});
      Lattice base(s.base(), {base_resolution, base_resolution});
      return Scenario{id, std::move(s), true, std::move(total), std::move(base)};
    }
  }
  throw Error(ErrorCode::InvalidScenario, "unknown scenario");
}

/// Deterministic random points in the chart, kept a tenth of the range away
/// from non-periodic bounds.
inline std::vector<Vec> interior_samples(const ManifoldModel& m, std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Vec> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    Vec x(m.dim());
    for (int i = 0; i < m.dim(); ++i) {
      const Axis& a = m.axis(i);
      const double margin = a.periodic ? 0.0 : 0.1 * (a.hi - a.lo);
      std::uniform_real_distribution<double> u(a.lo + margin, a.hi - margin);
      x[i] = u(rng);
    }
    out.push_back(x);
  }
  return out;
}

/// Builds the scenario named by cfg and checks the submersion invariants on
/// interior samples. Throws InvalidScenario if they fail.
inline Scenario build_scenario(const ScenarioConfig& cfg) {
  cfg.validate();
  Scenario sc = make_scenario(cfg.scenario_id, cfg.base_resolution, cfg.fiber_resolution);
  const auto samples = interior_samples(sc.submersion.total(), 8, cfg.seed);
  const SubmersionCheck check = check_submersion(sc.submersion, samples);
  if (!check.ok) throw Error(ErrorCode::InvalidScenario, "scenario is not a Riemannian submersion at samples");
  return sc;
}

}  // namespace sublab

#endif  // SUBLAB_SCENARIOS_HPP
