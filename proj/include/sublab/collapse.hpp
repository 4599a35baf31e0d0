#ifndef SUBLAB_COLLAPSE_HPP
#define SUBLAB_COLLAPSE_HPP

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "sublab/bundle_space.hpp"
#include "sublab/config.hpp"
#include "sublab/gromov_hausdorff.hpp"
#include "sublab/nets.hpp"
#include "sublab/scenarios.hpp"

namespace sublab {

/// Warping function f_n of the configured family.
inline WarpSpec warp_for(const ScenarioConfig& cfg, int n) {
  const double scale = std::pow(static_cast<double>(n), -cfg.warp_params.back());
  const double bound = cfg.warp_upper_bound();
  if (cfg.warp_kind == WarpKind::ConstantSequence) {
    const double c = cfg.warp_params[0] * scale;
    return WarpSpec{[c](const Vec&) { return c; }, bound};
  }
  const double a = cfg.warp_params[0];
  const double b = cfg.warp_params[1];
  return WarpSpec{[a, b, scale](const Vec& x) { return (a + b * std::sin(x[0])) * scale; }, bound};
}

/// Smallest positive distance to another sample, maximized over samples.
inline double mesh_size(const FiniteMetricSpace& x) {
  double mesh = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double nearest = kInfinity;
    for (std::size_t j = 0; j < x.size(); ++j)
      if (j != i) nearest = std::min(nearest, x(i, j));
    if (std::isfinite(nearest)) mesh = std::max(mesh, nearest);
  }
  return mesh;
}

inline constexpr int kEpsilonGridSize = 16;

/// Geometric grid of 16 values from the mesh to the diameter.
inline std::vector<double> epsilon_grid(const FiniteMetricSpace& base) {
  const double lo = mesh_size(base);
  const double hi = base.diameter();
  std::vector<double> grid(kEpsilonGridSize);
  for (int k = 0; k < kEpsilonGridSize; ++k) {
    grid[static_cast<std::size_t>(k)] = k == kEpsilonGridSize - 1 ? hi : lo * std::pow(hi / lo, static_cast<double>(k) / (kEpsilonGridSize - 1));
  }
  return grid;
}

/// Looks for an eps-net of the sampled base whose points all satisfy f < eps.
/// Greedy: repeatedly take the sample farthest from the current net and add
/// the admissible point nearest to it. This succeeds exactly when the
/// admissible points cover the base within eps.
inline bool admissible_net_exists(const FiniteMetricSpace& base, const std::vector<double>& f, double eps) {
  std::vector<std::size_t> admissible;
  for (std::size_t i = 0; i < base.size(); ++i)
    if (f[i] < eps) admissible.push_back(i);
  if (admissible.empty()) return false;
  std::vector<double> nearest(base.size(), kInfinity);
  std::vector<char> chosen(base.size(), 0);
  while (true) {
    std::size_t far = 0;
    for (std::size_t i = 1; i < base.size(); ++i)
      if (nearest[i] > nearest[far]) far = i;
    if (nearest[far] <= eps) return true;
    std::size_t pick = admissible.front();
    for (std::size_t c : admissible)
      if (base(far, c) < base(far, pick)) pick = c;
    if (base(far, pick) > eps || chosen[pick]) return false;
    chosen[pick] = 1;
    for (std::size_t i = 0; i < base.size(); ++i) nearest[i] = std::min(nearest[i], base(i, pick));
  }
}

/// Smallest grid eps admitting a net on which f_n < eps, or +inf.
inline double criterion_check(const FiniteMetricSpace& base, const std::vector<double>& f,
                              const std::vector<double>& grid) {
  for (double eps : grid)
    if (admissible_net_exists(base, f, eps)) return eps;
  return kInfinity;
}

struct CollapseRecord {
  int n = 0;
  double sup_f = 0.0;
  double gh_total_base = 0.0;
  double gh_bundle_sm = 0.0;
  double criterion_eps = 0.0;
};

struct CollapseResult {
  std::vector<CollapseRecord> records;
  double mesh = 0.0;               ///< base mesh size (first epsilon-grid value)
  std::vector<double> epsilon_grid;

  /// The run ends with criterion_eps on the mesh floor.
  bool criterion_at_floor() const {
    return !records.empty() && records.back().criterion_eps == epsilon_grid.front();
  }
  /// The run ends with the total-vs-base GH bound at or below one mesh step.
  bool gh_at_floor() const { return !records.empty() && records.back().gh_total_base <= mesh; }
};

/// Warped collapse experiment: for each n, compares (M~, g~_{f_n}) with M and
/// the unit horizontal bundle with SM through the projection correspondences.
inline CollapseResult run_collapse(const ScenarioConfig& cfg) {
  cfg.validate();
  Scenario sc = build_scenario(cfg);
  if (!sc.integrable) {
    throw Error(ErrorCode::IntegrabilityRequired,
                to_string(cfg.scenario_id) + " has a non-integrable horizontal distribution");
  }
  const SubmersionModel& s = sc.submersion;

  const SampledSpace base = manifold_space(s.base(), sc.base_lattice);
  const SampledSpace sphere_bundle =
      unit_bundle_space(VectorBundle::tangent(s.base()), cfg.pq, sc.base_lattice, cfg.sphere_fiber_resolution);
  const std::vector<std::size_t> total_image = projection_image(s, sc.total_lattice, sc.base_lattice);
  const Correspondence total_corr = projection_correspondence(total_image, base.space.size());

  CollapseResult result;
  result.mesh = mesh_size(base.space);
  result.epsilon_grid = epsilon_grid(base.space);

  for (int n : cfg.n_list) {
    const WarpSpec warp = warp_for(cfg, n);
    warp.validate(sc.base_lattice.points());
    const SubmersionModel warped = warped_submersion(s, warp);

    const SampledSpace total = manifold_space(warped.total(), sc.total_lattice);
    const SampledSpace bundle =
        unit_bundle_space(VectorBundle::horizontal(warped), cfg.pq, sc.total_lattice, cfg.sphere_fiber_resolution);
    const std::vector<std::size_t> bundle_image =
        bundle_projection_image(warped, sc.total_lattice, bundle, sc.base_lattice, sphere_bundle);
    const Correspondence bundle_corr = projection_correspondence(bundle_image, sphere_bundle.space.size());

    std::vector<double> f(sc.base_lattice.size());
    double sup_f = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
      f[i] = warp(sc.base_lattice.point(i));
      sup_f = std::max(sup_f, f[i]);
    }

    CollapseRecord rec;
    rec.n = n;
    rec.sup_f = sup_f;
    rec.gh_total_base = gh_upper(total_corr, total.space, base.space);
    rec.gh_bundle_sm = gh_upper(bundle_corr, bundle.space, sphere_bundle.space);
    rec.criterion_eps = criterion_check(base.space, f, result.epsilon_grid);
    result.records.push_back(rec);
  }
  return result;
}

inline constexpr const char* kCollapseCsvHeader = "n,sup_f,gh_total_base,gh_bundle_sm,criterion_eps";

inline void write_collapse_csv(std::ostream& out, const std::vector<CollapseRecord>& records) {
  out << kCollapseCsvHeader << '\n';
  for (const auto& r : records) {
    out << r.n << ',' << format_double(r.sup_f) << ',' << format_double(r.gh_total_base) << ','
        << format_double(r.gh_bundle_sm) << ',' << format_double(r.criterion_eps) << '\n';
  }
}

inline std::string collapse_csv(const std::vector<CollapseRecord>& records) {
  std::ostringstream out;
  write_collapse_csv(out, records);
  return out.str();
}

/// True when the sequence never rises by more than `jitter` (relative).
inline bool weakly_decreasing(const std::vector<double>& values, double jitter) {
  for (std::size_t i = 1; i < values.size(); ++i)
    if (values[i] > values[i - 1] * (1.0 + jitter)) return false;
  return true;
}

}  // namespace sublab

#endif  // SUBLAB_COLLAPSE_HPP
