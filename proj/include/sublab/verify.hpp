#ifndef SUBLAB_VERIFY_HPP
#define SUBLAB_VERIFY_HPP

#include <cmath>
#include <ostream>
#include <string>
#include <vector>

#include "sublab/bundle_space.hpp"
#include "sublab/claims.hpp"
#include "sublab/collapse.hpp"
#include "sublab/nets.hpp"
#include "sublab/scenarios.hpp"

namespace sublab {

struct VerifyOptions {
  PQParams pq{1.0, 1.0};
  double tol = 1e-5;
  /// Claims 1-2 on non-integrable scenarios are judged at this multiple of tol.
  double curved_tol_factor = 10.0;
  double lemma1_threshold = 1e-4;
  double warp_threshold = 1e-4;
  double identity_warp_threshold = 1e-10;
  double net_slack = 1.05;
  std::vector<double> net_eps{0.2, 0.4, 0.8};
  int sample_count = 6;
  int lattice_resolution = 16;  ///< per axis for the net checks (capped for 3-dimensional totals)
  std::uint64_t seed = 1;
};

struct CheckLine {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool pass = true;
  std::string note;
};

struct VerifyReport {
  std::string scenario;
  std::vector<CheckLine> checks;

  bool pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
  const CheckLine* find(const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }
};

inline void print_report(std::ostream& out, const VerifyReport& report) {
  out << "scenario " << report.scenario << '\n';
  for (const auto& c : report.checks) {
    out << (c.pass ? "  PASS " : "  FAIL ") << c.name << "  value=" << format_double(c.value)
        << "  threshold=" << format_double(c.threshold);
    if (!c.note.empty()) out << "  " << c.note;
    out << '\n';
  }
  out << (report.pass() ? "ALL PASS" : "SOME CHECKS FAILED") << '\n';
}

namespace detail {

inline void add_below(VerifyReport& r, std::string name, double value, double threshold, std::string note = {}) {
  r.checks.push_back(CheckLine{std::move(name), value, threshold, value < threshold, std::move(note)});
}

inline void add_at_most(VerifyReport& r, std::string name, double value, double threshold, std::string note = {}) {
  r.checks.push_back(CheckLine{std::move(name), value, threshold, value <= threshold, std::move(note)});
}

inline void net_checks(VerifyReport& r, const Scenario& sc, const VerifyOptions& opt) {
  const int res = sc.submersion.total().dim() > 2 ? std::min(opt.lattice_resolution, 12) : opt.lattice_resolution;
  const Scenario small = make_scenario(sc.id, res, res);
  const SubmersionModel& s = small.submersion;
  const SampledSpace total = manifold_space(s.total(), small.total_lattice);
  const SampledSpace base = manifold_space(s.base(), small.base_lattice);
  const std::vector<std::size_t> image = projection_image(s, small.total_lattice, small.base_lattice);
  for (double eps : opt.net_eps) {
    const MergedNet merged = build_merged_net(total.space, base.space, image, eps);
    add_at_most(r, "net.merged_radius[eps=" + format_double(eps) + "]", merged.merged.covering_radius,
                2.0 * eps * opt.net_slack);
    const NetReport upstairs = eps_net(total.space, eps);
    const NetReport projected = project_net(upstairs, image, base.space);
    add_at_most(r, "net.projected_radius[eps=" + format_double(eps) + "]", projected.covering_radius,
                eps * opt.net_slack);
  }
}

}  // namespace detail

/// Runs the invariant suite on one catalog scenario.
inline VerifyReport verify_all(ScenarioId id, const VerifyOptions& opt = {}) {
  Scenario sc = make_scenario(id, 8, 8);
  const SubmersionModel& s = sc.submersion;
  VerifyReport r;
  r.scenario = to_string(id);

  const std::vector<Vec> points = interior_samples(s.total(), static_cast<std::size_t>(opt.sample_count), opt.seed);
  const SubmersionCheck sub = check_submersion(s, points);
  detail::add_below(r, "submersion.riemannian", sub.max_riemannian_deviation, 1e-6);
  detail::add_below(r, "submersion.frame_gram", sub.max_frame_error, 1e-9);

  const Lemma1Residuals l1 = lemma1_residuals(s, points);
  detail::add_below(r, "lemma1.r_i", l1.r_i, opt.lemma1_threshold);
  detail::add_below(r, "lemma1.r_ii", l1.r_ii, opt.lemma1_threshold);

  const std::vector<BundlePoint> bundle = unit_bundle_samples(s, points);
  const double claim_tol = sc.integrable ? opt.tol : opt.curved_tol_factor * opt.tol;
  const ClaimReport c1 = verify_claim1(s, opt.pq, bundle, claim_tol);
  detail::add_below(r, "claim1.h_prime_isometry", c1.max_deviation, claim_tol);
  const Claim2Report c2 = verify_claim2(s, opt.pq, bundle, claim_tol);
  detail::add_below(r, "claim2.length", c2.max_length_deviation, claim_tol);
  detail::add_below(r, "claim2.vertical_part", c2.max_vertical_part, claim_tol);

  const Prop1Report p1 = verify_claim3_and_prop1(s, opt.pq, bundle, opt.tol);
  const SubmersionVerdict expected = sc.integrable ? SubmersionVerdict::Submersion : SubmersionVerdict::NotSubmersion;
  const std::string verdict_note = "verdict=" + std::string(to_string(p1.verdict));
  r.checks.push_back(CheckLine{"prop1.integrability_defect", p1.defect, opt.tol, p1.verdict == expected, verdict_note});
  r.checks.push_back(CheckLine{"prop1.v_image_norm", p1.v_image_norm, opt.tol, p1.verdict == expected, verdict_note});

  if (sc.integrable) {
    const WarpSpec unit{[](const Vec&) { return 1.0; }, 1.0};
    const WarpedClaimsReport w1 = verify_warped_claims(s, unit, opt.pq, bundle, opt.identity_warp_threshold);
    const double w1_worst = std::max({w1.horizontal_deviation, w1.vertical_ratio_deviation,
                                      w1.vertical_cross_deviation, w1.frame_gap});
    detail::add_below(r, "warp.identity", w1_worst, opt.identity_warp_threshold);

    const WarpSpec half{[](const Vec&) { return 0.5; }, 0.5};
    const WarpedClaimsReport wh = verify_warped_claims(s, half, opt.pq, bundle, opt.warp_threshold);
    detail::add_below(r, "warp.constant.horizontal", wh.horizontal_deviation, opt.warp_threshold);
    detail::add_below(r, "warp.constant.v_ratio", wh.vertical_ratio_deviation, opt.warp_threshold);
    detail::add_below(r, "warp.constant.frames", wh.frame_gap, opt.warp_threshold);

    const WarpSpec wave{[](const Vec& x) { return 0.5 + 0.25 * std::sin(x[0]); }, 0.75};
    const WarpedClaimsReport ws = verify_warped_claims(s, wave, opt.pq, bundle, opt.warp_threshold);
    detail::add_below(r, "warp.separable.horizontal", ws.horizontal_deviation, opt.warp_threshold);
    detail::add_below(r, "warp.separable.v_ratio", ws.vertical_ratio_deviation, opt.warp_threshold);
    detail::add_below(r, "warp.separable.frames", ws.frame_gap, opt.warp_threshold);
  }

  detail::net_checks(r, sc, opt);
  return r;
}

}  // namespace sublab

#endif  // SUBLAB_VERIFY_HPP
