#ifndef SUBLAB_CLAIMS_HPP
#define SUBLAB_CLAIMS_HPP

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "sublab/bundle.hpp"
#include "sublab/submersion.hpp"

namespace sublab {

/// Unit horizontal vectors at each sample point: +-e for b = 1, otherwise
/// `per_point` directions cos(t) e1 + sin(t) e2 spread around the circle
/// spanned by the first two frame vectors.
inline std::vector<BundlePoint> unit_bundle_samples(const SubmersionModel& s, const std::vector<Vec>& points,
                                                    int per_point = 3) {
  std::vector<BundlePoint> out;
  for (const Vec& p : points) {
    const Vec x = s.total().wrap(p);
    const Mat frame = s.horizontal_space(x);
    if (frame.cols() == 1) {
      out.push_back({x, frame.col(0)});
      out.push_back({x, -frame.col(0)});
      continue;
    }
    for (int k = 0; k < per_point; ++k) {
      const double t = 0.3 + 2.0 * std::numbers::pi * k / per_point;
      out.push_back({x, std::cos(t) * frame.col(0) + std::sin(t) * frame.col(1)});
    }
  }
  return out;
}

struct ClaimReport {
  double max_deviation = 0.0;
  double tolerance = 0.0;
  bool pass = true;
};

/// P~_* restricted to H' preserves h_{p,q}-lengths. Reports the worst relative
/// deviation |h(P~_* A, P~_* A) - h~(A, A)| / h~(A, A).
inline ClaimReport verify_claim1(const SubmersionModel& s, const PQParams& pq, const std::vector<BundlePoint>& samples,
                                 double tol) {
  const VectorBundle upstairs = VectorBundle::horizontal(s);
  const VectorBundle downstairs = VectorBundle::tangent(s.base());
  ClaimReport out{0.0, tol, true};
  for (const BundlePoint& xi : samples) {
    const SplitFrames frames = split_subbundles(s, xi);
    for (const BundleTangent& a : frames.fiber_sphere) {
      const double up = pq_metric(upstairs, pq, a.at, a, a);
      const BundleTangent pa = push_tangent(s, a);
      const double down = pq_metric(downstairs, pq, pa.at, pa, pa);
      out.max_deviation = std::max(out.max_deviation, std::abs(down - up) / up);
    }
  }
  out.pass = out.max_deviation < tol;
  return out;
}

struct Claim2Report {
  double max_length_deviation = 0.0;  ///< | |pi_* P~_* w^h|_g - |w^h|_h~ |
  double max_vertical_part = 0.0;     ///< | K^nabla(P~_* w^h) |_g
  double tolerance = 0.0;
  bool pass = true;
};

/// P~_* maps H'' isometrically into the horizontal space of SM.
inline Claim2Report verify_claim2(const SubmersionModel& s, const PQParams& pq, const std::vector<BundlePoint>& samples,
                                  double tol) {
  const VectorBundle upstairs = VectorBundle::horizontal(s);
  const VectorBundle downstairs = VectorBundle::tangent(s.base());
  Claim2Report out;
  out.tolerance = tol;
  for (const BundlePoint& xi : samples) {
    const SplitFrames frames = split_subbundles(s, xi);
    for (const BundleTangent& a : frames.base_lift) {
      const double up = pq_norm(upstairs, pq, a);
      const BundleTangent pa = push_tangent(s, a);
      const Mat gb = s.base().metric_at(pa.at.base);
      const double down = std::sqrt(pa.dbase.dot(gb * pa.dbase));
      const Vec k = connection_map(downstairs, pa);
      out.max_length_deviation = std::max(out.max_length_deviation, std::abs(down - up));
      out.max_vertical_part = std::max(out.max_vertical_part, std::sqrt(k.dot(gb * k)));
    }
  }
  out.pass = out.max_length_deviation < tol && out.max_vertical_part < tol;
  return out;
}

enum class SubmersionVerdict { Submersion, NotSubmersion, Inconclusive };

constexpr std::string_view to_string(SubmersionVerdict v) {
  switch (v) {
    case SubmersionVerdict::Submersion: return "SUBMERSION";
    case SubmersionVerdict::NotSubmersion: return "NOT_SUBMERSION";
    case SubmersionVerdict::Inconclusive: return "INCONCLUSIVE";
  }
  return "INCONCLUSIVE";
}

struct Prop1Report {
  double defect = 0.0;         ///< max integrability defect over the sample base points
  double v_image_norm = 0.0;   ///< max |P~_* W|_h over V-frame vectors W
  double tolerance = 0.0;
  SubmersionVerdict verdict = SubmersionVerdict::Inconclusive;
};

/// P~ is a Riemannian submersion exactly when H^P is integrable; both sides
/// are measured and must agree. A factor 10 band separates the two verdicts.
inline Prop1Report verify_claim3_and_prop1(const SubmersionModel& s, const PQParams& pq,
                                           const std::vector<BundlePoint>& samples, double tol) {
  const VectorBundle downstairs = VectorBundle::tangent(s.base());
  Prop1Report out;
  out.tolerance = tol;
  std::vector<Vec> seen;
  for (const BundlePoint& xi : samples) {
    const bool fresh = std::none_of(seen.begin(), seen.end(), [&](const Vec& y) {
      return s.total().displacement(y, xi.base).norm() == 0.0;
    });
    if (fresh) {
      seen.push_back(xi.base);
      out.defect = std::max(out.defect, integrability_defect(s, xi.base));
    }
    const SplitFrames frames = split_subbundles(s, xi);
    for (const BundleTangent& w : frames.fiber_transport) {
      const BundleTangent pw = push_tangent(s, w);
      out.v_image_norm = std::max(out.v_image_norm, pq_norm(downstairs, pq, pw));
    }
  }
  if (out.defect < tol && out.v_image_norm < tol) {
    out.verdict = SubmersionVerdict::Submersion;
  } else if (out.defect > 10.0 * tol && out.v_image_norm > 10.0 * tol) {
    out.verdict = SubmersionVerdict::NotSubmersion;
  } else {
    out.verdict = SubmersionVerdict::Inconclusive;
  }
  return out;
}

/// Largest sine of the principal angles between the spans of two lists of
/// tangent vectors, each flattened to (dbase, dfiber).
inline double subspace_gap(const std::vector<BundleTangent>& a, const std::vector<BundleTangent>& b) {
  if (a.size() != b.size()) return 1.0;
  if (a.empty()) return 0.0;
  const Eigen::Index n = a.front().dbase.size() + a.front().dfiber.size();
  auto stack = [n](const std::vector<BundleTangent>& list) {
    Mat m(n, static_cast<Eigen::Index>(list.size()));
    for (std::size_t k = 0; k < list.size(); ++k) {
      m.col(static_cast<Eigen::Index>(k)) << list[k].dbase, list[k].dfiber;
    }
    Eigen::HouseholderQR<Mat> qr(m);
    return Mat(qr.householderQ() * Mat::Identity(n, m.cols()));
  };
  const Mat qa = stack(a);
  const Mat qb = stack(b);
  const Mat residual = qb - qa * (qa.transpose() * qb);
  Eigen::JacobiSVD<Mat> svd(residual);
  return svd.singularValues().maxCoeff();
}

struct WarpedClaimsReport {
  double horizontal_deviation = 0.0;  ///< max |h~_f(A,B) - h~(A,B)| on (H' + H'')
  double vertical_ratio_deviation = 0.0;  ///< max |h~_f(A,A)/h~(A,A) - f_hat^2| on V
  double vertical_cross_deviation = 0.0;  ///< max |h~_f(A,B) - f_hat^2 h~(A,B)| on V x V
  double frame_gap = 0.0;               ///< principal-angle gap of H', H'' under g~ vs g~_f
  double tolerance = 0.0;
  bool pass = true;
  /// (f_hat^2, measured ratio) per V vector, for pointwise inspection.
  std::vector<std::pair<double, double>> ratios;
};

/// Compares the bundle metric of the warped horizontal bundle with the
/// unwarped one: unchanged on H' + H'', scaled by f_hat^2 = (f o pi)^2 on V,
/// and the H', H'' subbundles themselves unchanged.
inline WarpedClaimsReport verify_warped_claims(const SubmersionModel& s, const WarpSpec& warp, const PQParams& pq,
                                               const std::vector<BundlePoint>& samples, double tol) {
  const SubmersionModel sf = warped_submersion(s, warp);
  const VectorBundle plain = VectorBundle::horizontal(s);
  const VectorBundle warped = VectorBundle::horizontal(sf);
  WarpedClaimsReport out;
  out.tolerance = tol;
  for (const BundlePoint& xi : samples) {
    if (integrability_defect(s, xi.base) > 10.0 * tol) {
      throw Error(ErrorCode::IntegrabilityRequired, "warped-bundle claims need an integrable horizontal distribution");
    }
    const SplitFrames frames = split_subbundles(s, xi);
    const SplitFrames frames_f = split_subbundles(sf, xi);

    std::vector<BundleTangent> horizontal = frames.fiber_sphere;
    horizontal.insert(horizontal.end(), frames.base_lift.begin(), frames.base_lift.end());
    for (const auto& a : horizontal) {
      for (const auto& b : horizontal) {
        const double d = pq_metric(warped, pq, xi, a, b) - pq_metric(plain, pq, xi, a, b);
        out.horizontal_deviation = std::max(out.horizontal_deviation, std::abs(d));
      }
    }

    const double f = warp(s.project(xi.base));
    const double f2 = f * f;
    for (const auto& a : frames.fiber_transport) {
      for (const auto& b : frames.fiber_transport) {
        const double hf = pq_metric(warped, pq, xi, a, b);
        const double h = pq_metric(plain, pq, xi, a, b);
        if (&a == &b) {
          const double ratio = hf / h;
          out.ratios.emplace_back(f2, ratio);
          out.vertical_ratio_deviation = std::max(out.vertical_ratio_deviation, std::abs(ratio - f2));
        } else {
          out.vertical_cross_deviation = std::max(out.vertical_cross_deviation, std::abs(hf - f2 * h));
        }
      }
    }

    out.frame_gap = std::max({out.frame_gap, subspace_gap(frames.fiber_sphere, frames_f.fiber_sphere),
                              subspace_gap(frames.base_lift, frames_f.base_lift)});
  }
  out.pass = out.horizontal_deviation < tol && out.vertical_ratio_deviation < tol &&
             out.vertical_cross_deviation < tol && out.frame_gap < tol;
  return out;
}

}  // namespace sublab

#endif  // SUBLAB_CLAIMS_HPP
