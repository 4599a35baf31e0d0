// Horizontal lifts of latitude loops through the Hopf map S^3 -> S^2(1/2).
// Lifting the loop at polar angle theta rotates the fibre circle by
// pi (1 + cos theta) modulo 2 pi.
#include <cmath>
#include <cstdio>
#include <numbers>

#include "sublab/sublab.hpp"

using namespace sublab;
using std::numbers::pi;

int main() {
  const SubmersionModel s = hopf_submersion();
  int bad = 0;
  std::printf("%10s %14s %14s %14s %12s\n", "theta", "fibre_angle", "expected", "off_fibre", "defect");
  for (double theta : {pi / 6, pi / 3, pi / 2, 2 * pi / 3, 5 * pi / 6}) {
    Vec x0(3);
    x0 << theta / 2, 0.0, 0.0;
    const Curve loop = sample_path(
        s.base(),
        [theta](double t) {
          Vec y(2);
          y << theta, t;
          return y;
        },
        0.0, 2 * pi, 801);
    const Curve lifted = horizontal_lift_curve(s, x0, loop);
    const Vec d = s.total().displacement(x0, lifted.back());

    const double angle = d[1];
    const double expected = std::remainder(pi * (1 + std::cos(theta)), 2 * pi);
    const double off_fibre = std::hypot(d[0], std::remainder(d[1] - d[2], 2 * pi));
    const double err = std::abs(std::remainder(angle - expected, 2 * pi));
    std::printf("%10.6f %14.10f %14.10f %14.3e %12.6f\n", theta, angle, expected, off_fibre,
                integrability_defect(s, x0));
    if (err > 1e-6 || off_fibre > 1e-6) ++bad;
  }
  std::printf(bad ? "holonomy mismatch\n" : "holonomy matches\n");
  return bad ? 1 : 0;
}
