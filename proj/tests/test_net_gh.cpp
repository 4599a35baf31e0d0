#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "sublab/bundle_space.hpp"
#include "sublab/gromov_hausdorff.hpp"
#include "sublab/nets.hpp"
#include "sublab/scenarios.hpp"

using namespace sublab;
using std::numbers::pi;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an exception";
  return ErrorCode::InvalidInput;
}

FiniteMetricSpace line_space(const std::vector<double>& xs) {
  Mat d(static_cast<Eigen::Index>(xs.size()), static_cast<Eigen::Index>(xs.size()));
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = 0; j < xs.size(); ++j)
      d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = std::abs(xs[i] - xs[j]);
  return FiniteMetricSpace::from_matrix(d);
}

FiniteMetricSpace circle_space(int n) {
  Mat d(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const int k = std::abs(i - j);
      d(i, j) = std::min(k, n - k) * 2 * pi / n;
    }
  return FiniteMetricSpace::from_matrix(d);
}

FiniteMetricSpace singleton() { return FiniteMetricSpace::from_matrix(Mat::Zero(1, 1)); }

/// Random Euclidean point cloud in the plane, rounded to a coarse grid so that
/// distance coincidences and ties actually occur.
FiniteMetricSpace random_space(std::mt19937_64& rng, int n) {
  std::uniform_int_distribution<int> u(0, 4);
  std::vector<std::pair<double, double>> pts;
  for (int i = 0; i < n; ++i) pts.emplace_back(u(rng), u(rng));
  Mat d(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      d(i, j) = std::hypot(pts[static_cast<std::size_t>(i)].first - pts[static_cast<std::size_t>(j)].first,
                           pts[static_cast<std::size_t>(i)].second - pts[static_cast<std::size_t>(j)].second);
  return FiniteMetricSpace::from_matrix(d);
}

/// Exhaustive oracle: every subset of the pair grid that is a correspondence.
double gh_by_subsets(const FiniteMetricSpace& x, const FiniteMetricSpace& y) {
  const std::size_t nx = x.size();
  const std::size_t ny = y.size();
  const std::size_t cells = nx * ny;
  double best = kInfinity;
  for (std::uint32_t mask = 1; mask < (1u << cells); ++mask) {
    Correspondence r;
    for (std::size_t c = 0; c < cells; ++c)
      if (mask & (1u << c)) r.pairs.emplace_back(c / ny, c % ny);
    std::vector<char> hx(nx, 0), hy(ny, 0);
    for (const auto& [i, j] : r.pairs) hx[i] = hy[j] = 1;
    if (std::count(hx.begin(), hx.end(), 0) || std::count(hy.begin(), hy.end(), 0)) continue;
    double worst = 0.0;
    for (const auto& [i, j] : r.pairs)
      for (const auto& [a, b] : r.pairs) worst = std::max(worst, std::abs(x(i, a) - y(j, b)));
    best = std::min(best, 0.5 * worst);
  }
  return best;
}

}  // namespace

TEST(FiniteMetricSpace, RejectsInvalidMatrices) {
  Mat asym = Mat::Zero(2, 2);
  asym(0, 1) = 1.0;
  asym(1, 0) = 1.1;
  EXPECT_EQ(code_of([&] { FiniteMetricSpace::from_matrix(asym); }), ErrorCode::InvalidInput);
  Mat diag = Mat::Identity(2, 2);
  EXPECT_EQ(code_of([&] { FiniteMetricSpace::from_matrix(diag); }), ErrorCode::InvalidInput);
  EXPECT_EQ(code_of([&] { FiniteMetricSpace::from_matrix(Mat(0, 0)); }), ErrorCode::InvalidInput);
}

TEST(FiniteMetricSpace, CsvRoundTripIsBitExact) {
  std::mt19937_64 rng(1);
  Mat d = Mat::Zero(3, 3);
  d(0, 1) = d(1, 0) = 0.1 + 0.2;
  d(0, 2) = d(2, 0) = kInfinity;
  d(1, 2) = d(2, 1) = kInfinity;
  const FiniteMetricSpace x({"a", "b", "c"}, d);
  std::stringstream buf;
  write_csv(buf, x);
  const FiniteMetricSpace y = read_csv(buf);
  EXPECT_EQ(y.labels(), x.labels());
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(x(i, j), y(i, j));
  std::stringstream bad("a,b\n0,1\n1,0,3\n");
  EXPECT_EQ(code_of([&] { read_csv(bad); }), ErrorCode::InvalidInput);
  std::stringstream triangle("a,b,c\n0,1,5\n1,0,1\n5,1,0\n");
  EXPECT_EQ(code_of([&] { read_csv(triangle); }), ErrorCode::InvalidInput);
}

TEST(GraphMetric, ShortestPathsAndComponents) {
  WeightedGraph g(4);
  g.add_edge(0, 1, 1.0);
  g.add_edge(1, 2, 2.0);
  g.add_edge(0, 2, 5.0);
  EXPECT_EQ(g.component_count(), 2u);
  const FiniteMetricSpace x = graph_metric_space(g, {"0", "1", "2", "3"});
  EXPECT_EQ(x(0, 2), 3.0);
  EXPECT_TRUE(std::isinf(x(0, 3)));
  EXPECT_EQ(x.diameter(), 3.0);
  EXPECT_EQ(x.triangle_violation(), 0.0);
}

TEST(EpsNet, LineOfFivePoints) {
  const auto x = line_space({0, 0.25, 0.5, 0.75, 1.0});
  const NetReport net = eps_net(x, 0.25);
  EXPECT_LE(net.subset.size(), 3u);
  EXPECT_LE(net.covering_radius, 0.25);
  EXPECT_EQ(net.subset.front(), 0u);
}

TEST(EpsNet, LargeEpsilonGivesSinglePoint) {
  const auto x = line_space({0, 0.25, 0.5, 0.75, 1.0});
  const NetReport net = eps_net(x, 1.0);
  EXPECT_EQ(net.subset, (std::vector<std::size_t>{0}));
  EXPECT_LE(net.covering_radius, 1.0);
}

TEST(EpsNet, CircleNeedsPackingBound) {
  const auto x = circle_space(360);
  const NetReport net = eps_net(x, pi / 4);
  // each point covers an arc of length pi/2, so at least 4 are needed
  EXPECT_GE(net.subset.size(), 4u);
  EXPECT_LE(net.covering_radius, pi / 4);
}

TEST(EpsNet, RadiusMatchesRecomputationAndTiesGoLow) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const auto x = random_space(rng, 12);
    const NetReport net = eps_net(x, 1.5);
    double worst = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      double best = kInfinity;
      for (std::size_t s : net.subset) best = std::min(best, x(i, s));
      worst = std::max(worst, best);
    }
    EXPECT_EQ(net.covering_radius, worst);
    EXPECT_LE(worst, 1.5);
  }
  // every point at distance 1 from 0: the farthest-point tie goes to index 1
  const auto x = line_space({0, 1, -1});
  EXPECT_EQ(eps_net(x, 0.5).subset[1], 1u);
  EXPECT_EQ(code_of([&] { eps_net(x, 0.0); }), ErrorCode::InvalidInput);
}

TEST(FiberNets, MergedFiberNetsOnProductTorus) {
  const Scenario sc = make_scenario(ScenarioId::ProductTorus, 32, 32);
  const SampledSpace total = manifold_space(sc.submersion.total(), sc.total_lattice);
  const SampledSpace base = manifold_space(sc.submersion.base(), sc.base_lattice);
  const auto image = projection_image(sc.submersion, sc.total_lattice, sc.base_lattice);
  for (double eps : {0.2, 0.3, 0.4, 0.8}) {
    const MergedNet m = build_merged_net(total.space, base.space, image, eps);
    EXPECT_LE(m.merged.covering_radius, 2 * eps * 1.05) << eps;
    const NetReport up = eps_net(total.space, eps);
    EXPECT_LE(project_net(up, image, base.space).covering_radius, eps * 1.05) << eps;
  }
  const double diam = total.space.diameter();
  const MergedNet one = build_merged_net(total.space, base.space, image, diam);
  EXPECT_EQ(one.merged.subset.size(), 1u);
  EXPECT_LE(one.merged.covering_radius, 2 * diam);
}

TEST(FiberNets, IdentitySubmersionReducesToBaseNet) {
  const Scenario sc = make_scenario(ScenarioId::Identity, 12, 12);
  const SampledSpace total = manifold_space(sc.submersion.total(), sc.total_lattice);
  const SampledSpace base = manifold_space(sc.submersion.base(), sc.base_lattice);
  const auto image = projection_image(sc.submersion, sc.total_lattice, sc.base_lattice);
  for (std::size_t i = 0; i < image.size(); ++i) EXPECT_EQ(image[i], i);
  auto sorted = [](std::vector<std::size_t> v) {
    std::sort(v.begin(), v.end());
    return v;
  };
  const MergedNet m = build_merged_net(total.space, base.space, image, 0.7);
  EXPECT_EQ(m.merged.subset, sorted(m.base_net.subset));
  EXPECT_LE(m.merged.covering_radius, 0.7);
  const NetReport up = eps_net(total.space, 0.7);
  const NetReport down = project_net(up, image, base.space);
  EXPECT_EQ(down.subset, sorted(up.subset));
  EXPECT_EQ(down.covering_radius, up.covering_radius);
}

TEST(FiberNets, ProjectingEverythingCoversTheBase) {
  const Scenario sc = make_scenario(ScenarioId::ProductTorus, 16, 8);
  const SampledSpace total = manifold_space(sc.submersion.total(), sc.total_lattice);
  const SampledSpace base = manifold_space(sc.submersion.base(), sc.base_lattice);
  const auto image = projection_image(sc.submersion, sc.total_lattice, sc.base_lattice);
  NetReport all;
  for (std::size_t i = 0; i < total.space.size(); ++i) all.subset.push_back(i);
  const NetReport down = project_net(all, image, base.space);
  EXPECT_EQ(down.subset.size(), base.space.size());
  EXPECT_EQ(down.covering_radius, 0.0);
}

TEST(FiberNets, EmptyFiberNetIsRejected) {
  const auto x = line_space({0, 1});
  NetReport base;
  base.subset = {0};
  EXPECT_EQ(code_of([&] { merge_fiber_nets(base, {{}}, x); }), ErrorCode::EmptyFiberNet);
  EXPECT_EQ(code_of([&] { merge_fiber_nets(base, {}, x); }), ErrorCode::EmptyFiberNet);
}

TEST(Distortion, Examples) {
  const auto x = line_space({0, 1, 3});
  EXPECT_EQ(distortion(Correspondence::identity(3), x, x), 0.0);
  const auto two = line_space({0, 2});
  Correspondence r;
  r.pairs = {{0, 0}, {1, 0}};
  EXPECT_EQ(distortion(r, two, singleton()), 2.0);
  EXPECT_EQ(gh_upper(r, two, singleton()), 1.0);
  Correspondence partial;
  partial.pairs = {{0, 0}};
  EXPECT_EQ(code_of([&] { distortion(partial, two, singleton()); }), ErrorCode::NotSurjective);
}

TEST(Distortion, MatchesDoubleLoop) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<std::size_t> pick(0, 3);
  for (int trial = 0; trial < 50; ++trial) {
    const auto x = random_space(rng, 4);
    const auto y = random_space(rng, 4);
    Correspondence r;
    for (std::size_t i = 0; i < 4; ++i) r.pairs.emplace_back(i, pick(rng));
    for (std::size_t j = 0; j < 4; ++j) r.pairs.emplace_back(pick(rng), j);
    double oracle = 0.0;
    for (const auto& [i, j] : r.pairs)
      for (const auto& [a, b] : r.pairs) oracle = std::max(oracle, std::abs(x(i, a) - y(j, b)));
    EXPECT_EQ(distortion(r, x, y), oracle);
  }
}

TEST(GhExact, Examples) {
  const auto x = line_space({0, 1, 3});
  const auto relabeled = line_space({3, 0, 1});
  EXPECT_EQ(gh_exact(x, relabeled), 0.0);
  Mat tri = Mat::Ones(3, 3) - Mat::Identity(3, 3);
  EXPECT_EQ(gh_exact(FiniteMetricSpace::from_matrix(tri), singleton()), 0.5);
  EXPECT_EQ(gh_exact(line_space({0, 1}), line_space({0, 2})), 0.5);
  EXPECT_EQ(code_of([] { gh_exact(circle_space(7), circle_space(6)); }), ErrorCode::TooLarge);
}

TEST(GhExact, AgreesWithSubsetEnumeration) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> size(1, 3);
  for (int trial = 0; trial < 60; ++trial) {
    const auto x = random_space(rng, size(rng));
    const auto y = random_space(rng, size(rng));
    EXPECT_NEAR(gh_exact(x, y), gh_by_subsets(x, y), 1e-12);
  }
}

TEST(GhExact, SingletonSymmetryAndUpperBound) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> size(1, 6);
  std::uniform_int_distribution<std::size_t> pick(0, 5);
  for (int trial = 0; trial < 100; ++trial) {
    const auto x = random_space(rng, size(rng));
    EXPECT_EQ(gh_exact(x, singleton()), x.diameter() / 2);
    EXPECT_EQ(gh_exact(singleton(), x), x.diameter() / 2);
  }
  std::uniform_int_distribution<int> small(1, 5);
  for (int trial = 0; trial < 100; ++trial) {
    const int nx = small(rng);
    const int ny = std::min(small(rng), 36 / nx);
    const auto x = random_space(rng, nx);
    const auto y = random_space(rng, ny);
    const double exact = gh_exact(x, y);
    EXPECT_EQ(exact, gh_exact(y, x));
    Correspondence r;
    for (int i = 0; i < nx; ++i) r.pairs.emplace_back(i, pick(rng) % static_cast<std::size_t>(ny));
    for (int j = 0; j < ny; ++j) r.pairs.emplace_back(pick(rng) % static_cast<std::size_t>(nx), j);
    EXPECT_GE(gh_upper(r, x, y), exact);
  }
}

TEST(ProjectionCorrespondence, IdentityAndUncovered) {
  const auto x = line_space({0, 1, 2});
  const Correspondence r = projection_correspondence({0, 1, 2}, 3);
  EXPECT_EQ(distortion(r, x, x), 0.0);
  EXPECT_EQ(code_of([] { projection_correspondence({0, 0, 2}, 3); }), ErrorCode::UncoveredTarget);
}

TEST(ProjectionCorrespondence, WarpedTorusDistortionIsFiberDiameter) {
  const Scenario sc = make_scenario(ScenarioId::ProductTorus, 32, 32);
  const SampledSpace base = manifold_space(sc.submersion.base(), sc.base_lattice);
  const auto image = projection_image(sc.submersion, sc.total_lattice, sc.base_lattice);
  const Correspondence r = projection_correspondence(image, base.space.size());
  const double mesh = 2 * pi / 32;
  for (double c : {1.0, 0.5, 0.25, 0.1}) {
    const SubmersionModel warped = warped_submersion(sc.submersion, WarpSpec{[c](const Vec&) { return c; }, 1.0});
    const SampledSpace total = manifold_space(warped.total(), sc.total_lattice);
    EXPECT_LE(distortion(r, total.space, base.space), pi * c + mesh) << c;
  }
}

TEST(GhBounds, BracketTheExactValue) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> size(1, 6);
  for (int trial = 0; trial < 100; ++trial) {
    const auto x = random_space(rng, size(rng));
    const auto y = random_space(rng, size(rng));
    const GhBounds b = gh_bounds(x, y);
    const double exact = gh_exact(x, y);
    EXPECT_LE(b.lower, exact + 1e-12);
    EXPECT_GE(b.upper, exact - 1e-12);
  }
  const auto c = circle_space(12);
  EXPECT_EQ(gh_bounds(c, c).upper, 0.0);
  EXPECT_EQ(gh_bounds(c, singleton()).upper, c.diameter() / 2);
}
