#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "sublab/sublab.hpp"

using namespace sublab;

namespace {

int run_verify(const std::string& scenario, double p, double q, int res, double tol) {
  VerifyOptions opt;
  opt.pq = PQParams(p, q);
  opt.lattice_resolution = res;
  opt.tol = tol;
  const VerifyReport report = verify_all(parse_scenario_id(scenario), opt);
  print_report(std::cout, report);
  return report.pass() ? 0 : 1;
}

int run_collapse_cmd(const std::string& config_path, const std::string& out_override) {
  ScenarioConfig cfg = load_config(config_path);
  if (!out_override.empty()) cfg.out_path = out_override;
  const CollapseResult result = run_collapse(cfg);
  std::ofstream out(cfg.out_path, std::ios::binary);
  if (!out) throw Error(ErrorCode::InvalidInput, "cannot write " + cfg.out_path);
  write_collapse_csv(out, result.records);
  std::cout << collapse_csv(result.records);
  std::cout << "mesh " << format_double(result.mesh) << '\n'
            << "criterion_at_floor " << (result.criterion_at_floor() ? "yes" : "no") << '\n'
            << "gh_at_floor " << (result.gh_at_floor() ? "yes" : "no") << '\n'
            << "wrote " << cfg.out_path << '\n';
  return 0;
}

int run_net(const std::string& scenario, double eps, int res) {
  const Scenario sc = make_scenario(parse_scenario_id(scenario), res, res);
  const SampledSpace total = manifold_space(sc.submersion.total(), sc.total_lattice);
  const SampledSpace base = manifold_space(sc.submersion.base(), sc.base_lattice);
  const auto image = projection_image(sc.submersion, sc.total_lattice, sc.base_lattice);

  const NetReport net = eps_net(total.space, eps);
  std::cout << "scenario " << scenario << "  samples " << total.space.size() << "  eps " << format_double(eps) << '\n'
            << "net_size " << net.subset.size() << '\n'
            << "covering_radius " << format_double(net.covering_radius) << '\n';
  const MergedNet merged = build_merged_net(total.space, base.space, image, eps);
  std::cout << "merged_net_size " << merged.merged.subset.size() << '\n'
            << "merged_covering_radius " << format_double(merged.merged.covering_radius) << '\n';
  const NetReport projected = project_net(net, image, base.space);
  std::cout << "projected_net_size " << projected.subset.size() << '\n'
            << "projected_covering_radius " << format_double(projected.covering_radius) << '\n';
  return 0;
}

int run_gh(const std::string& x_path, const std::string& y_path, bool exact) {
  const FiniteMetricSpace x = read_csv_file(x_path);
  const FiniteMetricSpace y = read_csv_file(y_path);
  if (exact) {
    std::cout << "gh_exact " << format_double(gh_exact(x, y)) << '\n';
    return 0;
  }
  const GhBounds b = gh_bounds(x, y);
  std::cout << "gh_lower " << format_double(b.lower) << '\n' << "gh_upper " << format_double(b.upper) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sublab: submersion and bundle-metric experiments"};
  app.require_subcommand(1);

  std::string scenario;
  double p = 1.0;
  double q = 1.0;
  int res = 16;
  double tol = 1e-5;
  auto* verify = app.add_subcommand("verify", "run the invariant suite on one scenario");
  verify->add_option("--scenario", scenario, "product-torus | product-sphere-circle | hopf | identity")->required();
  verify->add_option("--p", p, "bundle metric exponent")->required();
  verify->add_option("--q", q, "bundle metric radial weight")->required()->check(CLI::NonNegativeNumber);
  verify->add_option("--res", res, "lattice resolution for the net checks")->check(CLI::Range(4, 64));
  verify->add_option("--tol", tol, "tolerance for claims and verdicts")->check(CLI::PositiveNumber);

  std::string config_path;
  std::string out_override;
  auto* collapse = app.add_subcommand("collapse", "run a warped collapse sequence and write CSV");
  collapse->add_option("--config", config_path, "config file")->required();
  collapse->add_option("--out", out_override, "override out_path");

  double eps = 0.4;
  int net_res = 16;
  std::string net_scenario;
  auto* net = app.add_subcommand("net", "greedy eps-net on a scenario's total space");
  net->add_option("--scenario", net_scenario)->required();
  net->add_option("--eps", eps)->required()->check(CLI::PositiveNumber);
  net->add_option("--res", net_res, "lattice resolution")->check(CLI::Range(4, 64));

  std::string x_path;
  std::string y_path;
  bool exact = false;
  auto* gh = app.add_subcommand("gh", "Gromov-Hausdorff distance between two CSV distance matrices");
  gh->add_option("--x", x_path)->required()->check(CLI::ExistingFile);
  gh->add_option("--y", y_path)->required()->check(CLI::ExistingFile);
  gh->add_flag("--exact", exact, "exact value (|X||Y| <= 36)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*verify) return run_verify(scenario, p, q, res, tol);
    if (*collapse) return run_collapse_cmd(config_path, out_override);
    if (*net) return run_net(net_scenario, eps, net_res);
    if (*gh) return run_gh(x_path, y_path, exact);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
