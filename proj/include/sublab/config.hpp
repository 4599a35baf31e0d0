#ifndef SUBLAB_CONFIG_HPP
#define SUBLAB_CONFIG_HPP

#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "sublab/bundle.hpp"
#include "sublab/finite_metric.hpp"

namespace sublab {

enum class ScenarioId { ProductTorus, ProductSphereCircle, Hopf, Identity };
enum class WarpKind { ConstantSequence, Separable };

inline std::string to_string(ScenarioId id) {
  switch (id) {
    case ScenarioId::ProductTorus: return "product-torus";
    case ScenarioId::ProductSphereCircle: return "product-sphere-circle";
    case ScenarioId::Hopf: return "hopf";
    case ScenarioId::Identity: return "identity";
  }
  return "?";
}

inline ScenarioId parse_scenario_id(const std::string& s) {
  if (s == "product-torus") return ScenarioId::ProductTorus;
  if (s == "product-sphere-circle") return ScenarioId::ProductSphereCircle;
  if (s == "hopf") return ScenarioId::Hopf;
  if (s == "identity") return ScenarioId::Identity;
  throw Error(ErrorCode::InvalidScenario, "unknown scenario '" + s + "'");
}

inline WarpKind parse_warp_kind(const std::string& s) {
  if (s == "constant-sequence") return WarpKind::ConstantSequence;
  if (s == "separable") return WarpKind::Separable;
  throw Error(ErrorCode::InvalidConfig, "unknown warp_kind '" + s + "'");
}

/// Everything a collapse run needs. Warp families:
///   constant-sequence, warp_params = [c0, decay]:    f_n(x) = c0 / n^decay
///   separable,         warp_params = [a, b, decay]:  f_n(x) = (a + b sin x_0) / n^decay
struct ScenarioConfig {
  ScenarioId scenario_id = ScenarioId::ProductTorus;
  int base_resolution = 32;
  int fiber_resolution = 32;
  int sphere_fiber_resolution = 16;
  PQParams pq{1.0, 1.0};
  WarpKind warp_kind = WarpKind::ConstantSequence;
  std::vector<double> warp_params{1.0, 1.0};
  std::vector<int> n_list{1, 2, 4, 8, 16};
  std::uint64_t seed = 1;
  std::string out_path = "collapse.csv";

  /// Uniform bound of the warp family over all n >= 1.
  double warp_upper_bound() const {
    if (warp_kind == WarpKind::ConstantSequence) return warp_params.at(0);
    return warp_params.at(0) + std::abs(warp_params.at(1));
  }

  void validate() const {
    if (base_resolution < 4 || fiber_resolution < 4 || sphere_fiber_resolution < 4) {
      throw Error(ErrorCode::InvalidConfig, "resolutions must be >= 4");
    }
    if (n_list.empty()) throw Error(ErrorCode::InvalidConfig, "n_list must be nonempty");
    for (std::size_t i = 0; i < n_list.size(); ++i) {
      if (n_list[i] < 1) throw Error(ErrorCode::InvalidConfig, "n_list entries must be >= 1");
      if (i > 0 && n_list[i] <= n_list[i - 1]) throw Error(ErrorCode::InvalidConfig, "n_list must be increasing");
    }
    if (warp_kind == WarpKind::ConstantSequence) {
      if (warp_params.size() != 2) throw Error(ErrorCode::InvalidConfig, "constant-sequence takes [c0, decay]");
      if (!(warp_params[0] > 0.0)) throw Error(ErrorCode::InvalidConfig, "c0 must be positive");
    } else {
      if (warp_params.size() != 3) throw Error(ErrorCode::InvalidConfig, "separable takes [a, b, decay]");
      if (!(warp_params[0] > std::abs(warp_params[1]))) {
        throw Error(ErrorCode::InvalidConfig, "separable warp needs a > |b| to stay positive");
      }
    }
    // decay < 0 would make the family unbounded in n
    if (!(warp_params.back() >= 0.0)) throw Error(ErrorCode::InvalidConfig, "warp decay must be >= 0");
  }
};

namespace detail {

inline std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

inline std::string strip_comment(const std::string& line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

inline std::string unquote(const std::string& v) {
  if (v.size() >= 2 && v.front() == '"' && v.back() == '"') return v.substr(1, v.size() - 2);
  throw Error(ErrorCode::InvalidConfig, "expected a quoted string, got " + v);
}

inline std::vector<double> parse_number_array(const std::string& v) {
  if (v.size() < 2 || v.front() != '[' || v.back() != ']') {
    throw Error(ErrorCode::InvalidConfig, "expected an array, got " + v);
  }
  std::vector<double> out;
  std::stringstream in(v.substr(1, v.size() - 2));
  std::string cell;
  while (std::getline(in, cell, ',')) {
    cell = trim(cell);
    if (cell.empty()) continue;
    try {
      out.push_back(parse_double(cell));
    } catch (const Error&) {
      throw Error(ErrorCode::InvalidConfig, "bad array entry '" + cell + "'");
    }
  }
  return out;
}

inline double parse_number(const std::string& key, const std::string& v) {
  try {
    return parse_double(v);
  } catch (const Error&) {
    throw Error(ErrorCode::InvalidConfig, "key '" + key + "' expects a number");
  }
}

inline int parse_int(const std::string& key, const std::string& v) {
  const double d = parse_number(key, v);
  if (d != std::floor(d)) throw Error(ErrorCode::InvalidConfig, "key '" + key + "' expects an integer");
  return static_cast<int>(d);
}

}  // namespace detail

/// Reads the flat `key = value` subset of TOML: numbers, "strings", [arrays]
/// and # comments. Tables are rejected; unknown keys are errors.
inline ScenarioConfig parse_config(std::istream& in) {
  ScenarioConfig cfg;
  std::map<std::string, std::string> values;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = detail::trim(detail::strip_comment(line));
    if (line.empty()) continue;
    if (line.front() == '[') throw Error(ErrorCode::InvalidConfig, "tables are not supported (line " + std::to_string(lineno) + ")");
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::InvalidConfig, "expected key = value on line " + std::to_string(lineno));
    const std::string key = detail::trim(line.substr(0, eq));
    if (values.count(key)) throw Error(ErrorCode::InvalidConfig, "duplicate key '" + key + "'");
    values[key] = detail::trim(line.substr(eq + 1));
  }
  if (!values.count("scenario_id")) throw Error(ErrorCode::InvalidConfig, "scenario_id is required");
  double p = cfg.pq.p;
  double q = cfg.pq.q;
  for (const auto& [key, v] : values) {
    if (key == "scenario_id") {
      cfg.scenario_id = parse_scenario_id(detail::unquote(v));
    } else if (key == "base_resolution") {
      cfg.base_resolution = detail::parse_int(key, v);
    } else if (key == "fiber_resolution") {
      cfg.fiber_resolution = detail::parse_int(key, v);
    } else if (key == "sphere_fiber_resolution") {
      cfg.sphere_fiber_resolution = detail::parse_int(key, v);
    } else if (key == "p") {
      p = detail::parse_number(key, v);
    } else if (key == "q") {
      q = detail::parse_number(key, v);
    } else if (key == "warp_kind") {
      cfg.warp_kind = parse_warp_kind(detail::unquote(v));
    } else if (key == "warp_params") {
      cfg.warp_params = detail::parse_number_array(v);
    } else if (key == "n_list") {
      cfg.n_list.clear();
      for (double d : detail::parse_number_array(v)) {
        if (d != std::floor(d)) throw Error(ErrorCode::InvalidConfig, "n_list expects integers");
        cfg.n_list.push_back(static_cast<int>(d));
      }
    } else if (key == "seed") {
      cfg.seed = static_cast<std::uint64_t>(detail::parse_int(key, v));
    } else if (key == "out_path") {
      cfg.out_path = detail::unquote(v);
    } else {
      throw Error(ErrorCode::InvalidConfig, "unknown key '" + key + "'");
    }
  }
  if (!(q >= 0.0)) throw Error(ErrorCode::InvalidConfig, "q must be >= 0");
  cfg.pq = PQParams(p, q);
  cfg.validate();
  return cfg;
}

inline ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidConfig, "cannot open config " + path);
  return parse_config(in);
}

}  // namespace sublab

#endif  // SUBLAB_CONFIG_HPP
