#include <cmath>
#include <fstream>
#include <set>

#include "gridbie/errors.hpp"
#include "gridbie/harness.hpp"

namespace gridbie {

using nlohmann::json;

namespace {

const std::map<std::string, std::map<std::string, double>>& family_defaults() {
  static const std::map<std::string, std::map<std::string, double>> table = {
      {"circle", {{"radius", 0.7}}},
      {"ellipse", {{"a", 0.7}, {"b", 0.5}}},
      {"star", {{"a", 0.7}, {"b", 0.15}, {"k", 5.0}}},
      {"sphere", {{"radius", 0.6}}},
      {"ellipsoid", {{"a", 0.7}, {"b", 0.6}, {"c", 0.5}}},
  };
  return table;
}

const std::map<std::string, double>& defaults_for(const std::string& family) {
  const auto it = family_defaults().find(family);
  if (it == family_defaults().end())
    throw ConfigError("unknown domain family '" + family +
                      "' (expected circle, ellipse, star, sphere or ellipsoid)");
  return it->second;
}

const std::set<std::string> kSolutionKinds = {
    "re_power", "im_power", "log_abs",  "inverse_distance", "saddle",
    "sin_cosh", "zonal",    "xyz",      "constant",         "linear",
};

Point read_point(const json& j, const char* key) {
  if (!j.is_array() || j.size() < 2 || j.size() > 3)
    throw ConfigError(std::string("'") + key + "' must be an array of 2 or 3 numbers");
  Point p{0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < j.size(); ++i) p[i] = j[i].get<double>();
  return p;
}

std::vector<int> read_resolutions(const json& j, const char* key) {
  if (!j.is_array()) throw ConfigError(std::string("'") + key + "' must be an array");
  return j.get<std::vector<int>>();
}

DomainSpec domain_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("domain spec must be an object");
  DomainSpec d;
  d.family = j.value("family", d.family);
  const auto& defaults = defaults_for(d.family);
  for (const auto& [key, value] : j.items()) {
    if (key == "family") continue;
    if (key == "half_width") {
      d.half_width = value.get<double>();
    } else if (defaults.count(key)) {
      d.params[key] = value.get<double>();
    } else {
      throw ConfigError("unknown parameter '" + key + "' for domain family " + d.family);
    }
  }
  return d;
}

json domain_to_json(const DomainSpec& d) {
  json j;
  j["family"] = d.family;
  for (const auto& [key, value] : defaults_for(d.family)) {
    const auto it = d.params.find(key);
    j[key] = it == d.params.end() ? value : it->second;
  }
  j["half_width"] = d.half_width;
  return j;
}

SolutionSpec solution_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("solution spec must be an object");
  SolutionSpec s;
  for (const auto& [key, value] : j.items()) {
    if (key == "kind") {
      s.kind = value.get<std::string>();
    } else if (key == "m") {
      s.m = value.get<int>();
    } else if (key == "center") {
      s.center = read_point(value, "center");
    } else if (key == "value") {
      s.value = value.get<double>();
    } else if (key == "coeffs") {
      s.coeffs = read_point(value, "coeffs");
    } else {
      throw ConfigError("unknown solution parameter '" + key + "'");
    }
  }
  if (!kSolutionKinds.count(s.kind)) throw ConfigError("unknown solution kind '" + s.kind + "'");
  return s;
}

json solution_to_json(const SolutionSpec& s) {
  return json{{"kind", s.kind},
              {"m", s.m},
              {"center", {s.center[0], s.center[1], s.center[2]}},
              {"value", s.value},
              {"coeffs", {s.coeffs[0], s.coeffs[1], s.coeffs[2]}}};
}

}  // namespace

int DomainSpec::dim() const { return family == "sphere" || family == "ellipsoid" ? 3 : 2; }

ImplicitDomain DomainSpec::build() const {
  auto p = defaults_for(family);
  for (const auto& [key, value] : params) {
    if (!p.count(key)) throw ConfigError("unknown parameter '" + key + "' for domain family " + family);
    p[key] = value;
  }
  if (!(half_width > 0.0)) throw ConfigError("half_width must be positive");
  if (family == "circle") return domains::circle(p["radius"], half_width);
  if (family == "ellipse") return domains::ellipse(p["a"], p["b"], half_width);
  if (family == "star") {
    const double k = p["k"];
    if (k != std::round(k) || k < 1) throw ConfigError("star parameter k must be a positive integer");
    return domains::star(p["a"], p["b"], static_cast<int>(k), half_width);
  }
  if (family == "sphere") return domains::sphere(p["radius"], half_width);
  return domains::ellipsoid(p["a"], p["b"], p["c"], half_width);
}

HarmonicFunction SolutionSpec::build() const {
  if (kind == "re_power") return harmonic::re_power(m, center[0], center[1]);
  if (kind == "im_power") return harmonic::im_power(m, center[0], center[1]);
  if (kind == "log_abs") return harmonic::log_abs(center[0], center[1]);
  if (kind == "inverse_distance") return harmonic::inverse_distance(center);
  if (kind == "saddle") return harmonic::saddle();
  if (kind == "sin_cosh") return harmonic::sin_cosh();
  if (kind == "zonal") return harmonic::zonal();
  if (kind == "xyz") return harmonic::xyz();
  if (kind == "constant") return harmonic::constant(value);
  if (kind == "linear") return harmonic::linear(coeffs, value);
  throw ConfigError("unknown solution kind '" + kind + "'");
}

bool SolutionSpec::reproduced_exactly() const {
  if (kind == "saddle" || kind == "zonal" || kind == "xyz" || kind == "constant" ||
      kind == "linear")
    return true;
  return (kind == "re_power" || kind == "im_power") && m >= 0 && m <= 2;
}

void StudyConfig::validate() const {
  solve.validate();
  const int dim = domain.dim();
  const auto dom = domain.build();
  for (const auto& d : suite_domains) d.build();

  if (dim == 2 && (solution.kind == "inverse_distance" || solution.kind == "zonal"))
    throw ConfigError("solution " + solution.kind + " is harmonic only in 3D");
  if (dim == 3 && solution.kind == "log_abs")
    throw ConfigError("log_abs is harmonic only in 2D");
  for (const auto& x : solution.build().singularities)
    if (!(dom(x) > 0.0))
      throw ConfigError("singular point of the exact solution must lie strictly outside the domain");

  auto check_list = [](const std::vector<int>& list, const char* what) {
    for (std::size_t i = 0; i < list.size(); ++i) {
      if (list[i] < 8) throw ConfigError(std::string(what) + " entries must be at least 8");
      if (i > 0 && list[i] <= list[i - 1])
        throw ConfigError(std::string(what) + " must be strictly increasing");
    }
  };
  check_list(resolutions, "resolutions");
  check_list(suite_resolutions, "suite_resolutions");
  if (solve.n < 8) throw ConfigError("n must be at least 8");
  if (samples < 1) throw ConfigError("samples must be positive");
  if (format != "json" && format != "csv" && format != "text")
    throw ConfigError("format must be json, csv or text");
}

namespace {

StudyConfig parse_config(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  StudyConfig c;
  for (const auto& [key, value] : j.items()) {
    if (key == "name") c.name = value.get<std::string>();
    else if (key == "domain") c.domain = domain_from_json(value);
    else if (key == "solution") c.solution = solution_from_json(value);
    else if (key == "resolutions") c.resolutions = read_resolutions(value, "resolutions");
    else if (key == "suite_resolutions") c.suite_resolutions = read_resolutions(value, "suite_resolutions");
    else if (key == "suite_domains") {
      if (!value.is_array()) throw ConfigError("'suite_domains' must be an array");
      c.suite_domains.clear();
      for (const auto& d : value) c.suite_domains.push_back(domain_from_json(d));
    }
    else if (key == "n") c.solve.n = value.get<int>();
    else if (key == "delta") c.solve.delta = value.get<double>();
    else if (key == "method") c.solve.method = parse_method(value.get<std::string>());
    else if (key == "fp_tol") c.solve.fp_tol = value.get<double>();
    else if (key == "fp_max_iters") c.solve.fp_max_iters = value.get<int>();
    else if (key == "gmres_restart") c.solve.gmres_restart = value.get<int>();
    else if (key == "cg_tol") c.solve.cg_tol = value.get<double>();
    else if (key == "dense_cap") c.solve.dense_cap = value.get<int>();
    else if (key == "samples") c.samples = value.get<int>();
    else if (key == "seed") c.seed = value.get<std::uint64_t>();
    else if (key == "single_thread") c.single_thread = value.get<bool>();
    else if (key == "output") {
      if (!value.is_object()) throw ConfigError("'output' must be an object");
      for (const auto& [k, v] : value.items()) {
        if (k == "dir") c.out_dir = v.get<std::string>();
        else if (k == "format") c.format = v.get<std::string>();
        else throw ConfigError("unknown output parameter '" + k + "'");
      }
    }
    else throw ConfigError("unknown config key '" + key + "'");
  }
  return c;
}

}  // namespace

StudyConfig config_from_json(const json& j) {
  try {
    return parse_config(j);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

json to_json(const StudyConfig& c) {
  json j;
  j["name"] = c.name;
  j["domain"] = domain_to_json(c.domain);
  j["solution"] = solution_to_json(c.solution);
  j["resolutions"] = c.resolutions;
  j["suite_resolutions"] = c.suite_resolutions;
  j["suite_domains"] = json::array();
  for (const auto& d : c.suite_domains) j["suite_domains"].push_back(domain_to_json(d));
  j["n"] = c.solve.n;
  j["delta"] = c.solve.delta;
  j["method"] = to_string(c.solve.method);
  j["fp_tol"] = c.solve.fp_tol;
  j["fp_max_iters"] = c.solve.fp_max_iters;
  j["gmres_restart"] = c.solve.gmres_restart;
  j["cg_tol"] = c.solve.cg_tol;
  j["dense_cap"] = c.solve.dense_cap;
  j["samples"] = c.samples;
  j["seed"] = c.seed;
  j["single_thread"] = c.single_thread;
  j["output"] = {{"dir", c.out_dir}, {"format", c.format}};
  return j;
}

StudyConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("config file " + path + ": " + e.what());
  }
  try {
    return config_from_json(j);
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

}  // namespace gridbie
