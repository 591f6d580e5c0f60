#include "conelab/config.hpp"

#include "conelab/error.hpp"
#include "conelab/parallel.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>

namespace conelab {

using nlohmann::json;

const std::vector<std::string>& valid_suites() {
  static const std::vector<std::string> names{"algebra-axioms", "peirce",        "triangular", "mult-alg",
                                              "distributions",  "functional-eq", "lukacs"};
  return names;
}

const std::map<std::string, int>& default_samples() {
  static const std::map<std::string, int> d{
      {"axioms", 1000},      {"peirce", 1000},     {"triangular", 1000},  {"algorithm", 200},
      {"jacobian", 20},      {"distribution", 20000}, {"bijection", 1000}, {"factorization", 200},
      {"independence", 5000}, {"permutations", 199}, {"projections", 8},  {"k_invariance", 2000},
      {"rotations", 20},     {"wlog", 200}};
  return d;
}

const std::map<std::string, double>& default_tolerances() {
  static const std::map<std::string, double> d{
      {"axioms", 1e-10},   {"peirce", 1e-10},       {"triangular", 1e-9},     {"algorithm", 1e-9},
      {"ddet", 1e-8},      {"jacobian", 1e-6},      {"wlog", 1e-9},           {"wlog_counterexample", 0.01},
      {"olkin_baker", 1e-3}, {"bijection", 1e-10},  {"factorization", 1e-8},  {"mean_z", 4.0},
      {"normalization", 1e-3}, {"significance", 0.01}};
  return d;
}

int RunConfig::sample_count(const std::string& key) const {
  auto it = samples.find(key);
  return it != samples.end() ? it->second : default_samples().at(key);
}

double RunConfig::tolerance(const std::string& key) const {
  auto it = tolerances.find(key);
  return it != tolerances.end() ? it->second : default_tolerances().at(key);
}

std::uint64_t RunConfig::suite_seed(const std::string& suite) const {
  const auto& names = valid_suites();
  auto it = std::find(names.begin(), names.end(), suite);
  return derive_seed(seed.value_or(0), static_cast<std::uint64_t>(it - names.begin()));
}

Element ElementSpec::resolve(const AlgebraDescriptor& algebra) const {
  if (!coords) return Element::identity(algebra) * scale;
  if (static_cast<int>(coords->size()) != algebra.dim())
    throw ConfigError("element has " + std::to_string(coords->size()) + " coordinates, " + algebra.name() +
                      " needs " + std::to_string(algebra.dim()));
  return Element(algebra, Eigen::Map<const Eigen::VectorXd>(coords->data(), algebra.dim()));
}

void require_suite(const std::string& name) {
  const auto& names = valid_suites();
  if (std::find(names.begin(), names.end(), name) != names.end()) return;
  std::string list;
  for (const auto& n : names) list += (list.empty() ? "" : ", ") + n;
  throw ConfigError("unknown suite \"" + name + "\"; valid suites: " + list);
}

RieszParams ModelSpec::resolve(const AlgebraDescriptor& algebra, double default_p) const {
  Element av = a.resolve(algebra);
  try {
    if (family == "wishart") {
      WishartParams w{p.value_or(default_p), av};
      w.validate();
      return w.as_riesz();
    }
    if (static_cast<int>(s.size()) != algebra.rank())
      throw ConfigError("riesz model needs " + std::to_string(algebra.rank()) + " exponents");
    RieszParams r{PowerExponent(Eigen::Map<const Eigen::VectorXd>(s.data(), algebra.rank())), av,
                  JordanFrame::standard(algebra)};
    r.validate();
    return r;
  } catch (const DomainError& err) {
    throw ConfigError(std::string("invalid model parameters: ") + err.what());
  }
}

namespace {

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [key, value] : j.items())
    if (!allowed.count(key)) throw ConfigError("unknown key \"" + key + "\" in " + where);
}

template <class T>
T get(const json& j, const std::string& key, const std::string& where) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("bad value for \"" + key + "\" in " + where);
  }
}

ElementSpec parse_element(const json& j, const std::string& where) {
  ElementSpec e;
  if (j.is_number()) {
    e.scale = j.get<double>();
  } else if (j.is_array()) {
    try {
      e.coords = j.get<std::vector<double>>();
    } catch (const json::exception&) {
      throw ConfigError(where + " must be a number or an array of numbers");
    }
  } else {
    throw ConfigError(where + " must be a number or an array of numbers");
  }
  return e;
}

ModelSpec parse_model(const json& j, const std::string& where) {
  check_keys(j, {"family", "p", "s", "a"}, where);
  ModelSpec m;
  if (j.contains("family")) m.family = get<std::string>(j, "family", where);
  if (m.family != "wishart" && m.family != "riesz")
    throw ConfigError(where + ".family must be \"wishart\" or \"riesz\"");
  if (j.contains("p")) m.p = get<double>(j, "p", where);
  if (j.contains("s")) m.s = get<std::vector<double>>(j, "s", where);
  if (m.family == "riesz" && m.s.empty()) throw ConfigError(where + ": riesz model needs \"s\"");
  if (j.contains("a")) m.a = parse_element(j.at("a"), where + ".a");
  return m;
}

OracleSpec parse_oracle(const json& j, const std::string& base_dir) {
  check_keys(j, {"family", "lambda", "kappa", "s_e", "s_f", "constants", "path"}, "oracle");
  OracleSpec o;
  if (j.contains("family")) o.family = get<std::string>(j, "family", "oracle");
  static const std::set<std::string> families{"wishart-form", "riesz-form", "zero", "table"};
  if (!families.count(o.family))
    throw ConfigError("oracle.family must be one of wishart-form, riesz-form, zero, table");
  if (j.contains("lambda")) o.lambda = parse_element(j.at("lambda"), "oracle.lambda");
  if (j.contains("kappa")) o.kappa = get<std::array<double, 2>>(j, "kappa", "oracle");
  if (j.contains("s_e")) o.s_e = get<std::vector<double>>(j, "s_e", "oracle");
  if (j.contains("s_f")) o.s_f = get<std::vector<double>>(j, "s_f", "oracle");
  if (j.contains("constants")) o.constants = get<std::array<double, 4>>(j, "constants", "oracle");
  if (o.family == "riesz-form" && (o.s_e.empty() || o.s_f.empty()))
    throw ConfigError("oracle: riesz-form needs \"s_e\" and \"s_f\"");
  if (o.family == "table") {
    if (!j.contains("path")) throw ConfigError("oracle: table needs \"path\"");
    std::filesystem::path p = get<std::string>(j, "path", "oracle");
    o.table = (p.is_absolute() ? p : std::filesystem::path(base_dir) / p).string();
  }
  return o;
}

}  // namespace

RunConfig parse_config(const json& j, const std::string& base_dir) {
  check_keys(j,
             {"algebra", "algorithm", "suites", "seed", "samples", "tolerances", "output", "model_x", "model_y",
              "oracle", "grid", "sample"},
             "config");
  RunConfig c;
  if (j.contains("algebra")) c.algebra = get<std::string>(j, "algebra", "config");
  try {
    AlgebraDescriptor::parse(c.algebra);
  } catch (const ConeError& err) {
    throw ConfigError(std::string("config.algebra: ") + err.what());
  }
  if (j.contains("algorithm")) c.algorithm = get<std::string>(j, "algorithm", "config");
  if (j.contains("suites")) c.suites = get<std::vector<std::string>>(j, "suites", "config");
  for (const auto& name : c.suites) require_suite(name);
  if (j.contains("seed")) c.seed = get<std::uint64_t>(j, "seed", "config");
  if (j.contains("samples")) {
    for (const auto& [key, value] : j.at("samples").items()) {
      if (!default_samples().count(key)) throw ConfigError("unknown key \"" + key + "\" in samples");
      if (!value.is_number_integer() || value.get<long long>() < 1)
        throw ConfigError("samples." + key + " must be a positive integer");
      c.samples[key] = value.get<int>();
    }
  }
  if (j.contains("tolerances")) {
    for (const auto& [key, value] : j.at("tolerances").items()) {
      if (!default_tolerances().count(key)) throw ConfigError("unknown key \"" + key + "\" in tolerances");
      if (!value.is_number() || !(value.get<double>() > 0))
        throw ConfigError("tolerances." + key + " must be a positive number");
      c.tolerances[key] = value.get<double>();
    }
  }
  if (j.contains("output")) c.output = get<std::string>(j, "output", "config");
  if (j.contains("model_x")) c.model_x = parse_model(j.at("model_x"), "model_x");
  if (j.contains("model_y")) c.model_y = parse_model(j.at("model_y"), "model_y");
  if (j.contains("oracle")) c.oracle = parse_oracle(j.at("oracle"), base_dir);
  if (j.contains("grid")) {
    const json& g = j.at("grid");
    check_keys(g, {"n", "seed", "tolerance"}, "grid");
    if (g.contains("n")) c.grid_n = get<int>(g, "n", "grid");
    if (g.contains("seed")) c.grid_seed = get<std::uint64_t>(g, "seed", "grid");
    if (g.contains("tolerance")) c.grid_tolerance = get<double>(g, "tolerance", "grid");
  }
  if (j.contains("sample")) {
    const json& s = j.at("sample");
    check_keys(s, {"n"}, "sample");
    if (s.contains("n")) c.sample_n = get<int>(s, "n", "sample");
    if (c.sample_n < 1) throw ConfigError("sample.n must be positive");
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& err) {
    throw ConfigError("config " + path + " is not valid JSON: " + err.what());
  }
  return parse_config(j, std::filesystem::path(path).parent_path().string());
}

}  // namespace conelab
