#pragma once

// Run configuration for the command-line driver (JSON, see README).

#include "conelab/distributions.hpp"
#include "conelab/functional_eq.hpp"

#include <json.hpp>

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace conelab {

/// The suites `conelab run` understands, in canonical order.
const std::vector<std::string>& valid_suites();
/// Throws ConfigError naming the valid suites.
void require_suite(const std::string& name);

/// "a" in a config: a number means that multiple of e, an array gives coordinates.
struct ElementSpec {
  double scale = 1.0;
  std::optional<std::vector<double>> coords;
  Element resolve(const AlgebraDescriptor& algebra) const;
};

struct ModelSpec {
  std::string family = "wishart";  // wishart | riesz
  std::optional<double> p;         // wishart shape; default dim/r + 1 (X), dim/r + 2 (Y)
  std::vector<double> s;           // riesz exponents
  ElementSpec a;
  RieszParams resolve(const AlgebraDescriptor& algebra, double default_p) const;
};

struct OracleSpec {
  std::string family = "wishart-form";  // wishart-form | riesz-form | zero | table
  ElementSpec lambda{-1.0, std::nullopt};
  std::array<double, 2> kappa{0.7, 1.3};
  std::vector<double> s_e, s_f;
  std::array<double, 4> constants{0, 0, 0, 0};
  std::string table;  // resolved against the config file's directory
};

struct RunConfig {
  std::string algebra = "sym_real(2)";
  std::string algorithm = "w1";
  std::vector<std::string> suites;
  std::optional<std::uint64_t> seed;
  std::map<std::string, int> samples;
  std::map<std::string, double> tolerances;
  std::string output = "conelab-out";
  ModelSpec model_x, model_y;
  OracleSpec oracle;
  int grid_n = 2000;
  std::optional<std::uint64_t> grid_seed;
  double grid_tolerance = 1e-6;
  int sample_n = 1000;

  int sample_count(const std::string& key) const;
  double tolerance(const std::string& key) const;
  /// Seed of a suite, derived from the run seed and the suite's canonical index.
  std::uint64_t suite_seed(const std::string& suite) const;
};

/// Default sample sizes and tolerances (keys accepted under "samples" and "tolerances").
const std::map<std::string, int>& default_samples();
const std::map<std::string, double>& default_tolerances();

/// Parses and validates a config file.  Throws ConfigError.
RunConfig load_config(const std::string& path);
RunConfig parse_config(const nlohmann::json& j, const std::string& base_dir = ".");

}  // namespace conelab
