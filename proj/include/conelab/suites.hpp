#pragma once

// Verification suites run by `conelab run`, the decomposition driver and the
// sample writer.  Reports are JSON and contain no timing information, so
// equal configs give byte-identical files.

#include "conelab/config.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace conelab {

struct SuiteResult {
  std::string name;
  bool pass = true;
  std::vector<std::string> failures;  // names of residuals over threshold
  nlohmann::json report;
};

/// Throws ConfigError for unknown suite names.
SuiteResult run_suite(const std::string& name, const RunConfig& config);

/// Oracles named by the config (built-in family or table).
OlkinBakerOracles config_oracles(const RunConfig& config, AlgorithmPtr w, const AlgebraDescriptor& algebra);
GridSpec config_grid(const RunConfig& config);

/// Decomposition report; throws InconsistencyError / FitError on bad oracles.
nlohmann::json run_decompose(const RunConfig& config);

/// CSV of draws from model_x: a "# conelab samples ..." line, a header of
/// coordinate labels, one row per draw.
std::string samples_csv(const RunConfig& config);

}  // namespace conelab
