// conelab: batch driver for the verification suites.
//
//   conelab run <config> [--seed N] [--suite NAME]... [--out DIR]
//   conelab decompose <config> [--seed N] [--out DIR] [--emit-queries FILE]
//   conelab sample <config> [--seed N] [--out DIR]
//
// Exit status: 0 success, 1 failed thresholds or inconsistent oracle data,
// 2 usage or configuration error.

#include "conelab/error.hpp"
#include "conelab/suites.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using conelab::RunConfig;

namespace {

constexpr int kFailure = 1;
constexpr int kUsage = 2;

struct Overrides {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> suites;
  std::string out;
};

RunConfig load(const Overrides& o) {
  RunConfig cfg = conelab::load_config(o.config_path);
  if (o.seed) cfg.seed = o.seed;
  if (!o.out.empty()) cfg.output = o.out;
  if (!o.suites.empty()) cfg.suites = o.suites;
  if (!cfg.seed) throw conelab::ConfigError("no seed: set \"seed\" in the config or pass --seed");
  for (const auto& s : cfg.suites) conelab::require_suite(s);
  return cfg;
}

void write_file(const fs::path& path, const std::string& text) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw conelab::ConfigError("cannot write " + path.string());
  out << text;
}

int cmd_run(const Overrides& o) {
  RunConfig cfg = load(o);
  if (cfg.suites.empty()) throw conelab::ConfigError("no suites requested");
  nlohmann::json summary;
  summary["algebra"] = cfg.algebra;
  summary["algorithm"] = cfg.algorithm;
  summary["seed"] = *cfg.seed;
  summary["suites"] = nlohmann::json::array();
  bool pass = true;
  for (const auto& name : cfg.suites) {
    conelab::SuiteResult r = conelab::run_suite(name, cfg);
    write_file(fs::path(cfg.output) / (name + ".json"), r.report.dump(2) + "\n");
    summary["suites"].push_back({{"suite", name}, {"pass", r.pass}, {"failures", r.failures}});
    std::cout << name << ": " << (r.pass ? "pass" : "FAIL") << "\n";
    if (!r.pass) {
      pass = false;
      for (const auto& f : r.failures) {
        std::cerr << name << ": " << f;
        const auto& res = r.report["residuals"];
        if (res.contains(f)) std::cerr << " = " << res[f].dump();
        if (r.report["thresholds"].contains(f)) std::cerr << " (threshold " << r.report["thresholds"][f].dump() << ")";
        std::cerr << "\n";
      }
    }
  }
  summary["pass"] = pass;
  write_file(fs::path(cfg.output) / "summary.json", summary.dump(2) + "\n");
  return pass ? 0 : kFailure;
}

int cmd_decompose(const Overrides& o, const std::string& emit_queries) {
  RunConfig cfg = load(o);
  auto alg = conelab::AlgebraDescriptor::parse(cfg.algebra);
  auto w = conelab::parse_algorithm(cfg.algorithm, alg);
  if (!emit_queries.empty()) {
    auto queries = conelab::oracle_queries(w, alg, conelab::config_grid(cfg));
    if (cfg.oracle.family == "table") {
      conelab::write_oracle_table(emit_queries, queries);
    } else {
      auto oracles = conelab::config_oracles(cfg, w, alg);
      conelab::write_oracle_table(emit_queries, queries, &oracles);
    }
    std::cout << "wrote " << queries.size() << " oracle queries to " << emit_queries << "\n";
    return 0;
  }
  nlohmann::json j;
  try {
    j = conelab::run_decompose(cfg);
  } catch (const conelab::InconsistencyError& e) {
    std::cerr << "inconsistent oracle data: " << e.what() << "\n";
    return kFailure;
  } catch (const conelab::FitError& e) {
    std::cerr << "decomposition failed: " << e.what() << "\n";
    return kFailure;
  }
  j["seed"] = *cfg.seed;
  write_file(fs::path(cfg.output) / "decomposition.json", j.dump(2) + "\n");
  std::cout << "wrote " << (fs::path(cfg.output) / "decomposition.json").string() << "\n";
  return 0;
}

int cmd_sample(const Overrides& o) {
  RunConfig cfg = load(o);
  write_file(fs::path(cfg.output) / "samples.csv", conelab::samples_csv(cfg));
  std::cout << "wrote " << (fs::path(cfg.output) / "samples.csv").string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"conelab: symmetric cone verification suites"};
  app.require_subcommand(1);
  Overrides o;
  std::string emit_queries;
  std::uint64_t seed = 0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("config", o.config_path, "JSON config file")->required();
    sub->add_option("--seed", seed, "override the config seed");
    sub->add_option("--out", o.out, "output directory");
  };
  CLI::App* run = app.add_subcommand("run", "run verification suites");
  add_common(run);
  run->add_option("--suite", o.suites, "suite to run (repeatable)");
  CLI::App* decompose = app.add_subcommand("decompose", "decompose oracle data of the functional equation");
  add_common(decompose);
  decompose->add_option("--emit-queries", emit_queries, "write the grid query points to this CSV and stop");
  CLI::App* sample = app.add_subcommand("sample", "draw samples from model_x as CSV");
  add_common(sample);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }
  for (CLI::App* sub : {run, decompose, sample})
    if (sub->parsed() && sub->count("--seed")) o.seed = seed;

  try {
    if (run->parsed()) return cmd_run(o);
    if (decompose->parsed()) return cmd_decompose(o, emit_queries);
    return cmd_sample(o);
  } catch (const conelab::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const conelab::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: malformed config: " << e.what() << "\n";
    return kUsage;
  } catch (const conelab::ConeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
}
