#include "conelab/config.hpp"
#include "conelab/error.hpp"

#include <doctest.h>

using namespace conelab;
using nlohmann::json;

TEST_CASE("defaults fill every unset sample size and tolerance") {
  RunConfig c = parse_config(json::parse(R"j({"seed": 1})j"));
  CHECK(c.algebra == "sym_real(2)");
  CHECK(c.algorithm == "w1");
  CHECK(c.sample_count("axioms") == 1000);
  CHECK(c.sample_count("permutations") == 199);
  CHECK(c.tolerance("axioms") == 1e-10);
  CHECK(c.tolerance("significance") == 0.01);
  c = parse_config(json::parse(R"j({"seed": 1, "samples": {"axioms": 10}, "tolerances": {"axioms": 1e-6}})j"));
  CHECK(c.sample_count("axioms") == 10);
  CHECK(c.tolerance("axioms") == 1e-6);
  CHECK(c.sample_count("peirce") == 1000);
}

TEST_CASE("suite seeds depend on the suite, not on the order of the list") {
  RunConfig a = parse_config(json::parse(R"j({"seed": 9, "suites": ["peirce", "lukacs"]})j"));
  RunConfig b = parse_config(json::parse(R"j({"seed": 9, "suites": ["lukacs", "peirce"]})j"));
  CHECK(a.suite_seed("lukacs") == b.suite_seed("lukacs"));
  CHECK(a.suite_seed("lukacs") != a.suite_seed("peirce"));
  RunConfig c = parse_config(json::parse(R"j({"seed": 10})j"));
  CHECK(c.suite_seed("lukacs") != a.suite_seed("lukacs"));
}

TEST_CASE("invalid configs are rejected") {
  const char* bad[] = {
      R"j({"suites": ["foo"]})j",
      R"j({"colour": 1})j",
      R"j({"algebra": "sym_real(0)"})j",
      R"j({"algebra": "octonion(3)"})j",
      R"j({"samples": {"axioms": 0}})j",
      R"j({"samples": {"nope": 3}})j",
      R"j({"tolerances": {"axioms": -1}})j",
      R"j({"model_x": {"family": "gamma"}})j",
      R"j({"model_x": {"family": "riesz"}})j",
      R"j({"oracle": {"family": "riesz-form"}})j",
      R"j({"oracle": {"family": "table"}})j",
      R"j({"grid": {"size": 3}})j",
      R"j({"seed": "abc"})j",
  };
  for (const char* text : bad) {
    CAPTURE(text);
    CHECK_THROWS_AS(parse_config(json::parse(text)), ConfigError);
  }
}

TEST_CASE("unknown suite message lists the valid suites") {
  try {
    parse_config(json::parse(R"j({"suites": ["foo"]})j"));
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    std::string msg = e.what();
    for (const auto& s : valid_suites()) CHECK(msg.find(s) != std::string::npos);
  }
}

TEST_CASE("model specs resolve to validated parameters") {
  auto alg = AlgebraDescriptor::sym_real(2);
  RunConfig c = parse_config(json::parse(R"j({"model_x": {"family": "wishart", "p": 3, "a": 2},
                                             "model_y": {"family": "riesz", "s": [3, 2], "a": [2, 1, 0.5]}})j"));
  RieszParams x = c.model_x.resolve(alg, 99);
  CHECK(x.s[0] == 3);
  CHECK(x.s[1] == 3);
  CHECK(x.a[0] == 2);
  CHECK(x.a[2] == 0);
  RieszParams y = c.model_y.resolve(alg, 99);
  CHECK(y.s[1] == 2);
  CHECK(y.a[1] == 1);
  RieszParams d = parse_config(json::parse("{}")).model_x.resolve(alg, 4.5);
  CHECK(d.s[0] == 4.5);

  RunConfig bad = parse_config(json::parse(R"j({"model_x": {"family": "wishart", "p": 0.1}})j"));
  CHECK_THROWS_AS(bad.model_x.resolve(alg, 1), ConfigError);
  RunConfig wrong_dim = parse_config(json::parse(R"j({"model_x": {"a": [1, 2]}})j"));
  CHECK_THROWS_AS(wrong_dim.model_x.resolve(alg, 3), ConfigError);
}

TEST_CASE("table paths resolve against the config directory") {
  RunConfig c = parse_config(json::parse(R"j({"oracle": {"family": "table", "path": "t.csv"}})j"), "/data/run");
  CHECK(c.oracle.table == "/data/run/t.csv");
  c = parse_config(json::parse(R"j({"oracle": {"family": "table", "path": "/abs/t.csv"}})j"), "/data/run");
  CHECK(c.oracle.table == "/abs/t.csv");
}

TEST_CASE("missing or malformed files are config errors") {
  CHECK_THROWS_AS(load_config("/nonexistent/conelab.json"), ConfigError);
}
