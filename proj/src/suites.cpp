#include "conelab/suites.hpp"

#include "conelab/error.hpp"
#include "conelab/lukacs.hpp"
#include "conelab/parallel.hpp"
#include "conelab/peirce.hpp"
#include "conelab/verification.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <sstream>

namespace conelab {

using nlohmann::json;

namespace {

class Report {
 public:
  Report(std::string name, const RunConfig& cfg, std::uint64_t seed) {
    result_.name = std::move(name);
    result_.report["suite"] = result_.name;
    result_.report["algebra"] = cfg.algebra;
    result_.report["algorithm"] = cfg.algorithm;
    result_.report["seed"] = seed;
    result_.report["residuals"] = json::object();
    result_.report["thresholds"] = json::object();
  }

  // value <= threshold passes
  void at_most(const std::string& key, double value, double threshold) {
    record(key, value, threshold, value <= threshold);
  }
  // value > threshold passes
  void above(const std::string& key, double value, double threshold) {
    record(key, value, threshold, value > threshold);
  }
  void flag(const std::string& key, bool ok) {
    result_.report["checks"][key] = ok;
    if (!ok) fail(key);
  }
  void info(const std::string& key, json value) { result_.report["residuals"][key] = std::move(value); }
  json& extra() { return result_.report; }

  SuiteResult finish() {
    result_.report["pass"] = result_.pass;
    result_.report["failures"] = result_.failures;
    return std::move(result_);
  }

 private:
  void record(const std::string& key, double value, double threshold, bool ok) {
    result_.report["residuals"][key] = value;
    result_.report["thresholds"][key] = threshold;
    if (!ok) fail(key);
  }
  void fail(const std::string& key) {
    result_.pass = false;
    result_.failures.push_back(key);
  }
  SuiteResult result_;
};

// File name only, so reports do not depend on where the config lives.
std::string fs_name(const std::string& path) { return std::filesystem::path(path).filename().string(); }

AlgebraDescriptor algebra_of(const RunConfig& cfg) { return AlgebraDescriptor::parse(cfg.algebra); }

AlgorithmPtr algorithm_of(const RunConfig& cfg, const AlgebraDescriptor& alg) {
  return parse_algorithm(cfg.algorithm, alg);
}

std::pair<RieszParams, RieszParams> models_of(const RunConfig& cfg, const AlgebraDescriptor& alg) {
  const double nr = alg.dim_over_rank();
  return {cfg.model_x.resolve(alg, nr + 1.0), cfg.model_y.resolve(alg, nr + 2.0)};
}

json coords_json(const Element& x) {
  return std::vector<double>(x.coords().data(), x.coords().data() + x.coords().size());
}

SuiteResult suite_axioms(const RunConfig& cfg, std::uint64_t seed) {
  Report rep("algebra-axioms", cfg, seed);
  Rng rng(seed);
  AxiomResiduals r = check_axioms(algebra_of(cfg), cfg.sample_count("axioms"), rng);
  const double tol = cfg.tolerance("axioms");
  rep.extra()["triples"] = r.triples;
  rep.at_most("commutativity", r.commutativity, tol);
  rep.at_most("jordan_identity", r.jordan_identity, tol);
  rep.at_most("neutrality", r.neutrality, tol);
  rep.at_most("form_associativity", r.form_associativity, tol);
  rep.info("max", r.max());
  return rep.finish();
}

SuiteResult suite_peirce(const RunConfig& cfg, std::uint64_t seed) {
  Report rep("peirce", cfg, seed);
  Rng rng(seed);
  AlgebraDescriptor alg = algebra_of(cfg);
  PeirceResiduals r = check_peirce(alg, cfg.sample_count("peirce"), rng);
  const double tol = cfg.tolerance("peirce");
  rep.extra()["samples"] = r.samples;
  rep.extra()["dim"] = alg.dim();
  rep.extra()["rank"] = alg.rank();
  rep.extra()["peirce_d"] = alg.peirce_d();
  rep.flag("dim_formula", r.dim_formula);
  rep.at_most("multiplication_table", r.table, tol);
  rep.at_most("square_identity", r.square, tol);
  rep.at_most("product_identity", r.product, tol);
  return rep.finish();
}

SuiteResult suite_triangular(const RunConfig& cfg, std::uint64_t seed) {
  Report rep("triangular", cfg, seed);
  Rng rng(seed);
  TriangularResiduals r = check_triangular(algebra_of(cfg), cfg.sample_count("triangular"), rng);
  const double tol = cfg.tolerance("triangular");
  rep.extra()["samples"] = r.samples;
  rep.at_most("round_trip", r.round_trip, tol);
  rep.at_most("delta_equivariance", r.delta_equivariance, tol);
  rep.at_most("frobenius_unit", r.frobenius_unit, tol);
  return rep.finish();
}

SuiteResult suite_mult_alg(const RunConfig& cfg, std::uint64_t seed) {
  Report rep("mult-alg", cfg, seed);
  AlgebraDescriptor alg = algebra_of(cfg);
  AlgorithmPtr w = algorithm_of(cfg, alg);
  Rng rng(derive_seed(seed, 0));
  AlgorithmReport a = check_algorithm(*w, alg, cfg.sample_count("algorithm"), rng);
  const double tol = cfg.tolerance("algorithm");
  rep.extra()["samples"] = a.samples;
  rep.extra()["homogeneous"] = a.homogeneous;
  rep.at_most("neutrality", a.neutrality, tol);
  rep.at_most("division", a.division, tol);
  rep.at_most("inverse", a.inverse, tol);
  rep.at_most("cone_violations", a.cone_violations, 0);
  rep.at_most("ddet", a.ddet, cfg.tolerance("ddet"));
  rep.at_most("det_multiplicative", a.det_multiplicative, cfg.tolerance("ddet"));
  rep.info("homogeneity", a.homogeneity);
  rep.info("degree_one_scaling", a.degree_one_scaling);
  Rng jrng(derive_seed(seed, 1));
  JacobianResiduals j = check_jacobian(alg, *w, cfg.sample_count("jacobian"), jrng);
  rep.extra()["jacobian_points"] = j.points;
  rep.at_most("jacobian", j.jacobian, cfg.tolerance("jacobian"));
  return rep.finish();
}

// E X = -grad log Delta_s(theta^{-1}) at theta = a, by central differences.
Element riesz_mean(const RieszParams& p) {
  const auto& alg = p.a.algebra();
  Eigen::VectorXd g(alg.dim());
  const double h = 1e-5 * (1 + norm(p.a));
  for (int k = 0; k < alg.dim(); ++k) {
    Element dp = p.a + Element::basis(alg, k) * h;
    Element dm = p.a - Element::basis(alg, k) * h;
    g[k] = -(log_generalized_power(inverse(dp), p.s, p.frame) - log_generalized_power(inverse(dm), p.s, p.frame)) /
           (2 * h);
  }
  return {alg, g};
}

SuiteResult suite_distributions(const RunConfig& cfg, std::uint64_t seed) {
  Report rep("distributions", cfg, seed);
  AlgebraDescriptor alg = algebra_of(cfg);
  RieszParams px = models_of(cfg, alg).first;
  const int n = cfg.sample_count("distribution");
  Rng rng(derive_seed(seed, 0));
  std::vector<Element> draws = sample_riesz(px, n, rng);
  int outside = 0;
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(alg.dim()), sq = Eigen::VectorXd::Zero(alg.dim());
  for (const auto& x : draws) {
    if (!in_cone(x)) ++outside;
    mean += x.coords();
  }
  mean /= n;
  for (const auto& x : draws) sq += (x.coords() - mean).cwiseAbs2();
  Eigen::VectorXd se = (sq / (n - 1.0) / n).cwiseSqrt();
  Element expect = px.s.is_constant() ? inverse(px.a) * (px.s[0] / alg.trace_scale()) : riesz_mean(px);
  double z = 0;
  for (int k = 0; k < alg.dim(); ++k)
    if (se[k] > 0) z = std::max(z, std::abs(mean[k] - expect[k]) / se[k]);
  rep.extra()["family"] = cfg.model_x.family;
  rep.extra()["n"] = n;
  rep.extra()["mean"] = std::vector<double>(mean.data(), mean.data() + mean.size());
  rep.extra()["expected_mean"] = coords_json(expect);
  rep.at_most("draws_outside_cone", outside, 0);
  rep.at_most("mean_max_z", z, cfg.tolerance("mean_z"));
  const bool quadrature = alg.rank() == 1 || (alg.rank() == 2 && alg.peirce_d() <= 2);
  if (quadrature) {
    double mass = cone_integral([&](const Element& x) { return riesz_logpdf(px, x); }, px.frame);
    rep.at_most("normalization", std::abs(mass - 1), cfg.tolerance("normalization"));
  }
  return rep.finish();
}

SuiteResult suite_functional_eq(const RunConfig& cfg, std::uint64_t seed) {
  Report rep("functional-eq", cfg, seed);
  AlgebraDescriptor alg = algebra_of(cfg);
  AlgorithmPtr w = algorithm_of(cfg, alg);
  JordanFrame frame = JordanFrame::standard(alg);
  AlgorithmPtr w2 = make_w2(frame);
  Rng rng(derive_seed(seed, 0));
  ElementPairs pairs = random_pairs(alg, cfg.sample_count("wlog"), rng);
  const double tol = cfg.tolerance("wlog");
  rep.at_most("wlog_log_det", wlog_residual(LogCauchyFn::log_det_power(1.0), *w, pairs), tol);
  Eigen::VectorXd s = Eigen::VectorXd::LinSpaced(alg.rank(), 2.0, 1.0);
  LogCauchyFn delta = LogCauchyFn::delta_s_log(PowerExponent(s), frame);
  rep.at_most("wlog_delta_s_w2", wlog_residual(delta, *w2, pairs), tol);
  if (alg.rank() >= 2)
    rep.above("wlog_delta_s_w1_counterexample", wlog_residual(delta, *make_w1(), pairs),
              cfg.tolerance("wlog_counterexample"));

  GridSpec grid;
  grid.n_grid = cfg.grid_n;
  grid.seed = derive_seed(seed, 1);
  grid.tolerance = cfg.grid_tolerance;
  const double ob_tol = cfg.tolerance("olkin_baker");
  const Element lambda = Element::identity(alg) * -1.0;
  if (w->declared_homogeneous()) {
    OBDecomposition ob = olkin_baker_decompose(
        forward_oracles(lambda, LogCauchyFn::log_det_power(0.7), LogCauchyFn::log_det_power(1.3), {0, 0, 0, 0}, w),
        w, alg, grid);
    rep.extra()["olkin_baker_log_det"] = to_json(ob);
    bool forms = ob.e_fn.form == DeclaredForm::log_det_power && ob.f_fn.form == DeclaredForm::log_det_power;
    rep.flag("ob_log_det_forms", forms);
    double err = (ob.lambda.coords() - lambda.coords()).cwiseAbs().maxCoeff();
    if (forms) err = std::max({err, std::abs(ob.e_fn.kappa - 0.7), std::abs(ob.f_fn.kappa - 1.3)});
    rep.at_most("ob_log_det_recovery", err, ob_tol);
    rep.at_most("ob_log_det_constants", std::abs(ob.diagnostics.constant_identity), ob_tol);
  } else {
    rep.extra()["olkin_baker_log_det"] = "skipped: algorithm is not homogeneous of degree 1";
  }
  Eigen::VectorXd se = Eigen::VectorXd::LinSpaced(alg.rank(), 0.5, 1.5);
  OBDecomposition ob2 = olkin_baker_decompose(
      forward_oracles(lambda, LogCauchyFn::delta_s_log(PowerExponent(se), frame), delta, {0, 0, 0, 0}, w2), w2, alg,
      grid);
  rep.extra()["olkin_baker_riesz"] = to_json(ob2);
  bool forms2 = ob2.e_fn.s && ob2.f_fn.s;
  if (alg.rank() == 1) forms2 = ob2.e_fn.form == DeclaredForm::log_det_power;
  rep.flag("ob_riesz_forms", forms2);
  double err2 = (ob2.lambda.coords() - lambda.coords()).cwiseAbs().maxCoeff();
  if (forms2 && alg.rank() > 1)
    err2 = std::max({err2, (ob2.e_fn.s->values() - se).cwiseAbs().maxCoeff(),
                     (ob2.f_fn.s->values() - s).cwiseAbs().maxCoeff()});
  rep.at_most("ob_riesz_recovery", err2, ob_tol);

  Rng krng(derive_seed(seed, 2));
  KInvarianceReport k = k_invariance_check(LogCauchyFn::log_det_power(1.0), alg, krng, cfg.sample_count("wlog"));
  rep.at_most("k_invariance_log_det", k.k_residual, tol * 10);
  rep.at_most("det_functional_log_det", k.det_residual, tol * 10);
  return rep.finish();
}

SuiteResult suite_lukacs(const RunConfig& cfg, std::uint64_t seed) {
  Report rep("lukacs", cfg, seed);
  rep.extra()["experiment"] = "lukacs";
  AlgebraDescriptor alg = algebra_of(cfg);
  AlgorithmPtr w = algorithm_of(cfg, alg);
  auto [px, py] = models_of(cfg, alg);

  Rng brng(derive_seed(seed, 0));
  double bij = 0;
  for (int i = 0; i < cfg.sample_count("bijection"); ++i) {
    Element x = random_element(alg, brng, {}), y = random_element(alg, brng, {});
    QuotientPair q = quotient_map(x, y, *w);
    auto [x2, y2] = inverse_map(q.u, q.v, *w);
    bij = std::max({bij, norm(x2 - x) / norm(x), norm(y2 - y) / norm(y)});
  }
  rep.at_most("bijection", bij, cfg.tolerance("bijection"));
  Rng jrng(derive_seed(seed, 1));
  rep.at_most("jacobian", check_jacobian(alg, *w, cfg.sample_count("jacobian"), jrng).jacobian,
              cfg.tolerance("jacobian"));

  DensityModel mx = riesz_model(px, w), my = riesz_model(py, w);
  Rng frng(derive_seed(seed, 2));
  ElementPairs pairs = random_pairs(alg, cfg.sample_count("factorization"), frng);
  const bool same_lambda = (mx.lambda.coords() - my.lambda.coords()).cwiseAbs().maxCoeff() <= 1e-12;
  const bool wlog_x = wlog_residual(mx.mult_fn, *w, pairs) <= cfg.tolerance("wlog");
  const bool wlog_y = wlog_residual(my.mult_fn, *w, pairs) <= cfg.tolerance("wlog");
  const bool predicted = same_lambda && wlog_x && wlog_y;
  rep.extra()["same_lambda"] = same_lambda;
  rep.extra()["w_multiplicative_x"] = wlog_x;
  rep.extra()["w_multiplicative_y"] = wlog_y;
  rep.extra()["independence_predicted"] = predicted;
  double fact = factorization_residual(mx, my, *w, pairs, false);
  if (predicted)
    rep.at_most("factorization", fact, cfg.tolerance("factorization"));
  else
    rep.info("factorization", fact);

  const int n = cfg.sample_count("independence");
  Rng srng(derive_seed(seed, 3));
  auto xs = sample_riesz(px, n, srng);
  auto ys = sample_riesz(py, n, srng);
  IndependenceReport ind =
      independence_test(xs, ys, *w, cfg.sample_count("permutations"), derive_seed(seed, 4), cfg.sample_count("projections"));
  const double alpha = cfg.tolerance("significance");
  rep.extra()["n"] = ind.n;
  rep.extra()["n_perm"] = ind.n_perm;
  rep.extra()["statistic"] = ind.statistic;
  rep.extra()["p_value"] = ind.p_value;
  if (predicted) rep.above("independence_p_value", ind.p_value, alpha);

  // K-invariance of U holds for Wishart pairs with a scalar scale under w1
  const int rotations = cfg.sample_count("rotations");
  auto scalar_scale = [&](const RieszParams& p) {
    Element diff = p.a - Element::identity(alg) * (trace(p.a) / alg.rank());
    return norm(diff) <= 1e-12 * norm(p.a);
  };
  const bool k_predicted = predicted && px.s.is_constant() && py.s.is_constant() && scalar_scale(px) &&
                           scalar_scale(py) && w->name() == "w1";
  KInvarianceQuotientReport kr = k_invariant_quotient_check(px, py, *w, cfg.sample_count("k_invariance"), rotations,
                                                            cfg.sample_count("permutations"), derive_seed(seed, 5),
                                                            cfg.sample_count("projections"));
  rep.extra()["k_invariance"] = {{"n", kr.n},
                                 {"rotations", kr.rotations},
                                 {"max_statistic", kr.max_statistic},
                                 {"min_p_value", kr.min_p_value},
                                 {"combined_p_value", kr.combined_p_value},
                                 {"predicted_invariant", k_predicted}};
  if (k_predicted) rep.above("k_invariance_p_value", kr.combined_p_value, alpha);
  return rep.finish();
}

}  // namespace

SuiteResult run_suite(const std::string& name, const RunConfig& config) {
  const std::uint64_t seed = config.suite_seed(name);
  if (name == "algebra-axioms") return suite_axioms(config, seed);
  if (name == "peirce") return suite_peirce(config, seed);
  if (name == "triangular") return suite_triangular(config, seed);
  if (name == "mult-alg") return suite_mult_alg(config, seed);
  if (name == "distributions") return suite_distributions(config, seed);
  if (name == "functional-eq") return suite_functional_eq(config, seed);
  if (name == "lukacs") return suite_lukacs(config, seed);
  require_suite(name);
  return {};
}

GridSpec config_grid(const RunConfig& config) {
  GridSpec grid;
  grid.n_grid = config.grid_n;
  grid.seed = config.grid_seed.value_or(derive_seed(config.seed.value_or(0), 100));
  grid.tolerance = config.grid_tolerance;
  return grid;
}

OlkinBakerOracles config_oracles(const RunConfig& config, AlgorithmPtr w, const AlgebraDescriptor& alg) {
  const OracleSpec& o = config.oracle;
  if (o.family == "table") return read_oracle_table(o.table, alg);
  if (o.family == "zero") {
    ScalarOracle zero = [](const Element&) { return 0.0; };
    return {zero, zero, zero, zero};
  }
  Element lambda = o.lambda.resolve(alg);
  if (o.family == "wishart-form")
    return forward_oracles(lambda, LogCauchyFn::log_det_power(o.kappa[0]), LogCauchyFn::log_det_power(o.kappa[1]),
                           o.constants, w);
  auto exponent = [&](const std::vector<double>& s, const char* key) {
    if (static_cast<int>(s.size()) != alg.rank())
      throw ConfigError(std::string("oracle.") + key + " needs " + std::to_string(alg.rank()) + " entries");
    return PowerExponent(Eigen::Map<const Eigen::VectorXd>(s.data(), alg.rank()));
  };
  JordanFrame frame = JordanFrame::standard(alg);
  return forward_oracles(lambda, LogCauchyFn::delta_s_log(exponent(o.s_e, "s_e"), frame),
                         LogCauchyFn::delta_s_log(exponent(o.s_f, "s_f"), frame), o.constants, w);
}

json run_decompose(const RunConfig& config) {
  AlgebraDescriptor alg = AlgebraDescriptor::parse(config.algebra);
  AlgorithmPtr w = parse_algorithm(config.algorithm, alg);
  GridSpec grid = config_grid(config);
  OBDecomposition ob = olkin_baker_decompose(config_oracles(config, w, alg), w, alg, grid);
  json j = to_json(ob);
  j["algorithm"] = w->name();
  j["oracle"] = config.oracle.family;
  const OracleSpec& o = config.oracle;
  if (o.family == "wishart-form" || o.family == "riesz-form") {
    json in;
    in["lambda"] = coords_json(o.lambda.resolve(alg));
    if (o.family == "wishart-form") in["kappa"] = o.kappa;
    if (o.family == "riesz-form") {
      in["s_e"] = o.s_e;
      in["s_f"] = o.s_f;
    }
    in["C"] = o.constants;
    j["input"] = in;
  } else if (o.family == "table") {
    j["input"] = {{"table", fs_name(o.table)}};
  }
  j["grid"] = {{"n", grid.n_grid}, {"seed", grid.seed}, {"tolerance", grid.tolerance}};
  return j;
}

std::string samples_csv(const RunConfig& config) {
  AlgebraDescriptor alg = AlgebraDescriptor::parse(config.algebra);
  RieszParams px = config.model_x.resolve(alg, alg.dim_over_rank() + 1.0);
  const std::uint64_t seed = config.seed.value_or(0);
  Rng rng(seed);
  std::vector<Element> draws = sample_riesz(px, config.sample_n, rng);
  std::ostringstream out;
  out << "# conelab samples algebra=" << alg.name() << " dim=" << alg.dim() << " n=" << config.sample_n
      << " seed=" << seed << " family=" << config.model_x.family << "\n";
  const auto labels = alg.coordinate_labels();
  for (std::size_t i = 0; i < labels.size(); ++i) out << (i ? "," : "") << labels[i];
  out << "\n";
  char buf[40];
  for (const auto& x : draws) {
    for (int i = 0; i < alg.dim(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", x[i]);
      out << (i ? "," : "") << buf;
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace conelab
