#include "conelab/error.hpp"
#include "conelab/functional_eq.hpp"
#include "conelab/peirce.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "support.hpp"

using namespace conelab;
using testing::maxdiff;
using testing::sym;

namespace {

const AlgebraDescriptor S2 = AlgebraDescriptor::sym_real(2);

std::vector<AlgebraDescriptor> sample_algebras() {
  return {AlgebraDescriptor::sym_real(1), S2, AlgebraDescriptor::sym_real(3), AlgebraDescriptor::herm_complex(2),
          AlgebraDescriptor::lorentz(2), AlgebraDescriptor::lorentz(4)};
}

GridSpec small_grid(int n = 300) {
  GridSpec g;
  g.n_grid = n;
  g.diagnostic_points = 50;
  return g;
}

}  // namespace

TEST_CASE("wlog_residual: log det solves the equation for every algorithm") {
  Rng rng(1);
  for (const auto& alg : sample_algebras()) {
    auto pairs = random_pairs(alg, 100, rng);
    auto f = LogCauchyFn::log_det_power(1.7);
    CHECK(wlog_residual(f, *make_w1(), pairs) <= 1e-9);
    CHECK(wlog_residual(f, *make_w2(), pairs) <= 1e-9);
    CHECK(wlog_residual(f, *make_interp(0.25), pairs) <= 1e-9);
    CHECK(wlog_residual(f, *make_kext(make_w1(), random_automorphism_k(alg, rng), "k"), pairs) <= 1e-9);
  }
}

TEST_CASE("wlog_residual: log Delta_s with w2 and the w1 counterexample") {
  Rng rng(2);
  for (const auto& alg : {S2, AlgebraDescriptor::sym_real(3), AlgebraDescriptor::herm_complex(3),
                          AlgebraDescriptor::lorentz(3)}) {
    auto pairs = random_pairs(alg, 100, rng);
    JordanFrame frame = JordanFrame::standard(alg);
    Eigen::VectorXd s = Eigen::VectorXd::LinSpaced(alg.rank(), 2.0, 0.5);
    auto f = LogCauchyFn::delta_s_log(PowerExponent(s), frame);
    CHECK(wlog_residual(f, *make_w2(frame), pairs) <= 1e-9);
    CHECK(wlog_residual(f, *make_w1(), pairs) > 0.01);
    // a rotated frame needs the matching triangular group
    JordanFrame rotated = frame.transformed(random_automorphism_k(alg, rng));
    auto g = LogCauchyFn::delta_s_log(PowerExponent(s), rotated);
    CHECK(wlog_residual(g, *make_w2(rotated), pairs) <= 1e-9);
    CHECK(wlog_residual(g, *make_w2(frame), pairs) > 0.01);
  }
}

TEST_CASE("w-logarithmic consequences: f(e) = 0 and f(sx) = f(x) + f(se)") {
  Rng rng(3);
  JordanFrame frame = JordanFrame::standard(S2);
  auto f = LogCauchyFn::delta_s_log({1.5, -0.5}, frame);
  auto pairs = random_pairs(S2, 50, rng);
  double eps = wlog_residual(f, *make_w2(frame), pairs);
  Element e = Element::identity(S2);
  CHECK(std::abs(f(e)) <= eps + 1e-15);
  std::uniform_real_distribution<double> U(0.1, 10);
  for (const auto& [x, y] : pairs) {
    double s = U(rng);
    CHECK(std::abs(f(x * s) - f(x) - f(e * s)) <= 2 * eps + 1e-12);
  }
}

TEST_CASE("Remark: k-extended algorithms share the w-logarithmic residual") {
  Rng rng(4);
  for (const auto& alg : {S2, AlgebraDescriptor::herm_complex(2), AlgebraDescriptor::lorentz(3)}) {
    JordanFrame frame = JordanFrame::standard(alg);
    auto pairs = random_pairs(alg, 200, rng);
    Eigen::VectorXd s = Eigen::VectorXd::LinSpaced(alg.rank(), 1.0, 3.0);
    for (const auto& f : {LogCauchyFn::log_det_power(0.8), LogCauchyFn::delta_s_log(PowerExponent(s), frame)}) {
      for (const auto& w : {make_w1(), make_w2(frame)}) {
        auto wk = make_kext(w, random_automorphism_k(alg, rng), "k");
        double base = wlog_residual(f, *w, pairs);
        double ext = wlog_residual(f, *wk, pairs);
        // both vanish or both stay away from zero
        CHECK((base <= 1e-9) == (ext <= 1e-9));
      }
    }
  }
}

TEST_CASE("pexider_fit recovers exact data") {
  Rng rng(5);
  for (const auto& alg : sample_algebras()) {
    Element lam = random_gaussian_element(alg, rng);
    const double alpha = 0.7, beta = -1.9;
    std::vector<PexiderSample> samples;
    for (const auto& [x, y] : random_pairs(alg, alg.dim() + 3, rng))
      samples.push_back({x, y, inner(lam, x) + alpha, inner(lam, y) + beta, inner(lam, x + y) + alpha + beta});
    PexiderFit fit = pexider_fit(samples);
    CHECK(maxdiff(fit.lambda, lam) <= 1e-8);
    CHECK(fit.alpha == doctest::Approx(alpha).epsilon(1e-8));
    CHECK(fit.beta == doctest::Approx(beta).epsilon(1e-8));
    CHECK(fit.residual <= 1e-8);
  }
}

TEST_CASE("pexider_fit: zeros, perturbations and rank deficiency") {
  Rng rng(6);
  std::vector<PexiderSample> zeros, bent;
  for (const auto& [x, y] : random_pairs(S2, 40, rng)) {
    zeros.push_back({x, y, 0, 0, 0});
    double q = 0.05 * inner(x + y, x + y);
    bent.push_back({x, y, inner(x, x), 1.0, q});
  }
  PexiderFit z = pexider_fit(zeros);
  CHECK(z.lambda.coords().cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(std::abs(z.alpha) <= 1e-12);
  CHECK(std::abs(z.beta) <= 1e-12);
  CHECK(pexider_fit(bent).residual > 1e-3);
  std::vector<PexiderSample> few(zeros.begin(), zeros.begin() + 1);
  CHECK_THROWS_AS(pexider_fit(few), FitError);
  CHECK_THROWS_AS(pexider_fit({}), FitError);
}

TEST_CASE("richardson_limit") {
  std::vector<double> ladder{0.5, 0.1, 0.02, 0.004};
  auto [q, uq] = richardson_limit([](double a) { return 1 + 2 * a - 3 * a * a; }, ladder);
  CHECK(q == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(uq <= 1e-12);
  auto [l, ul] = richardson_limit([](double a) { return std::log1p(a) + 4; }, ladder);
  // leading error term: f'''(0)/6 * product of the last three ladder points
  CHECK(std::abs(l - 4) == doctest::Approx(0.1 * 0.02 * 0.004 / 3).epsilon(0.1));
  CHECK(ul > std::abs(l - 4));
  CHECK_THROWS(richardson_limit([](double a) { return a; }, {0.5, 0.1}));
}

TEST_CASE("identify_form reads off log-power forms") {
  Rng rng(7);
  JordanFrame frame = JordanFrame::standard(AlgebraDescriptor::sym_real(3));
  std::vector<Element> pts;
  for (int i = 0; i < 50; ++i) pts.push_back(random_element(frame.algebra(), rng, {}));
  auto [ld, r1] = identify_form(LogCauchyFn::log_det_power(-0.4).evaluator, pts, frame);
  CHECK(ld.form == DeclaredForm::log_det_power);
  CHECK(ld.kappa == doctest::Approx(-0.4).epsilon(1e-9));
  CHECK(r1 <= 1e-9);
  auto [ds, r2] = identify_form(LogCauchyFn::delta_s_log({2, 1, 0.5}, frame).evaluator, pts, frame);
  REQUIRE(ds.form == DeclaredForm::delta_s_log);
  CHECK((ds.s->values() - Eigen::Vector3d(2, 1, 0.5)).cwiseAbs().maxCoeff() <= 1e-9);
  auto [cu, r3] = identify_form([](const Element& x) { return trace(x); }, pts, frame);
  CHECK(cu.form == DeclaredForm::custom);
  CHECK(r3 > 1e-3);
}

TEST_CASE("Olkin-Baker: log det family with w1 is recovered") {
  for (const auto& alg : sample_algebras()) {
    Element lambda = Element::identity(alg) * -1.0;
    auto e = LogCauchyFn::log_det_power(0.7), f = LogCauchyFn::log_det_power(1.3);
    std::array<double, 4> C{0.2, -0.4, 0.5, -0.7};
    auto w = make_w1();
    auto oracles = forward_oracles(lambda, e, f, C, w);
    OBDecomposition ob = olkin_baker_decompose(oracles, w, alg, small_grid());
    CAPTURE(alg.name());
    CHECK(maxdiff(ob.lambda, lambda) <= 1e-6);
    REQUIRE(ob.e_fn.form == DeclaredForm::log_det_power);
    REQUIRE(ob.f_fn.form == DeclaredForm::log_det_power);
    CHECK(ob.e_fn.kappa == doctest::Approx(0.7).epsilon(1e-6));
    CHECK(ob.f_fn.kappa == doctest::Approx(1.3).epsilon(1e-6));
    // k1 = sum of the log-scale exponents: e(sx) = e(x) + kappa r log s
    CHECK(ob.k1 == doctest::Approx(0.7 * alg.rank()).epsilon(1e-6));
    CHECK(ob.k2 == doctest::Approx(1.3 * alg.rank()).epsilon(1e-6));
    for (int i = 0; i < 4; ++i) CHECK(ob.constants[i] == doctest::Approx(C[i]).epsilon(1e-6));
    CHECK(std::abs(ob.diagnostics.constant_identity) <= 1e-6);
    CHECK(ob.diagnostics.reconstruction_residual <= 1e-6);
    CHECK(ob.diagnostics.e_wlog_residual <= 1e-8);
    CHECK(std::abs(ob.diagnostics.limit_residual) <= 1e-4);
  }
}

TEST_CASE("Olkin-Baker: Riesz family with w2 is recovered on held-out points") {
  Rng rng(8);
  for (const auto& alg : {S2, AlgebraDescriptor::herm_complex(2), AlgebraDescriptor::sym_real(3),
                          AlgebraDescriptor::lorentz(3)}) {
    JordanFrame frame = JordanFrame::standard(alg);
    Element lambda = -random_element(alg, rng, {});
    Eigen::VectorXd se = Eigen::VectorXd::LinSpaced(alg.rank(), 0.5, 1.5);
    Eigen::VectorXd sf = Eigen::VectorXd::LinSpaced(alg.rank(), 2.0, 1.0);
    auto e = LogCauchyFn::delta_s_log(PowerExponent(se), frame);
    auto f = LogCauchyFn::delta_s_log(PowerExponent(sf), frame);
    auto w = make_w2(frame);
    OBDecomposition ob = olkin_baker_decompose(forward_oracles(lambda, e, f, {1, 1, 3, -1}, w), w, alg, small_grid());
    CAPTURE(alg.name());
    CHECK(maxdiff(ob.lambda, lambda) <= 1e-6);
    REQUIRE(ob.e_fn.form == DeclaredForm::delta_s_log);
    REQUIRE(ob.f_fn.form == DeclaredForm::delta_s_log);
    CHECK((ob.e_fn.s->values() - se).cwiseAbs().maxCoeff() <= 1e-6);
    CHECK((ob.f_fn.s->values() - sf).cwiseAbs().maxCoeff() <= 1e-6);
    for (int i = 0; i < 20; ++i) {
      Element x = random_element(alg, rng, {});
      CHECK(std::abs(ob.e_fn(x) - e(x)) <= 1e-6);
      CHECK(std::abs(ob.f_fn(x) - f(x)) <= 1e-6);
    }
  }
}

TEST_CASE("Olkin-Baker: zero oracles give the zero decomposition") {
  ScalarOracle zero = [](const Element&) { return 0.0; };
  OBDecomposition ob = olkin_baker_decompose({zero, zero, zero, zero}, make_w1(), S2, small_grid(100));
  CHECK(ob.lambda.coords().cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(std::abs(ob.k1) <= 1e-12);
  CHECK(std::abs(ob.k2) <= 1e-12);
  for (double c : ob.constants) CHECK(std::abs(c) <= 1e-12);
  CHECK(ob.e_fn.form == DeclaredForm::log_det_power);
  CHECK(std::abs(ob.e_fn.kappa) <= 1e-12);
  CHECK(std::abs(ob.f_fn.kappa) <= 1e-12);
}

TEST_CASE("Olkin-Baker: inconsistent input and non-homogeneous algorithms are rejected") {
  auto w = make_w1();
  auto good = forward_oracles(-Element::identity(S2), LogCauchyFn::log_det_power(1), LogCauchyFn::log_det_power(2),
                              {0, 0, 0, 0}, w);
  auto bad = good;
  bad.d = [d = good.d](const Element& u) { return d(u) + 0.01 * inner(u, u); };
  CHECK_THROWS_AS(olkin_baker_decompose(bad, w, S2, small_grid(100)), InconsistencyError);
  CHECK_THROWS_AS(olkin_baker_decompose(good, make_piecewise(), S2, small_grid(100)), ValidationError);
  CHECK_THROWS_AS(forward_oracles(-Element::identity(S2), LogCauchyFn::zero(), LogCauchyFn::zero(), {1, 0, 0, 0}, w),
                  ValidationError);
  // a pair satisfying the equation but whose c carries an extra additive
  // quadratic term violates the scaling step as well
  auto quad = good;
  quad.c = [c = good.c](const Element& x) { return c(x) + 1e-3 * inner(x, x); };
  CHECK_THROWS_AS(olkin_baker_decompose(quad, w, S2, small_grid(100)), InconsistencyError);
}

TEST_CASE("Olkin-Baker: JSON serialization") {
  auto w = make_w1();
  auto ob = olkin_baker_decompose(
      forward_oracles(-Element::identity(S2), LogCauchyFn::log_det_power(0.7), LogCauchyFn::log_det_power(1.3),
                      {0, 0, 0, 0}, w),
      w, S2, small_grid(100));
  auto j = to_json(ob);
  CHECK(j["algebra"] == "sym_real(2)");
  CHECK(j["lambda"].size() == 3);
  CHECK(j["e_fn"]["form"] == "log_det_power");
  CHECK(j["f_fn"]["kappa"].get<double>() == doctest::Approx(1.3));
  CHECK(j["C"].size() == 4);
  CHECK(j["residuals"].contains("constant_identity"));
}

TEST_CASE("tabulated oracles reproduce the functional decomposition") {
  auto w = make_w1();
  GridSpec grid = small_grid(60);
  grid.diagnostic_points = 10;
  auto oracles = forward_oracles(-Element::identity(S2), LogCauchyFn::log_det_power(0.7),
                                 LogCauchyFn::log_det_power(1.3), {0.1, 0.2, 0.3, 0.0}, w);
  auto queries = oracle_queries(w, S2, grid);
  CHECK(queries.size() > 60 * 4);
  auto path = (std::filesystem::temp_directory_path() / "conelab_oracle_table.csv").string();
  write_oracle_table(path, queries, &oracles);
  auto table = read_oracle_table(path, S2);
  OBDecomposition direct = olkin_baker_decompose(oracles, w, S2, grid);
  OBDecomposition tab = olkin_baker_decompose(table, w, S2, grid);
  CHECK(maxdiff(direct.lambda, tab.lambda) <= 1e-12);
  CHECK(tab.e_fn.kappa == doctest::Approx(direct.e_fn.kappa).epsilon(1e-12));
  CHECK(tab.constants[3] == doctest::Approx(direct.constants[3]).epsilon(1e-12));
  // a different grid asks for points the table does not have
  GridSpec other = grid;
  other.seed = 99;
  CHECK_THROWS_AS(olkin_baker_decompose(table, w, S2, other), ConfigError);
  std::remove(path.c_str());
}

TEST_CASE("k_invariance_check") {
  Rng rng(9);
  for (const auto& alg : sample_algebras()) {
    auto rep = k_invariance_check(LogCauchyFn::log_det_power(1.0), alg, rng, 100);
    CHECK(rep.samples == 100);
    CHECK(rep.k_residual <= 1e-9);
    CHECK(rep.det_residual <= 1e-9);
  }
  auto rep = k_invariance_check(LogCauchyFn::delta_s_log({2, 1}, JordanFrame::standard(S2)), S2, rng, 100);
  CHECK(rep.k_residual > 0.01);
  CHECK(rep.det_residual > 0.01);
  // at a fixed rotated element
  Element x = sym({{2, 0}, {0, 0.5}});
  Endomorphism k = random_automorphism_k(S2, rng);
  auto f = LogCauchyFn::delta_s_log({2, 1}, JordanFrame::standard(S2));
  CHECK(std::abs(f(k.apply(x)) - f(x)) > 0.01);
}
