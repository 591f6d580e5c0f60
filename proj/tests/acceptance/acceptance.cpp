// Acceptance checks.  Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.  Run a subset with e.g. `acceptance 3 7`.

#include "conelab/distributions.hpp"
#include "conelab/error.hpp"
#include "conelab/functional_eq.hpp"
#include "conelab/lukacs.hpp"
#include "conelab/parallel.hpp"
#include "conelab/verification.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <string>

using namespace conelab;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// 1. axioms and Jordan identity, 1e4 triples per algebra, <= 1e-10, <= 30 s
Outcome criterion1() {
  auto t0 = std::chrono::steady_clock::now();
  double worst = 0;
  std::string where;
  for (const auto& alg : AlgebraDescriptor::all_supported()) {
    Rng rng(derive_seed(1, alg.dim() * 100 + alg.rank()));
    double r = check_axioms(alg, 10000, rng).max();
    if (r > worst) worst = r, where = alg.name();
  }
  double t = seconds_since(t0);
  return {worst <= 1e-10 && t <= 30,
          fmt("max residual %.2e at %s (limit 1e-10), %.1f s (limit 30 s)", worst, where.c_str(), t)};
}

// 2. dim formula for every constructible descriptor; Peirce norm identities, 1e3 samples, <= 1e-10
Outcome criterion2() {
  int formula_failures = 0, checked = 0;
  // every descriptor the constructors accept
  using Make = AlgebraDescriptor (*)(int);
  for (Make make : {Make(&AlgebraDescriptor::sym_real), Make(&AlgebraDescriptor::herm_complex),
                    Make(&AlgebraDescriptor::lorentz)}) {
    for (int k = 0; k <= 64; ++k) {
      std::optional<AlgebraDescriptor> alg;
      try {
        alg = make(k);
      } catch (const ConeError&) {
        continue;
      }
      ++checked;
      const int r = alg->rank();
      if (alg->dim() != r + alg->peirce_d() * r * (r - 1) / 2) ++formula_failures;
    }
  }
  double worst = 0;
  std::string where;
  for (const auto& alg : AlgebraDescriptor::all_supported()) {
    Rng rng(derive_seed(2, alg.dim() * 100 + alg.rank()));
    PeirceResiduals p = check_peirce(alg, 1000, rng);
    if (!p.dim_formula) ++formula_failures;
    double r = std::max(p.square, p.product);
    if (r > worst) worst = r, where = alg.name();
  }
  return {formula_failures == 0 && worst <= 1e-10,
          fmt("dim formula failures %d of %d descriptors; max norm-identity residual %.2e at %s (limit 1e-10)",
              formula_failures, checked, worst, where.c_str())};
}

// 3. triangular round trip and Delta_s identities, 1e3 samples, <= 1e-9
Outcome criterion3() {
  double worst = 0;
  std::string where;
  for (const auto& alg : AlgebraDescriptor::all_supported()) {
    Rng rng(derive_seed(3, alg.dim() * 100 + alg.rank()));
    double r = check_triangular(alg, 1000, rng).max();
    if (r > worst) worst = r, where = alg.name();
  }
  return {worst <= 1e-9, fmt("max residual %.2e at %s (limit 1e-9)", worst, where.c_str())};
}

// 4. DDet(w(y)) = (det y)^{dim/r} <= 1e-8; Jacobian FD check <= 1e-6 at 100 points; <= 2 min
Outcome criterion4() {
  auto t0 = std::chrono::steady_clock::now();
  double ddet = 0, jac = 0;
  std::string wd, wj;
  for (const auto& alg : AlgebraDescriptor::all_supported()) {
    for (const auto& w : {make_w1(), make_w2(), make_interp(0.25)}) {
      Rng rng(derive_seed(4, alg.dim() * 100 + alg.rank()));
      JacobianResiduals r = check_jacobian(alg, *w, 100, rng);
      if (r.ddet > ddet) ddet = r.ddet, wd = alg.name() + "/" + w->name();
      if (r.jacobian > jac) jac = r.jacobian, wj = alg.name() + "/" + w->name();
    }
  }
  double t = seconds_since(t0);
  return {ddet <= 1e-8 && jac <= 1e-6 && t <= 120,
          fmt("max DDet residual %.2e at %s (limit 1e-8); max Jacobian residual %.2e at %s (limit 1e-6); %.1f s "
              "(limit 120 s)",
              ddet, wd.c_str(), jac, wj.c_str(), t)};
}

// 5. w-logarithmic residuals and the w1 counterexample
Outcome criterion5() {
  double logdet = 0, delta = 0, counter = std::numeric_limits<double>::infinity();
  std::string where_counter;
  for (const auto& alg : AlgebraDescriptor::all_supported()) {
    Rng rng(derive_seed(5, alg.dim() * 100 + alg.rank()));
    ElementPairs pairs = random_pairs(alg, 200, rng);
    JordanFrame frame = JordanFrame::standard(alg).transformed(random_automorphism_k(alg, rng));
    for (const auto& w : {make_w1(), make_w2(frame), make_interp(0.25, frame)})
      for (double kappa : {1.0, -0.5, 2.5})
        logdet = std::max(logdet, wlog_residual(LogCauchyFn::log_det_power(kappa), *w, pairs));
    Eigen::VectorXd s = Eigen::VectorXd::LinSpaced(alg.rank(), 2.5, 1.0);
    LogCauchyFn ds = LogCauchyFn::delta_s_log(PowerExponent(s), frame);
    delta = std::max(delta, wlog_residual(ds, *make_w2(frame), pairs));
    if (alg.rank() >= 2) {
      double c = wlog_residual(ds, *make_w1(), pairs);
      if (c < counter) counter = c, where_counter = alg.name();
    }
  }
  return {logdet <= 1e-9 && delta <= 1e-9 && counter > 0.01,
          fmt("log det over w1/w2/interp(1/4): %.2e; log Delta_s with w2: %.2e (limit 1e-9); smallest w1 "
              "counterexample residual %.3f at %s (must exceed 0.01)",
              logdet, delta, counter, where_counter.c_str())};
}

// 6. planted Olkin-Baker decompositions on a 2000-point grid, <= 1e-3, <= 1 min per instance
Outcome criterion6() {
  double worst = 0, worst_const = 0, slowest = 0;
  int instances = 0, form_failures = 0;
  std::string where;
  for (const auto& alg : AlgebraDescriptor::all_supported()) {
    Rng rng(derive_seed(6, alg.dim() * 100 + alg.rank()));
    Element lambda = random_element(alg, rng, {0.5, 2.0}) * -1.0;
    const std::array<double, 4> constants{0.3, -0.2, 0.5, -0.4};
    JordanFrame frame = JordanFrame::standard(alg);
    for (int family = 0; family < 2; ++family) {
      GridSpec grid;
      grid.n_grid = 2000;
      grid.seed = derive_seed(60 + family, alg.dim() * 100 + alg.rank());
      Eigen::VectorXd se = Eigen::VectorXd::LinSpaced(alg.rank(), 0.6, 1.8);
      Eigen::VectorXd sf = Eigen::VectorXd::LinSpaced(alg.rank(), 2.2, 1.1);
      if (alg.rank() == 1) se[0] = 0.9, sf[0] = 1.7;
      AlgorithmPtr w = family == 0 ? make_w1() : make_w2(frame);
      LogCauchyFn e = family == 0 ? LogCauchyFn::log_det_power(0.7) : LogCauchyFn::delta_s_log(PowerExponent(se), frame);
      LogCauchyFn f = family == 0 ? LogCauchyFn::log_det_power(1.3) : LogCauchyFn::delta_s_log(PowerExponent(sf), frame);
      auto t0 = std::chrono::steady_clock::now();
      OBDecomposition ob = olkin_baker_decompose(forward_oracles(lambda, e, f, constants, w), w, alg, grid);
      slowest = std::max(slowest, seconds_since(t0));
      ++instances;
      double err = (ob.lambda.coords() - lambda.coords()).cwiseAbs().maxCoeff();
      auto exponents = [&](const LogCauchyFn& g) -> std::optional<Eigen::VectorXd> {
        if (g.form == DeclaredForm::log_det_power) return Eigen::VectorXd::Constant(alg.rank(), g.kappa);
        if (g.form == DeclaredForm::delta_s_log && g.s) return g.s->values();
        return std::nullopt;
      };
      auto ge = exponents(ob.e_fn), gf = exponents(ob.f_fn);
      if (!ge || !gf) {
        ++form_failures;
        continue;
      }
      Eigen::VectorXd want_e = family == 0 ? Eigen::VectorXd::Constant(alg.rank(), 0.7) : se;
      Eigen::VectorXd want_f = family == 0 ? Eigen::VectorXd::Constant(alg.rank(), 1.3) : sf;
      err = std::max({err, (*ge - want_e).cwiseAbs().maxCoeff(), (*gf - want_f).cwiseAbs().maxCoeff()});
      const auto& c = ob.constants;
      double ident = std::abs(c[0] + c[1] - c[2] - c[3]);
      for (int k = 0; k < 4; ++k) err = std::max(err, std::abs(c[k] - constants[k]));
      if (err > worst) worst = err, where = alg.name() + (family == 0 ? "/w1" : "/w2");
      worst_const = std::max(worst_const, ident);
    }
  }
  return {worst <= 1e-3 && worst_const <= 1e-3 && form_failures == 0 && slowest <= 60,
          fmt("%d instances; max parameter error %.2e at %s (limit 1e-3); max |C1+C2-C3-C4| %.2e (limit 1e-3); "
              "unidentified forms %d; slowest %.2f s (limit 60 s)",
              instances, worst, where.c_str(), worst_const, form_failures, slowest)};
}

// 7. independence of U and V on sym_real(2), n = 5000, 50 repetitions, >= 95% correct, <= 5 min
Outcome criterion7() {
  auto t0 = std::chrono::steady_clock::now();
  auto alg = AlgebraDescriptor::sym_real(2);
  JordanFrame frame = JordanFrame::standard(alg);
  Element e = Element::identity(alg);
  Element a = e;
  Element a_shift = a + e * 0.5;
  struct Case {
    const char* name;
    RieszParams x, y;
    AlgorithmPtr w;
    bool independent;
  };
  const Case cases[] = {
      {"wishart/w1", WishartParams{2, a}.as_riesz(), WishartParams{3, a}.as_riesz(), make_w1(), true},
      {"riesz/w2", RieszParams{{3, 2}, a, frame}, RieszParams{{2.5, 1.5}, a, frame}, make_w2(frame), true},
      {"wishart/w1 a'=a+e/2", WishartParams{2, a}.as_riesz(), WishartParams{3, a_shift}.as_riesz(), make_w1(), false},
      {"riesz/w2 a'=a+e/2", RieszParams{{3, 2}, a, frame}, RieszParams{{2.5, 1.5}, a_shift, frame}, make_w2(frame),
       false},
  };
  const int reps = 50;
  bool pass = true;
  std::string detail;
  for (std::size_t ci = 0; ci < std::size(cases); ++ci) {
    const Case& c = cases[ci];
    int correct = 0;
    for (int r = 0; r < reps; ++r) {
      Rng rng(derive_seed(700 + ci, r));
      auto xs = sample_riesz(c.x, 5000, rng);
      auto ys = sample_riesz(c.y, 5000, rng);
      double p = independence_test(xs, ys, *c.w, 199, derive_seed(7000 + ci, r)).p_value;
      if ((p > 0.01) == c.independent) ++correct;
    }
    pass = pass && correct >= 0.95 * reps;
    detail += fmt("%s%s %s %d/%d", detail.empty() ? "" : "; ", c.name, c.independent ? "p>0.01" : "p<0.01", correct,
                  reps);
  }
  double t = seconds_since(t0);
  pass = pass && t <= 300;
  return {pass, detail + fmt(" (need >= 95%%); %.0f s (limit 300 s)", t)};
}

// 8. Wishart mean within 4 SE at n = 1e5; rank-2 Riesz density integrates to 1 within 1e-3
Outcome criterion8() {
  double worst_z = 0;
  std::string where;
  for (const auto& alg : {AlgebraDescriptor::sym_real(2), AlgebraDescriptor::sym_real(3),
                          AlgebraDescriptor::herm_complex(2), AlgebraDescriptor::lorentz(4)}) {
    Rng rng(derive_seed(8, alg.dim()));
    Element a = random_element(alg, rng, {0.5, 3.0});
    const double p = alg.dim_over_rank() + 0.7;
    auto draws = sample_wishart(WishartParams{p, a}, 100000, rng);
    // independent oracle for the real case: Eigen's matrix inverse
    Element expect = alg.kind() == AlgebraKind::sym_real
                         ? from_real_matrix(alg, to_real_matrix(a).inverse() * p)
                         : inverse(a) * (p / alg.trace_scale());
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(alg.dim()), sq = Eigen::VectorXd::Zero(alg.dim());
    for (const auto& x : draws) mean += x.coords();
    mean /= draws.size();
    for (const auto& x : draws) sq += (x.coords() - mean).cwiseAbs2();
    Eigen::VectorXd se = (sq / (draws.size() - 1.0) / draws.size()).cwiseSqrt();
    for (int k = 0; k < alg.dim(); ++k) {
      if (se[k] == 0) continue;
      double z = std::abs(mean[k] - expect[k]) / se[k];
      if (z > worst_z) worst_z = z, where = alg.name();
    }
  }
  double worst_mass = 0;
  std::string where_mass;
  for (const auto& alg : {AlgebraDescriptor::sym_real(2), AlgebraDescriptor::herm_complex(2),
                          AlgebraDescriptor::lorentz(2), AlgebraDescriptor::lorentz(3)}) {
    Rng rng(derive_seed(80, alg.dim()));
    JordanFrame frame = JordanFrame::standard(alg);
    const double d = alg.peirce_d();
    RieszParams params{{d / 2 + 2.3, d / 2 + 0.8}, random_element(alg, rng, {0.5, 2.0}), frame};
    double mass = cone_integral([&](const Element& x) { return riesz_logpdf(params, x); }, frame);
    if (std::abs(mass - 1) >= worst_mass) worst_mass = std::abs(mass - 1), where_mass = alg.name();
  }
  return {worst_z <= 4 && worst_mass <= 1e-3,
          fmt("max mean z-score %.2f at %s (limit 4); max |mass - 1| %.2e at %s (limit 1e-3)", worst_z, where.c_str(),
              worst_mass, where_mass.c_str())};
}

// 9. K-invariance of U: Wishart/w1 not rejected, Riesz s = (3,1)/w2 rejected, n = 5000, 20 rotations
Outcome criterion9() {
  auto alg = AlgebraDescriptor::sym_real(2);
  JordanFrame frame = JordanFrame::standard(alg);
  Element e = Element::identity(alg);
  auto wish = k_invariant_quotient_check(WishartParams{2, e}.as_riesz(), WishartParams{3, e}.as_riesz(), *make_w1(),
                                         5000, 20, 199, 91);
  RieszParams r{{3, 1}, e, frame};
  auto riesz = k_invariant_quotient_check(r, r, *make_w2(frame), 5000, 20, 199, 92);
  return {wish.combined_p_value > 0.01 && riesz.combined_p_value < 0.01,
          fmt("Wishart/w1 combined p = %.3g (must exceed 0.01); Riesz s=(3,1)/w2 combined p = %.3g (must be below "
              "0.01)",
              wish.combined_p_value, riesz.combined_p_value)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// 10. two CLI runs with the same config and seed give byte-identical reports
Outcome criterion10() {
  fs::path dir = fs::temp_directory_path() / "conelab_acceptance_cli";
  fs::remove_all(dir);
  fs::create_directories(dir);
  std::ofstream(dir / "config.json") << R"j({
  "algebra": "sym_real(2)",
  "algorithm": "w2",
  "suites": ["algebra-axioms", "peirce", "triangular", "mult-alg", "distributions", "functional-eq", "lukacs"],
  "seed": 20261015,
  "model_x": {"family": "riesz", "s": [3, 2], "a": 1},
  "model_y": {"family": "riesz", "s": [2.5, 1.5], "a": 1}
})j";
  int status[2];
  for (int i = 0; i < 2; ++i) {
    std::string cmd = std::string(CONELAB_CLI) + " run " + (dir / "config.json").string() + " --out " +
                      (dir / ("run" + std::to_string(i))).string() + " >/dev/null 2>&1";
    status[i] = std::system(cmd.c_str());
  }
  int files = 0, differing = 0;
  for (const auto& entry : fs::directory_iterator(dir / "run0")) {
    ++files;
    fs::path other = dir / "run1" / entry.path().filename();
    if (!fs::exists(other) || slurp(entry.path()) != slurp(other)) ++differing;
  }
  int other_files = std::distance(fs::directory_iterator(dir / "run1"), fs::directory_iterator());
  bool pass = status[0] == 0 && status[1] == 0 && files == 8 && other_files == files && differing == 0;
  return {pass, fmt("exit statuses %d/%d; %d report files, %d differ", status[0], status[1], files, differing)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::function<Outcome()> criteria[] = {criterion1, criterion2, criterion3, criterion4, criterion5,
                                               criterion6, criterion7, criterion8, criterion9, criterion10};
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));
  bool all = true;
  for (int k = 1; k <= 10; ++k) {
    if (!selected.empty() && !selected.count(k)) continue;
    Outcome o;
    try {
      o = criteria[k - 1]();
    } catch (const std::exception& ex) {
      o = {false, std::string("exception: ") + ex.what()};
    }
    std::printf("criterion %2d: %s  %s\n", k, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
