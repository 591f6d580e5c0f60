#include "doctest.h"
#include "support.hpp"

#include "conelab/distributions.hpp"
#include "conelab/error.hpp"
#include "conelab/peirce.hpp"
#include "conelab/stats.hpp"

#include <algorithm>
#include <functional>
#include <random>

#include <cmath>

using namespace conelab;
using testing::lor;
using testing::maxdiff;
using testing::sym;

namespace {

Element mean_of(const std::vector<Element>& xs) {
  Element m = Element::zero(xs.front().algebra());
  for (const auto& x : xs) m += x;
  return (1.0 / xs.size()) * m;
}

Eigen::VectorXd stderr_of(const std::vector<Element>& xs, const Element& mean) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(mean.dim());
  for (const auto& x : xs) v += (x.coords() - mean.coords()).cwiseAbs2();
  return (v / (xs.size() - 1.0) / xs.size()).cwiseSqrt();
}

// E[X] = -grad_theta log Delta_s(theta^{-1}) at theta = a, by central differences.
Element riesz_mean_oracle(const RieszParams& p) {
  const auto& alg = p.a.algebra();
  Eigen::VectorXd g(alg.dim());
  const double h = 1e-5;
  for (int k = 0; k < alg.dim(); ++k) {
    Element dp = p.a + h * Element::basis(alg, k);
    Element dm = p.a - h * Element::basis(alg, k);
    g[k] = -(log_generalized_power(inverse(dp), p.s, p.frame) - log_generalized_power(inverse(dm), p.s, p.frame)) /
           (2 * h);
  }
  return {alg, g};
}

}  // namespace

TEST_CASE("gamma function of the cone") {
  auto s1 = AlgebraDescriptor::sym_real(1);
  CHECK(gamma_cone({3.5}, s1) == doctest::Approx(std::tgamma(3.5)));
  auto s2 = AlgebraDescriptor::sym_real(2);
  for (double p : {1.0, 2.0, 3.7}) {
    CHECK(gamma_cone({p, p}, s2) ==
          doctest::Approx(std::sqrt(2 * M_PI) * std::tgamma(p) * std::tgamma(p - 0.5)).epsilon(1e-12));
  }
  CHECK(gamma_cone({2, 2}, s2) == doctest::Approx(2.2214414690791831).epsilon(1e-12));
  CHECK_THROWS_AS(gamma_cone({2, 0.5}, s2), DomainError);
  auto h3 = AlgebraDescriptor::herm_complex(3);
  CHECK_THROWS_AS(gamma_cone({3, 3, 2}, h3), DomainError);
  CHECK_NOTHROW(gamma_cone({3, 3, 2.1}, h3));
}

TEST_CASE("densities") {
  auto s1 = AlgebraDescriptor::sym_real(1);
  Element a1(s1, Eigen::VectorXd::Constant(1, 1.7));
  RieszParams r1{PowerExponent{2.5}, a1, JordanFrame::standard(s1)};
  for (double x : {0.1, 1.0, 4.0}) {
    double expect = 2.5 * std::log(1.7) + 1.5 * std::log(x) - 1.7 * x - std::lgamma(2.5);
    CHECK(riesz_logpdf(r1, Element(s1, Eigen::VectorXd::Constant(1, x))) == doctest::Approx(expect).epsilon(1e-13));
  }

  Rng rng(51);
  for (const auto& alg : AlgebraDescriptor::all_supported()) {
    Element a = random_element(alg, rng, {0.5, 2.0, true});
    double p = alg.dim_over_rank() + 0.3;
    WishartParams wp{p, a};
    Element x = random_element(alg, rng, {});
    double closed = p * std::log(det(a)) - log_gamma_cone(PowerExponent::constant(alg.rank(), p), alg) +
                    (p - alg.dim_over_rank()) * std::log(det(x)) - inner(a, x) -
                    (0.5 * alg.dim() - alg.rank() * p) * std::log(alg.trace_scale());
    CHECK(std::abs(wishart_logpdf(wp, x) - closed) < 1e-12 * (1 + std::abs(closed)));
    CHECK(std::abs(wishart_logpdf(wp, x) - riesz_logpdf(wp.as_riesz(), x)) < 1e-12 * (1 + std::abs(closed)));
    CHECK(std::isinf(wishart_logpdf(wp, -x)));
  }
  CHECK_THROWS_AS(wishart_logpdf({1.0, Element::identity(AlgebraDescriptor::sym_real(3))},
                                 Element::identity(AlgebraDescriptor::sym_real(3))),
                  DomainError);
}

TEST_CASE("triangular equivariance of the Riesz density") {
  Rng rng(52);
  for (auto alg : {AlgebraDescriptor::sym_real(3), AlgebraDescriptor::herm_complex(2), AlgebraDescriptor::lorentz(4)}) {
    JordanFrame f = JordanFrame::standard(alg).transformed(random_automorphism_k(alg, rng));
    Eigen::VectorXd s(alg.rank());
    for (int j = 0; j < alg.rank(); ++j) s[j] = 0.5 * j * alg.peirce_d() + 0.7 + 0.4 * j;
    RieszParams p{PowerExponent(s), random_element(alg, rng, {0.5, 2, true}), f};
    for (int rep = 0; rep < 5; ++rep) {
      TriangularElement t = triangular_decompose(random_element(alg, rng, {0.5, 2, true}), f);
      Element y = random_element(alg, rng, {0.5, 2, true});
      RieszParams pulled{p.s, t.apply_adjoint(p.a), f};
      double lhs = riesz_logpdf(p, t.apply(y));
      double rhs = riesz_logpdf(pulled, y) - std::log(as_endomorphism(t).ddet());
      CHECK(std::abs(lhs - rhs) < 1e-8 * (1 + std::abs(lhs)));
    }
  }
}

TEST_CASE("normalization by quadrature") {
  auto s2 = AlgebraDescriptor::sym_real(2);
  WishartParams w{2.0, Element::identity(s2)};
  DensityModel wm = wishart_model(w, nullptr);
  CHECK(cone_integral([&](const Element& x) { return wm.logpdf(x); }, JordanFrame::standard(s2)) ==
        doctest::Approx(1.0).epsilon(1e-4));

  Rng rng(53);
  auto check_riesz = [&](const AlgebraDescriptor& alg, PowerExponent s) {
    CAPTURE(alg.name());
    Element a = random_element(alg, rng, {0.5, 2.0, true});
    JordanFrame f = JordanFrame::standard(alg).transformed(random_automorphism_k(alg, rng));
    DensityModel m = riesz_model({s, a, f}, nullptr);
    CHECK(cone_integral([&](const Element& x) { return m.logpdf(x); }, f) == doctest::Approx(1.0).epsilon(1e-4));
  };
  check_riesz(AlgebraDescriptor::sym_real(1), {1.5});
  check_riesz(AlgebraDescriptor::herm_complex(1), {0.8});
  check_riesz(s2, {3.0, 1.0});
  check_riesz(s2, {1.2, 2.5});
  check_riesz(AlgebraDescriptor::lorentz(2), {2.0, 1.0});
  check_riesz(AlgebraDescriptor::lorentz(3), {1.5, 2.5});
  check_riesz(AlgebraDescriptor::herm_complex(2), {2.5, 1.8});
  CHECK_THROWS_AS(cone_integral([](const Element&) { return 0.0; }, JordanFrame::standard(AlgebraDescriptor::sym_real(3))),
                  ValidationError);
}

TEST_CASE("sampler moments") {
  auto s1 = AlgebraDescriptor::sym_real(1);
  Rng rng(54);
  RieszParams g{PowerExponent{2.5}, Element(s1, Eigen::VectorXd::Constant(1, 2.0)), JordanFrame::standard(s1)};
  auto xs = sample_riesz(g, 20000, rng);
  Element m = mean_of(xs);
  CHECK(std::abs(m[0] - 1.25) < 3 * std::sqrt(2.5) / 2.0 / std::sqrt(20000.0));

  Rng r1(3), r2(3);
  auto s2 = AlgebraDescriptor::sym_real(2);
  WishartParams w{2.0, sym({{2, 0.5}, {0.5, 1}})};
  CHECK(maxdiff(sample_wishart(w, 5, r1).back(), sample_wishart(w, 5, r2).back()) == 0.0);

  auto check_mean = [&](const RieszParams& p, const Element& expect, int n) {
    CAPTURE(p.a.algebra().name());
    auto draws = sample_riesz(p, n, rng);
    Element mu = mean_of(draws);
    Eigen::VectorXd se = stderr_of(draws, mu);
    for (int k = 0; k < mu.dim(); ++k) {
      CAPTURE(k);
      CHECK(std::abs(mu[k] - expect[k]) < 4.5 * se[k] + 1e-12);
    }
    for (const auto& d : draws) REQUIRE(in_cone(d));
  };
  // Wishart: E X = (p / c) a^{-1}
  for (auto alg : {s2, AlgebraDescriptor::herm_complex(3), AlgebraDescriptor::lorentz(3)}) {
    Element a = random_element(alg, rng, {0.5, 2, true});
    WishartParams wp{alg.dim_over_rank() + 0.5, a};
    check_mean(wp.as_riesz(), (wp.p / alg.trace_scale()) * inverse(a), 20000);
  }
  // Riesz: E X = -grad log Delta_s(theta^{-1}) at theta = a
  for (auto alg : {s2, AlgebraDescriptor::sym_real(3), AlgebraDescriptor::herm_complex(2), AlgebraDescriptor::lorentz(4)}) {
    JordanFrame f = JordanFrame::standard(alg).transformed(random_automorphism_k(alg, rng));
    Eigen::VectorXd s(alg.rank());
    for (int j = 0; j < alg.rank(); ++j) s[j] = 0.5 * j * alg.peirce_d() + 2.0 - 0.6 * j;
    RieszParams p{PowerExponent(s), random_element(alg, rng, {0.5, 2, true}), f};
    check_mean(p, riesz_mean_oracle(p), 20000);
  }
}

TEST_CASE("domain D") {
  auto s2 = AlgebraDescriptor::sym_real(2);
  CHECK(in_domain_D(0.5 * Element::identity(s2)));
  CHECK_FALSE(in_domain_D(Element::identity(s2)));
  CHECK(in_domain_D(sym({{0.6, 0.3}, {0.3, 0.6}})));
  CHECK_FALSE(in_domain_D(sym({{0.6, 0.5}, {0.5, 0.6}})));
  CHECK(in_domain_D(lor({0.5, 0.2, 0.1})));
}

namespace {

// Reference draws for sym_real(2) independent of the sampler: X = L L^T with
// (log L_11, L_21, log L_22) independent normal, then self-normalized
// importance resampling towards the target density.  A wide pilot pass fits
// the proposal (weighted moments, spread inflated by 1.3).
struct Reference {
  std::vector<Element> draws;
  double ess;
};

struct Weighted {
  std::vector<Element> xs;
  std::vector<Eigen::Vector3d> coords;
  std::vector<double> w;
  double ess;
};

Weighted weighted_proposals(const std::function<double(const Element&)>& target_logpdf, const Eigen::Vector3d& mu,
                            const Eigen::Vector3d& sd, int proposals, Rng& rng) {
  const auto s2 = AlgebraDescriptor::sym_real(2);
  std::normal_distribution<double> N;
  Weighted out;
  std::vector<double> logw;
  for (int i = 0; i < proposals; ++i) {
    Eigen::Vector3d g;
    for (int k = 0; k < 3; ++k) g[k] = mu[k] + sd[k] * N(rng);
    double l11 = std::exp(g[0]), l21 = g[1], l22 = std::exp(g[2]);
    Eigen::Matrix2d L;
    L << l11, 0, l21, l22;
    Element x = from_real_matrix(s2, L * L.transpose());
    // density of (l11, l21, l22), then the Cholesky Jacobian 4 l11^2 l22
    double log_q = -g[0] - g[2] - std::log(4 * l11 * l11 * l22);
    for (int k = 0; k < 3; ++k) log_q += -0.5 * std::pow((g[k] - mu[k]) / sd[k], 2) - std::log(sd[k]);
    logw.push_back(target_logpdf(x) - log_q);
    out.xs.push_back(x);
    out.coords.push_back(g);
  }
  double top = *std::max_element(logw.begin(), logw.end());
  double sw = 0, sw2 = 0;
  for (double lw : logw) {
    double w = std::exp(lw - top);
    out.w.push_back(w);
    sw += w;
    sw2 += w * w;
  }
  out.ess = sw * sw / sw2;
  return out;
}

Reference importance_reference(const std::function<double(const Element&)>& target_logpdf, int n, int proposals,
                               Rng& rng) {
  Weighted pilot = weighted_proposals(target_logpdf, {0.5, 0.0, 0.5}, {1.0, 2.0, 1.0}, proposals / 4, rng);
  Eigen::Vector3d m = Eigen::Vector3d::Zero(), v = Eigen::Vector3d::Zero();
  double sw = 0;
  for (std::size_t i = 0; i < pilot.w.size(); ++i) {
    m += pilot.w[i] * pilot.coords[i];
    sw += pilot.w[i];
  }
  m /= sw;
  for (std::size_t i = 0; i < pilot.w.size(); ++i) v += pilot.w[i] * (pilot.coords[i] - m).cwiseAbs2();
  Eigen::Vector3d sd = 1.3 * (v / sw).cwiseSqrt();
  Weighted main = weighted_proposals(target_logpdf, m, sd, proposals, rng);
  std::discrete_distribution<std::size_t> pick(main.w.begin(), main.w.end());
  Reference ref{{}, main.ess};
  ref.draws.reserve(n);
  for (int i = 0; i < n; ++i) ref.draws.push_back(main.xs[pick(rng)]);
  return ref;
}

std::vector<double> projected(const std::vector<Element>& xs, const Element& theta) {
  std::vector<double> out;
  out.reserve(xs.size());
  for (const auto& x : xs) out.push_back(inner(theta, x));
  return out;
}

}  // namespace

TEST_CASE("sampler agrees with its density: KS on projections against importance resampling") {
  const auto s2 = AlgebraDescriptor::sym_real(2);
  const int n = 20000;
  Element a = sym({{1.5, 0.3}, {0.3, 0.8}});
  RieszParams riesz{{3.0, 2.0}, a, JordanFrame::standard(s2)};
  WishartParams wishart{2.5, a};
  struct Case {
    const char* name;
    std::function<double(const Element&)> logpdf;
    std::function<std::vector<Element>(Rng&)> sample;
  };
  std::vector<Case> cases{
      {"riesz", [&](const Element& x) { return riesz_logpdf(riesz, x); },
       [&](Rng& r) { return sample_riesz(riesz, n, r); }},
      {"wishart", [&](const Element& x) { return wishart_logpdf(wishart, x); },
       [&](Rng& r) { return sample_wishart(wishart, n, r); }},
  };
  Rng rng(2024);
  for (const auto& c : cases) {
    CAPTURE(c.name);
    Reference ref = importance_reference(c.logpdf, n, 400000, rng);
    // resampling duplicates; keep the effective sample size well above n
    REQUIRE(ref.ess > 5.0 * n);
    std::vector<Element> draws = c.sample(rng);
    for (int k = 0; k < 5; ++k) {
      Element theta = random_gaussian_element(s2, rng);
      double d = stats::ks_statistic(projected(draws, theta), projected(ref.draws, theta));
      CHECK(stats::ks_two_sample_pvalue(d, n, n) > 0.01);
    }
  }
}

TEST_CASE("Riesz sampler: joint law of (Delta_1, det) against importance resampling") {
  const auto s2 = AlgebraDescriptor::sym_real(2);
  JordanFrame frame = JordanFrame::standard(s2);
  RieszParams riesz{{3.5, 1.5}, sym({{1.2, -0.4}, {-0.4, 0.9}}), frame};
  Rng rng(77);
  const int n = 2000;
  Reference ref = importance_reference([&](const Element& x) { return riesz_logpdf(riesz, x); }, n, 200000, rng);
  REQUIRE(ref.ess > 5.0 * n);
  auto features = [&](const std::vector<Element>& xs) {
    Eigen::MatrixXd m(xs.size(), 2);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      Eigen::VectorXd minors = principal_minors(xs[i], frame);
      m.row(i) << std::log(minors[0]), std::log(minors[1]);
    }
    return m;
  };
  auto good = stats::projection_energy_test(features(sample_riesz(riesz, n, rng)), features(ref.draws), 8, 199, 5);
  CHECK(good.p_value > 0.01);
  // the same test notices a sampler with the exponents swapped
  RieszParams swapped{{1.5, 3.5}, riesz.a, frame};
  auto bad = stats::projection_energy_test(features(sample_riesz(swapped, n, rng)), features(ref.draws), 8, 199, 5);
  CHECK(bad.p_value < 0.01);
}
