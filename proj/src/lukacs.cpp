#include "conelab/lukacs.hpp"

#include "conelab/error.hpp"
#include "conelab/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace conelab {

QuotientPair quotient_map(const Element& x, const Element& y, const MultiplicationAlgorithm& w) {
  require_same_algebra(x, y, "quotient_map");
  if (!in_cone(x) || !in_cone(y)) throw DomainError("quotient_map: x and y must lie in the cone");
  Element v = x + y;
  return {w.divide(v, x), std::move(v)};
}

std::pair<Element, Element> inverse_map(const Element& u, const Element& v, const MultiplicationAlgorithm& w) {
  require_same_algebra(u, v, "inverse_map");
  if (!in_domain_D(u)) throw DomainError("inverse_map: u must lie in D");
  if (!in_cone(v)) throw DomainError("inverse_map: v must lie in the cone");
  return {w.multiply(v, u), w.multiply(v, Element::identity(u.algebra()) - u)};
}

Element random_domain_element(const AlgebraDescriptor& algebra, Rng& rng, double lo, double hi) {
  if (!(0 < lo && lo <= hi && hi < 1)) throw ValidationError("random_domain_element: need 0 < lo <= hi < 1");
  return random_element(algebra, rng, SpectrumSpec{lo, hi, false});
}

JacobianCheck jacobian_check(const Element& u, const Element& v, const MultiplicationAlgorithm& w, double fd_step) {
  require_same_algebra(u, v, "jacobian_check");
  const AlgebraDescriptor& alg = u.algebra();
  const int n = alg.dim();
  const double h = fd_step * (1 + norm(v));
  if (!(h > 0) || h < 64 * std::numeric_limits<double>::epsilon() * (1 + norm(v)))
    throw NumericError("jacobian_check: finite-difference step underflows");
  auto flat = [n](const std::pair<Element, Element>& p) {
    Eigen::VectorXd out(2 * n);
    out << p.first.coords(), p.second.coords();
    return out;
  };
  Eigen::MatrixXd jac(2 * n, 2 * n);
  for (int col = 0; col < 2 * n; ++col) {
    Element unit = Element::basis(alg, col % n) * h;
    Element up = u, um = u, vp = v, vm = v;
    if (col < n) {
      up = u + unit;
      um = u - unit;
    } else {
      vp = v + unit;
      vm = v - unit;
    }
    jac.col(col) = (flat(inverse_map(up, vp, w)) - flat(inverse_map(um, vm, w))) / (2 * h);
  }
  JacobianCheck out;
  out.analytic = std::pow(det(v), alg.dim_over_rank());
  out.numeric = std::abs(jac.partialPivLu().determinant());
  out.relative = std::abs(out.numeric - out.analytic) / out.analytic;
  return out;
}

JacobianCheck jacobian_check(const Element& v, const MultiplicationAlgorithm& w, Rng& rng, double fd_step) {
  return jacobian_check(random_domain_element(v.algebra(), rng), v, w, fd_step);
}

double factorization_residual(const DensityModel& model_x, const DensityModel& model_y,
                              const MultiplicationAlgorithm& w, const std::vector<std::pair<Element, Element>>& samples,
                              bool strict) {
  if (strict) {
    double gap = (model_x.lambda.coords() - model_y.lambda.coords()).cwiseAbs().maxCoeff();
    if (gap > 1e-12 * (1 + model_x.lambda.coords().cwiseAbs().maxCoeff())) {
      std::ostringstream msg;
      msg << "factorization_residual: models have different Lambda (max coordinate gap " << gap << ")";
      throw ContractError(msg.str());
    }
    for (const auto* m : {&model_x, &model_y})
      if (m->algorithm && m->algorithm->name() != w.name())
        throw ContractError("factorization_residual: model algorithm " + m->algorithm->name() + " differs from " +
                            w.name());
  }
  if (samples.empty()) return 0.0;
  const AlgebraDescriptor& alg = samples.front().first.algebra();
  const Element e = Element::identity(alg);
  const Endomorphism we = w.evaluate(e);
  const double power = alg.dim_over_rank();
  const double log_c = model_x.log_normalizer + model_y.log_normalizer;
  std::vector<double> res(samples.size());
  parallel_for(samples.size(), [&](std::size_t i) {
    const auto& [x, y] = samples[i];
    QuotientPair q = quotient_map(x, y, w);
    double lhs = power * std::log(det(q.v)) + model_x.logpdf(x) + model_y.logpdf(y);
    double log_fv = power * std::log(det(q.v)) + model_x.mult_fn(q.v) + model_y.mult_fn(q.v) +
                    inner(model_x.lambda, q.v);
    Element wu = we.apply(q.u);
    double log_fu = model_x.mult_fn(wu) + model_y.mult_fn(e - wu);
    res[i] = std::abs(lhs - (log_c + log_fu + log_fv));
  });
  return *std::max_element(res.begin(), res.end());
}

Eigen::MatrixXd u_matrix(const std::vector<QuotientPair>& pairs) {
  if (pairs.empty()) return {};
  Eigen::MatrixXd m(pairs.size(), pairs.front().u.algebra().dim());
  for (std::size_t i = 0; i < pairs.size(); ++i) m.row(i) = pairs[i].u.coords().transpose();
  return m;
}

Eigen::MatrixXd v_matrix(const std::vector<QuotientPair>& pairs) {
  if (pairs.empty()) return {};
  Eigen::MatrixXd m(pairs.size(), pairs.front().v.algebra().dim());
  for (std::size_t i = 0; i < pairs.size(); ++i) m.row(i) = pairs[i].v.coords().transpose();
  return m;
}

namespace {

std::vector<QuotientPair> quotients(const std::vector<Element>& xs, const std::vector<Element>& ys,
                                    const MultiplicationAlgorithm& w) {
  std::vector<QuotientPair> out(xs.size(), QuotientPair{xs.front(), xs.front()});
  parallel_for(xs.size(), [&](std::size_t i) { out[i] = quotient_map(xs[i], ys[i], w); });
  return out;
}

}  // namespace

IndependenceReport independence_test(const std::vector<Element>& samples_x, const std::vector<Element>& samples_y,
                                     const MultiplicationAlgorithm& w, int n_perm, std::uint64_t seed,
                                     int projections) {
  if (samples_x.size() != samples_y.size())
    throw ValidationError("independence_test: sample batches must have equal length");
  if (samples_x.size() < 100)
    throw InsufficientSamples("independence_test: need at least 100 samples, got " +
                              std::to_string(samples_x.size()));
  auto pairs = quotients(samples_x, samples_y, w);
  stats::TestResult t = stats::projection_dcor_test(u_matrix(pairs), v_matrix(pairs), projections, n_perm, seed);
  IndependenceReport rep;
  rep.statistic = t.statistic;
  rep.p_value = t.p_value;
  rep.n = static_cast<int>(samples_x.size());
  rep.n_perm = n_perm;
  rep.projections = projections;
  rep.seed = seed;
  return rep;
}

std::vector<QuotientPair> quotient_sample(const RieszParams& px, const RieszParams& py,
                                          const MultiplicationAlgorithm& w, int n, Rng& rng) {
  if (n < 1) throw ValidationError("quotient_sample: n must be positive");
  auto xs = sample_riesz(px, n, rng);
  auto ys = sample_riesz(py, n, rng);
  return quotients(xs, ys, w);
}

KInvarianceQuotientReport k_invariant_quotient_check(const RieszParams& px, const RieszParams& py,
                                                     const MultiplicationAlgorithm& w, int n, int rotations,
                                                     int n_perm, std::uint64_t seed, int projections) {
  if (rotations < 1) throw ValidationError("k_invariant_quotient_check: rotations must be >= 1");
  if (n < 2) throw InsufficientSamples("k_invariant_quotient_check: need at least two samples per batch");
  const AlgebraDescriptor& alg = px.a.algebra();
  KInvarianceQuotientReport rep;
  rep.n = n;
  rep.rotations = rotations;
  rep.n_perm = n_perm;
  rep.seed = seed;
  for (int r = 0; r < rotations; ++r) {
    Rng rng_k(derive_seed(seed, 3 * static_cast<std::uint64_t>(r)));
    Rng rng_a(derive_seed(seed, 3 * static_cast<std::uint64_t>(r) + 1));
    Rng rng_b(derive_seed(seed, 3 * static_cast<std::uint64_t>(r) + 2));
    Endomorphism k = random_automorphism_k(alg, rng_k);
    Eigen::MatrixXd a = u_matrix(quotient_sample(px, py, w, n, rng_a));
    Eigen::MatrixXd b = u_matrix(quotient_sample(px, py, w, n, rng_b)) * k.matrix().transpose();
    auto t = stats::projection_energy_test(a, b, projections, n_perm, derive_seed(seed ^ 0x5bd1e995ULL, r));
    rep.statistics.push_back(t.statistic);
    rep.p_values.push_back(t.p_value);
  }
  rep.max_statistic = *std::max_element(rep.statistics.begin(), rep.statistics.end());
  rep.min_p_value = *std::min_element(rep.p_values.begin(), rep.p_values.end());
  rep.combined_p_value = stats::fisher_combine(rep.p_values);
  return rep;
}

}  // namespace conelab
