#include "conelab/distributions.hpp"

#include "conelab/error.hpp"
#include "conelab/triangular.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>

#include <cmath>
#include <limits>

namespace conelab {

namespace {

double shape_offset(const AlgebraDescriptor& alg, int j) { return 0.5 * j * alg.peirce_d(); }

}  // namespace

double log_gamma_cone(const PowerExponent& s, const AlgebraDescriptor& alg) {
  if (s.size() != alg.rank()) throw ValidationError("Gamma_V: exponent length does not match the rank");
  double out = 0.5 * (alg.dim() - alg.rank()) * std::log(2.0 * M_PI);
  for (int j = 0; j < alg.rank(); ++j) {
    double arg = s[j] - shape_offset(alg, j);
    if (!(arg > 0.0)) {
      throw DomainError("Gamma_V: s_" + std::to_string(j + 1) + " must exceed " +
                        std::to_string(shape_offset(alg, j)));
    }
    out += std::lgamma(arg);
  }
  return out;
}

double gamma_cone(const PowerExponent& s, const AlgebraDescriptor& alg) { return std::exp(log_gamma_cone(s, alg)); }

void RieszParams::validate() const {
  require_same_algebra(a.algebra(), frame.algebra(), "Riesz parameters");
  const auto& alg = a.algebra();
  if (s.size() != alg.rank()) throw DomainError("Riesz parameter s has the wrong length");
  for (int j = 0; j < alg.rank(); ++j) {
    if (!(s[j] > shape_offset(alg, j))) {
      throw DomainError("Riesz parameter s_" + std::to_string(j + 1) + " must exceed " +
                        std::to_string(shape_offset(alg, j)));
    }
  }
  if (!in_cone(a)) throw DomainError("Riesz parameter a is not in the cone");
}

void WishartParams::validate() const {
  const auto& alg = a.algebra();
  if (!(p > alg.dim_over_rank() - 1.0)) {
    throw DomainError("Wishart shape p must exceed n/r - 1 = " + std::to_string(alg.dim_over_rank() - 1.0));
  }
  if (!in_cone(a)) throw DomainError("Wishart parameter a is not in the cone");
}

RieszParams WishartParams::as_riesz() const {
  return {PowerExponent::constant(a.algebra().rank(), p), a, JordanFrame::standard(a.algebra())};
}

namespace {

double riesz_log_normalizer(const RieszParams& params) {
  params.validate();
  const auto& alg = params.a.algebra();
  const double c = alg.trace_scale();
  return -log_generalized_power(inverse(params.a), params.s, params.frame) - log_gamma_cone(params.s, alg) -
         (0.5 * alg.dim() - params.s.sum()) * std::log(c);
}

}  // namespace

double DensityModel::logpdf(const Element& x) const {
  if (!in_cone(x)) return -std::numeric_limits<double>::infinity();
  try {
    return log_normalizer + mult_fn(x) + inner(lambda, x);
  } catch (const DomainError&) {
    return -std::numeric_limits<double>::infinity();
  }
}

DensityModel riesz_model(const RieszParams& params, AlgorithmPtr w) {
  const auto& alg = params.a.algebra();
  return {riesz_log_normalizer(params), -params.a,
          LogCauchyFn::delta_s_log(params.s - alg.dim_over_rank(), params.frame), std::move(w)};
}

DensityModel wishart_model(const WishartParams& params, AlgorithmPtr w) {
  params.validate();
  const auto& alg = params.a.algebra();
  return {riesz_log_normalizer(params.as_riesz()), -params.a,
          LogCauchyFn::log_det_power(params.p - alg.dim_over_rank()), std::move(w)};
}

double riesz_logpdf(const RieszParams& params, const Element& x) {
  require_same_algebra(params.a, x, "riesz_logpdf");
  return riesz_model(params, nullptr).logpdf(x);
}

double wishart_logpdf(const WishartParams& params, const Element& x) {
  require_same_algebra(params.a, x, "wishart_logpdf");
  return wishart_model(params, nullptr).logpdf(x);
}

std::vector<Element> sample_riesz(const RieszParams& params, int n, Rng& rng) {
  params.validate();
  if (n < 0) throw ValidationError("sample count must be non-negative");
  const auto& alg = params.a.algebra();
  const int r = alg.rank();
  const double c = alg.trace_scale();
  PeirceBasis basis = build_peirce_basis(params.frame);
  TriangularElement t0 = triangular_decompose(inverse(params.a), params.frame);
  std::normal_distribution<double> normal;
  std::vector<Element> out;
  out.reserve(n);
  TriangularElement t = TriangularElement::identity(params.frame);
  for (int draw = 0; draw < n; ++draw) {
    for (int j = 0; j < r; ++j) {
      std::gamma_distribution<double> g(params.s[j] - shape_offset(alg, j), 1.0 / c);
      t.alpha[j] = g(rng);
    }
    for (int j = 0; j + 1 < r; ++j) {
      const double sd = 1.0 / std::sqrt(t.alpha[j]);
      Element z = Element::zero(alg);
      for (int k = j + 1; k < r; ++k) {
        for (const auto& b : basis.subspace(j, k)) z += (sd * normal(rng)) * b;
      }
      t.z[j] = std::move(z);
    }
    out.push_back(t0.apply(t.image_of_identity()));
  }
  return out;
}

std::vector<Element> sample_wishart(const WishartParams& params, int n, Rng& rng) {
  params.validate();
  return sample_riesz(params.as_riesz(), n, rng);
}

bool in_domain_D(const Element& u) {
  Eigen::VectorXd ev = eigenvalues(u);
  return ev.minCoeff() > 0.0 && ev.maxCoeff() < 1.0;
}

// ---------------------------------------------------------------------------

namespace {

// Gauss-Hermite rule for weight exp(-t^2) by Golub-Welsch.
void gauss_hermite(int n, Eigen::VectorXd& nodes, Eigen::VectorXd& weights) {
  Eigen::MatrixXd jm = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) jm(i, i - 1) = jm(i - 1, i) = std::sqrt(0.5 * i);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jm);
  nodes = es.eigenvalues();
  weights = std::sqrt(M_PI) * es.eigenvectors().row(0).transpose().cwiseAbs2();
}

}  // namespace

double cone_integral(const std::function<double(const Element&)>& logf, const JordanFrame& frame,
                     int hermite_points) {
  using boost::math::quadrature::exp_sinh;
  const auto& alg = frame.algebra();
  const int r = alg.rank();
  const int d = alg.peirce_d();
  auto safe_exp = [](double v) { return std::isfinite(v) ? std::exp(v) : 0.0; };
  if (r == 1) {
    exp_sinh<double> q;
    const double jac = norm(frame[0]);
    return jac * q.integrate([&](double a1) { return safe_exp(logf(a1 * frame[0])); }, 1e-10);
  }
  if (r != 2 || d > 2) {
    throw ValidationError("cone_integral supports rank 1 and rank-2 algebras with d <= 2, not " + alg.name());
  }
  if (hermite_points < 2) throw ValidationError("cone_integral needs at least 2 Hermite points");

  const PeirceBasis basis = build_peirce_basis(frame);
  const std::vector<Element>& off = basis.subspace(0, 1);
  const double c = alg.trace_scale();
  const double jac = norm(frame[0]) * norm(frame[1]);
  Eigen::VectorXd gh_t, gh_w;
  gauss_hermite(hermite_points, gh_t, gh_w);

  // x = a1 c1 + (a2 + a1 |zeta|^2 / 2c) c2 + a1 sum zeta_m b_m
  auto point = [&](double a1, double a2, const Eigen::VectorXd& zeta) {
    Element x = a1 * frame[0] + (a2 + a1 * zeta.squaredNorm() / (2.0 * c)) * frame[1];
    for (int m = 0; m < d; ++m) x += (a1 * zeta[m]) * off[m];
    return x;
  };

  // Integral over zeta in R^d.  The rule is centred and scaled per axis by a
  // Newton step on logf from zeta = 0, which is exact when logf is quadratic
  // in zeta.
  auto offdiag = [&](double a1, double a2) {
    Eigen::VectorXd zero = Eigen::VectorXd::Zero(d);
    const double f0 = logf(point(a1, a2, zero));
    if (!std::isfinite(f0)) return 0.0;
    Eigen::VectorXd centre(d), scale(d);
    for (int m = 0; m < d; ++m) {
      double h = std::sqrt(c / a1) * 0.1;
      Eigen::VectorXd e = Eigen::VectorXd::Zero(d);
      e[m] = h;
      double fp = logf(point(a1, a2, e)), fm = logf(point(a1, a2, -e));
      double g = (fp - fm) / (2 * h);
      double curv = (fp - 2 * f0 + fm) / (h * h);
      if (!(curv < 0) || !std::isfinite(curv)) curv = -a1 / c;
      centre[m] = -g / curv;
      scale[m] = std::sqrt(-2.0 / curv);
    }
    const int n = hermite_points;
    int total = 1;
    for (int m = 0; m < d; ++m) total *= n;
    double acc = 0.0;
    Eigen::VectorXd zeta(d);
    for (int idx = 0; idx < total; ++idx) {
      double w = 1.0, gauss = 0.0;
      int rem = idx;
      for (int m = 0; m < d; ++m) {
        int k = rem % n;
        rem /= n;
        zeta[m] = centre[m] + scale[m] * gh_t[k];
        w *= gh_w[k] * scale[m];
        gauss += gh_t[k] * gh_t[k];
      }
      double v = logf(point(a1, a2, zeta));
      if (std::isfinite(v)) acc += w * std::exp(v + gauss);
    }
    return acc;
  };

  exp_sinh<double> outer, inner_q;
  return jac * outer.integrate(
                   [&](double a1) {
                     return std::pow(a1, d) *
                            inner_q.integrate([&](double a2) { return offdiag(a1, a2); }, 1e-7);
                   },
                   1e-7);
}

}  // namespace conelab
