#pragma once

// Riesz and Wishart distributions on V, the Gamma function of the cone,
// samplers, the domain D and the density models used by the Lukacs harness.
//
// Densities are taken with respect to Lebesgue measure in the coordinate
// basis of algebra.hpp, with exponent -<a,x> in the coordinate inner product:
//
//   log f(x) = log Delta_{s - n/r}(x) - <a,x> - log Delta_s(a^{-1})
//              - log Gamma_V(s) - (n/2 - sum s) log c
//
// where c = trace_scale().  For the matrix kinds c = 1 and this is the usual
// Riesz density; the Wishart case is s = (p, ..., p).

#include "conelab/jordan.hpp"
#include "conelab/log_cauchy.hpp"
#include "conelab/multiplication.hpp"
#include "conelab/peirce.hpp"

#include <functional>
#include <vector>

namespace conelab {

/// log Gamma_V(s) = ((n - r)/2) log(2 pi) + sum_j log Gamma(s_j - (j-1) d/2).
/// Throws DomainError when some s_j <= (j-1) d/2.
double log_gamma_cone(const PowerExponent& s, const AlgebraDescriptor& algebra);
double gamma_cone(const PowerExponent& s, const AlgebraDescriptor& algebra);

struct RieszParams {
  PowerExponent s;
  Element a;
  JordanFrame frame;

  /// Checks s_j > (j-1)d/2, a in V and matching algebras; throws DomainError.
  void validate() const;
};

struct WishartParams {
  double p;
  Element a;

  /// p > n/r - 1 and a in V; throws DomainError.
  void validate() const;
  RieszParams as_riesz() const;
};

/// log density; -inf outside V.
double riesz_logpdf(const RieszParams& params, const Element& x);
double wishart_logpdf(const WishartParams& params, const Element& x);

/// Bartlett-type construction: alpha_j ~ Gamma(s_j - (j-1)d/2, scale 1/c),
/// Frobenius coordinates in E_jk iid N(0, 1/alpha_j), Y = t e ~ R_{s,e},
/// then X = t_{a^{-1}} Y.
std::vector<Element> sample_riesz(const RieszParams& params, int n, Rng& rng);
std::vector<Element> sample_wishart(const WishartParams& params, int n, Rng& rng);

/// All eigenvalues of u in (0, 1).
bool in_domain_D(const Element& u);

/// Density C g(x) e^{<Lambda,x>} on V with g = exp(mult_fn).
struct DensityModel {
  double log_normalizer;
  Element lambda;
  LogCauchyFn mult_fn;
  AlgorithmPtr algorithm;

  double logpdf(const Element& x) const;
};

/// Riesz model: Lambda = -a, mult_fn = log Delta_{s - n/r}.
DensityModel riesz_model(const RieszParams& params, AlgorithmPtr w);
/// Wishart model: Lambda = -a, mult_fn = (p - n/r) log det.
DensityModel wishart_model(const WishartParams& params, AlgorithmPtr w);

/// Integral of exp(logf) over V for rank 1, and for rank 2 when d <= 2
/// (sym_real(2), herm_complex(2), lorentz(2), lorentz(3)).  Coordinates are
/// the triangular ones of the frame, x = tau_{c1}(z)(a1 c1 + a2 c2): nested
/// exp-sinh rules in a1, a2 and a Gauss-Hermite product rule in z.  Pass the
/// frame a density is written in; then the integrand is Gaussian in z.
double cone_integral(const std::function<double(const Element&)>& logf, const JordanFrame& frame,
                     int hermite_points = 10);

}  // namespace conelab
