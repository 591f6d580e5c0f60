#pragma once

// Box operator, Frobenius transformations and the triangular group T of a
// Jordan frame: every x in V is t_x e for a unique t_x in T.

#include "conelab/jordan.hpp"

#include <vector>

namespace conelab {

/// x[]y = L(xy) + L(x)L(y) - L(y)L(x).
Endomorphism box_operator(const Element& x, const Element& y);

/// tau_c(z) = I + N + N^2/2 with N = 2 z[]c.  z is projected onto E(c,1/2)
/// first; c is checked for idempotency.
Endomorphism frobenius_transform(const Element& c, const Element& z);
/// tau_c(z) y through element products only.  No checks: c must be
/// idempotent and z in E(c,1/2).
Element frobenius_apply(const Element& c, const Element& z, const Element& y);
/// tau_c(z)^* y, using (z[]c)^* = c[]z.
Element frobenius_apply_adjoint(const Element& c, const Element& z, const Element& y);

/// t = tau_{c_1}(z_1) ... tau_{c_{r-1}}(z_{r-1}) P(sum_k sqrt(alpha_k) c_k).
struct TriangularElement {
  JordanFrame frame;
  /// z[j] lies in the sum of E_jk over k > j; size r - 1.
  std::vector<Element> z;
  /// Positive diagonal alpha_1..alpha_r.
  Eigen::VectorXd alpha;

  /// Identity of T for the frame.
  static TriangularElement identity(const JordanFrame& frame);

  Element apply(const Element& y) const;
  Element apply_inverse(const Element& y) const;
  Element apply_adjoint(const Element& y) const;
  /// t e = tau_1 ... tau_{r-1} (sum alpha_k c_k).
  Element image_of_identity() const;
};

/// Unique t_x in T with t_x e = x.  Throws DomainError when x is not in V.
TriangularElement triangular_decompose(const Element& x, const JordanFrame& frame);

Endomorphism as_endomorphism(const TriangularElement& t);
Endomorphism adjoint(const TriangularElement& t);

/// Group law realized through the image of e: returns t'' with
/// t'' e = t(t' e).  Callers may compare as_endomorphism(t'') with the
/// composed endomorphisms.
TriangularElement compose(const TriangularElement& t, const TriangularElement& t2);

/// Largest norm of z[j] outside the sum of E_jk (k > j), relative to ||z[j]||+1.
double frobenius_parameter_residual(const TriangularElement& t);

}  // namespace conelab
