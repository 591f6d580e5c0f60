#pragma once

// Jordan product, its linear representations, inversion, spectral
// decomposition, and random generation of elements and automorphisms.

#include "conelab/algebra.hpp"

#include <Eigen/Dense>

#include <complex>
#include <random>
#include <utility>
#include <vector>

namespace conelab {

using Rng = std::mt19937_64;

/// Absolute tolerance for idempotency / orthogonality checks.
inline constexpr double kIdempotentTolerance = 1e-9;
/// x is singular when min|lambda| < kSingularRatio * max|lambda|.
inline constexpr double kSingularRatio = 1e-12;

Element jordan_product(const Element& x, const Element& y);
/// x^2 = x x.
Element square(const Element& x);

/// L(x): y -> xy.
Endomorphism lmap(const Element& x);
/// P(x) = 2 L(x)^2 - L(x^2).
Endomorphism quad_rep(const Element& x);
/// P(x) y without materialising the endomorphism.
Element quad_apply(const Element& x, const Element& y);

/// Complete system of primitive orthogonal idempotents.
class JordanFrame {
 public:
  /// Validates the frame invariants (idempotent, orthogonal, summing to e)
  /// at kIdempotentTolerance and throws ValidationError otherwise.
  explicit JordanFrame(std::vector<Element> idempotents);

  /// diag units for matrix kinds; (1/2)(1, +-1, 0, ...) for lorentz.
  static JordanFrame standard(const AlgebraDescriptor& algebra);

  const AlgebraDescriptor& algebra() const { return idempotents_.front().algebra(); }
  int rank() const { return static_cast<int>(idempotents_.size()); }
  const Element& operator[](int i) const { return idempotents_[i]; }
  const std::vector<Element>& idempotents() const { return idempotents_; }
  /// c_1 + ... + c_k  (k counted from 1).
  Element partial_sum(int k) const;
  /// True when this is the standard frame of its algebra (to 1e-12).
  bool is_standard() const { return standard_; }
  /// Image of the frame under an automorphism (k in K maps frames to frames).
  JordanFrame transformed(const Endomorphism& k) const;

 private:
  std::vector<Element> idempotents_;
  bool standard_ = false;
};

struct SpectralDecomposition {
  JordanFrame frame;
  /// Sorted descending, aligned with frame.
  Eigen::VectorXd eigenvalues;

  Element reconstruct() const;
};

SpectralDecomposition spectral_decompose(const Element& x);
Eigen::VectorXd eigenvalues(const Element& x);

struct TraceDet {
  double trace;
  double det;
};
TraceDet trace_det(const Element& x);
double trace(const Element& x);
double det(const Element& x);

/// All eigenvalues strictly positive.
bool in_cone(const Element& x);

/// Throws SingularError when min|lambda| < 1e-12 max|lambda|.
Element inverse(const Element& x);
/// x^p for x in the cone, via lambda_i -> lambda_i^p on the frame.
Element power(const Element& x, double p);

struct SpectrumSpec {
  double lo = 0.1;
  double hi = 10.0;
  bool log_uniform = true;
};

/// Element Sum lambda_i k(c_i) with a Haar-random k in K and eigenvalues
/// drawn from the spectrum spec (always inside the cone when lo > 0).
Element random_element(const AlgebraDescriptor& algebra, Rng& rng, const SpectrumSpec& spectrum);
/// Element with iid standard normal coordinates (not necessarily in V).
Element random_gaussian_element(const AlgebraDescriptor& algebra, Rng& rng);

/// Random k in K: k e = e, k orthogonal, k(V) = V.  sym_real: x -> O x O^T
/// with O in SO(r); herm_complex: x -> U x U^*; lorentz: rotation in SO(n)
/// of the last n coordinates.
Endomorphism random_automorphism_k(const AlgebraDescriptor& algebra, Rng& rng);

// Matrix views of the matrix kinds, used by oracles and shortcuts.
Eigen::MatrixXd to_real_matrix(const Element& x);
Element from_real_matrix(const AlgebraDescriptor& algebra, const Eigen::MatrixXd& m);
Eigen::MatrixXcd to_complex_matrix(const Element& x);
Element from_complex_matrix(const AlgebraDescriptor& algebra, const Eigen::MatrixXcd& m);

}  // namespace conelab
