#pragma once

// Peirce decomposition relative to an idempotent or a Jordan frame,
// principal minors and generalized power functions.

#include "conelab/jordan.hpp"

#include <map>
#include <utility>
#include <vector>

namespace conelab {

enum class PeirceEigenvalue { zero, half, one };

/// Throws ValidationError unless c^2 = c within kIdempotentTolerance.
void require_idempotent(const Element& c, std::string_view what);

/// Component of x in E(c, eigenvalue).  P_1 = P(c), P_1/2 = 4(L(c) - L(c)^2),
/// P_0 = I - P_1 - P_1/2.
Element peirce_project(const Element& x, const Element& c, PeirceEigenvalue eigenvalue);
/// Same projection without the idempotency check (callers already hold a frame).
Element peirce_project_unchecked(const Element& x, const Element& c, PeirceEigenvalue eigenvalue);

/// Orthonormal bases of the subspaces E_ij (i <= j, 0-based) of a frame.
struct PeirceBasis {
  JordanFrame frame;
  std::map<std::pair<int, int>, std::vector<Element>> subspaces;

  const std::vector<Element>& subspace(int i, int j) const;
  /// Orthogonal projection onto E_ij.
  Element project(const Element& x, int i, int j) const;
  /// Coordinates of x's E_ij component in the stored orthonormal basis.
  Eigen::VectorXd coordinates(const Element& x, int i, int j) const;
  /// Element of E_ij with the given coordinates.
  Element compose(const Eigen::VectorXd& coords, int i, int j) const;
};

PeirceBasis build_peirce_basis(const JordanFrame& frame);

/// Largest norm of the component of b_ij * b_kl that falls outside the
/// subspace predicted by the multiplication table, over all basis vectors.
double peirce_table_residual(const PeirceBasis& basis);

struct PeirceNormCheck {
  Element x_square;
  double product_norm_sq;   // ||xy||^2 in the trace norm
  double square_residual;   // ||x^2 - (1/2)||x||^2 (c_i + c_j)||
  double product_residual;  // |  ||xy||^2 - ||x||^2 ||y||^2 / 8 |
};

/// x in E_ij, y in E_jk with i, j, k distinct (0-based).  Norms are taken in
/// the trace form.  Throws ValidationError when an input is not in its
/// subspace (relative tolerance 1e-9).
PeirceNormCheck peirce_norm_identities(const PeirceBasis& basis, int i, int j, int k, const Element& x,
                                       const Element& y);

/// Exponent vector s = (s_1, ..., s_r).
class PowerExponent {
 public:
  explicit PowerExponent(Eigen::VectorXd s) : s_(std::move(s)) {}
  PowerExponent(std::initializer_list<double> s);
  static PowerExponent constant(int rank, double p);

  int size() const { return static_cast<int>(s_.size()); }
  double operator[](int i) const { return s_[i]; }
  const Eigen::VectorXd& values() const { return s_; }
  double sum() const { return s_.sum(); }
  bool is_constant() const;

  PowerExponent operator-(double shift) const { return PowerExponent(s_.array() - shift); }
  PowerExponent operator+(const PowerExponent& o) const { return PowerExponent(s_ + o.s_); }

 private:
  Eigen::VectorXd s_;
};

/// Delta_k(x) = det of P(c_1+..+c_k) x inside the subalgebra E(c_1+..+c_k, 1),
/// k in 1..r.
double principal_minor(const Element& x, int k, const JordanFrame& frame);
/// (Delta_1(x), ..., Delta_r(x)).
Eigen::VectorXd principal_minors(const Element& x, const JordanFrame& frame);
/// The same minors through the subalgebra determinant, with no shortcut.
Eigen::VectorXd principal_minors_generic(const Element& x, const JordanFrame& frame);

/// log Delta_s(x) = sum_k (s_k - s_{k+1}) log Delta_k(x) with s_{r+1} = 0.
/// Throws DomainError when some Delta_k(x) <= 0.
double log_generalized_power(const Element& x, const PowerExponent& s, const JordanFrame& frame);
double generalized_power(const Element& x, const PowerExponent& s, const JordanFrame& frame);

}  // namespace conelab
