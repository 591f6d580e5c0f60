#pragma once

// Core value types: which simple Euclidean Jordan algebra we are in, points
// of that algebra, and linear maps acting on it.
//
// Coordinates are taken in a fixed orthonormal basis.  For the matrix kinds
// the inner product is <x,y> = Re Trace(x y) and the basis order is
//
//   sym_real(r):     d1..dr (diagonal units), then s_ij = sqrt(2) x_ij for
//                    i<j in lexicographic order
//   herm_complex(r): d1..dr, then for each i<j: re_ij, im_ij with
//                    x_ij = (re_ij + i im_ij) / sqrt(2)
//   lorentz(n):      x0, x1, ..., xn (raw coordinates of R^{n+1}, standard
//                    inner product)
//
// The Jordan trace form tr(xy) relates to the coordinate inner product by
// <x,y> = trace_scale() * tr(xy): 1 for matrix kinds, 1/2 for lorentz.

#include <Eigen/Dense>

#include <string>
#include <string_view>
#include <vector>

namespace conelab {

enum class AlgebraKind { sym_real, herm_complex, lorentz };

class AlgebraDescriptor {
 public:
  static constexpr int kMaxSymRealRank = 8;
  static constexpr int kMaxHermComplexRank = 6;
  static constexpr int kMaxLorentzOrder = 16;

  static AlgebraDescriptor sym_real(int r);
  static AlgebraDescriptor herm_complex(int r);
  static AlgebraDescriptor lorentz(int n);

  /// Parses "sym_real(3)", "herm_complex(2)", "lorentz(4)".
  static AlgebraDescriptor parse(std::string_view text);

  /// Every descriptor the library can construct, in a fixed order.
  static std::vector<AlgebraDescriptor> all_supported();

  AlgebraKind kind() const { return kind_; }
  /// r for the matrix kinds, n for lorentz(n).
  int order() const { return order_; }
  int rank() const { return rank_; }
  int peirce_d() const { return d_; }
  int dim() const { return dim_; }
  /// dim / rank, the exponent appearing in DDet(w(y)) = (det y)^{dim/r}.
  double dim_over_rank() const { return static_cast<double>(dim_) / rank_; }
  double trace_scale() const { return kind_ == AlgebraKind::lorentz ? 0.5 : 1.0; }
  bool is_matrix_kind() const { return kind_ != AlgebraKind::lorentz; }

  std::string name() const;
  std::vector<std::string> coordinate_labels() const;

  /// Index of the coordinate carrying the (i,j) off-diagonal entry, i<j,
  /// matrix kinds only.  For herm_complex this is the real part; the
  /// imaginary part follows immediately.
  int offdiag_index(int i, int j) const;

  friend bool operator==(const AlgebraDescriptor&, const AlgebraDescriptor&) = default;

 private:
  AlgebraDescriptor(AlgebraKind kind, int order, int rank, int d, int dim)
      : kind_(kind), order_(order), rank_(rank), d_(d), dim_(dim) {}

  AlgebraKind kind_;
  int order_;
  int rank_;
  int d_;
  int dim_;
};

/// A point of the algebra in the documented coordinate basis.
class Element {
 public:
  Element(AlgebraDescriptor algebra, Eigen::VectorXd coords);

  static Element zero(const AlgebraDescriptor& algebra);
  static Element identity(const AlgebraDescriptor& algebra);
  static Element basis(const AlgebraDescriptor& algebra, int index);

  const AlgebraDescriptor& algebra() const { return algebra_; }
  const Eigen::VectorXd& coords() const { return coords_; }
  int dim() const { return algebra_.dim(); }
  double operator[](int i) const { return coords_[i]; }

  Element operator-() const { return {algebra_, -coords_}; }
  Element& operator+=(const Element& other);
  Element& operator-=(const Element& other);
  Element& operator*=(double s) {
    coords_ *= s;
    return *this;
  }

 private:
  AlgebraDescriptor algebra_;
  Eigen::VectorXd coords_;
};

Element operator+(Element lhs, const Element& rhs);
Element operator-(Element lhs, const Element& rhs);
Element operator*(double s, Element x);
Element operator*(Element x, double s);

/// Coordinate inner product <x,y>.
double inner(const Element& x, const Element& y);
double norm(const Element& x);
/// tr(xy), the Jordan trace form.
double trace_form(const Element& x, const Element& y);

void require_same_algebra(const Element& x, const Element& y, std::string_view what);
void require_same_algebra(const AlgebraDescriptor& a, const AlgebraDescriptor& b, std::string_view what);

/// A linear map on the algebra, stored as a dim x dim matrix acting on
/// coordinates.  Houses L(x), P(x), Frobenius transformations, elements of
/// the triangular group and of K.
class Endomorphism {
 public:
  Endomorphism(AlgebraDescriptor algebra, Eigen::MatrixXd matrix);

  static Endomorphism identity(const AlgebraDescriptor& algebra);
  static Endomorphism scalar(const AlgebraDescriptor& algebra, double s);

  const AlgebraDescriptor& algebra() const { return algebra_; }
  const Eigen::MatrixXd& matrix() const { return matrix_; }

  Element apply(const Element& x) const;
  Element operator()(const Element& x) const { return apply(x); }

  /// Composition: (this * other)(x) = this(other(x)).
  Endomorphism operator*(const Endomorphism& other) const;
  Endomorphism operator+(const Endomorphism& other) const;
  Endomorphism operator-(const Endomorphism& other) const;
  Endomorphism operator*(double s) const;

  /// Adjoint with respect to the coordinate inner product (matrix transpose).
  Endomorphism adjoint() const;
  /// Dense LU inverse.  Logs a warning when the condition estimate exceeds
  /// 1e12 and throws SingularError when the map is numerically singular.
  Endomorphism inverse() const;
  /// Determinant in the space of endomorphisms.
  double ddet() const;

  /// Max-abs entry difference, for residual checks.
  double distance(const Endomorphism& other) const;

 private:
  AlgebraDescriptor algebra_;
  Eigen::MatrixXd matrix_;
};

Endomorphism operator*(double s, const Endomorphism& f);

}  // namespace conelab
