#include "conelab/algebra.hpp"

#include "conelab/error.hpp"
#include "conelab/log.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

namespace conelab {

AlgebraDescriptor AlgebraDescriptor::sym_real(int r) {
  if (r < 1 || r > kMaxSymRealRank) {
    throw ValidationError("sym_real rank must be in [1, " + std::to_string(kMaxSymRealRank) + "], got " +
                          std::to_string(r));
  }
  return {AlgebraKind::sym_real, r, r, 1, r + r * (r - 1) / 2};
}

AlgebraDescriptor AlgebraDescriptor::herm_complex(int r) {
  if (r < 1 || r > kMaxHermComplexRank) {
    throw ValidationError("herm_complex rank must be in [1, " + std::to_string(kMaxHermComplexRank) +
                          "], got " + std::to_string(r));
  }
  return {AlgebraKind::herm_complex, r, r, 2, r + r * (r - 1)};
}

AlgebraDescriptor AlgebraDescriptor::lorentz(int n) {
  if (n < 2 || n > kMaxLorentzOrder) {
    throw ValidationError("lorentz order must be in [2, " + std::to_string(kMaxLorentzOrder) + "], got " +
                          std::to_string(n));
  }
  return {AlgebraKind::lorentz, n, 2, n - 1, n + 1};
}

AlgebraDescriptor AlgebraDescriptor::parse(std::string_view text) {
  auto open = text.find('(');
  auto close = text.rfind(')');
  if (open == std::string_view::npos || close == std::string_view::npos || close != text.size() - 1 ||
      close <= open + 1) {
    throw ConfigError("malformed algebra spec '" + std::string(text) + "' (expected e.g. sym_real(3))");
  }
  std::string_view kind = text.substr(0, open);
  std::string_view arg = text.substr(open + 1, close - open - 1);
  int value = 0;
  auto [ptr, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), value);
  if (ec != std::errc() || ptr != arg.data() + arg.size()) {
    throw ConfigError("malformed algebra parameter in '" + std::string(text) + "'");
  }
  try {
    if (kind == "sym_real") return sym_real(value);
    if (kind == "herm_complex") return herm_complex(value);
    if (kind == "lorentz") return lorentz(value);
  } catch (const ValidationError& e) {
    throw ConfigError(e.what());
  }
  throw ConfigError("unknown algebra kind '" + std::string(kind) +
                    "' (valid: sym_real, herm_complex, lorentz)");
}

std::vector<AlgebraDescriptor> AlgebraDescriptor::all_supported() {
  std::vector<AlgebraDescriptor> out;
  for (int r = 1; r <= kMaxSymRealRank; ++r) out.push_back(sym_real(r));
  for (int r = 1; r <= kMaxHermComplexRank; ++r) out.push_back(herm_complex(r));
  for (int n = 2; n <= kMaxLorentzOrder; ++n) out.push_back(lorentz(n));
  return out;
}

std::string AlgebraDescriptor::name() const {
  switch (kind_) {
    case AlgebraKind::sym_real:
      return "sym_real(" + std::to_string(order_) + ")";
    case AlgebraKind::herm_complex:
      return "herm_complex(" + std::to_string(order_) + ")";
    case AlgebraKind::lorentz:
      return "lorentz(" + std::to_string(order_) + ")";
  }
  return "?";
}

std::vector<std::string> AlgebraDescriptor::coordinate_labels() const {
  std::vector<std::string> labels;
  labels.reserve(dim_);
  if (kind_ == AlgebraKind::lorentz) {
    for (int i = 0; i <= order_; ++i) labels.push_back("x" + std::to_string(i));
    return labels;
  }
  for (int i = 1; i <= order_; ++i) labels.push_back("d" + std::to_string(i));
  for (int i = 1; i <= order_; ++i) {
    for (int j = i + 1; j <= order_; ++j) {
      std::string ij = std::to_string(i) + "_" + std::to_string(j);
      if (kind_ == AlgebraKind::sym_real) {
        labels.push_back("s" + ij);
      } else {
        labels.push_back("re" + ij);
        labels.push_back("im" + ij);
      }
    }
  }
  return labels;
}

int AlgebraDescriptor::offdiag_index(int i, int j) const {
  if (!is_matrix_kind() || i < 0 || j <= i || j >= order_) {
    throw ValidationError("offdiag_index: invalid pair for " + name());
  }
  // Pairs before (i,j) in lexicographic order.
  int before = i * order_ - i * (i + 1) / 2 + (j - i - 1);
  int width = kind_ == AlgebraKind::sym_real ? 1 : 2;
  return order_ + width * before;
}

// ---------------------------------------------------------------------------

Element::Element(AlgebraDescriptor algebra, Eigen::VectorXd coords)
    : algebra_(algebra), coords_(std::move(coords)) {
  if (coords_.size() != algebra_.dim()) {
    throw ValidationError("element of " + algebra_.name() + " needs " + std::to_string(algebra_.dim()) +
                          " coordinates, got " + std::to_string(coords_.size()));
  }
}

Element Element::zero(const AlgebraDescriptor& algebra) {
  return {algebra, Eigen::VectorXd::Zero(algebra.dim())};
}

Element Element::identity(const AlgebraDescriptor& algebra) {
  Eigen::VectorXd c = Eigen::VectorXd::Zero(algebra.dim());
  if (algebra.kind() == AlgebraKind::lorentz) {
    c[0] = 1.0;
  } else {
    c.head(algebra.order()).setOnes();
  }
  return {algebra, std::move(c)};
}

Element Element::basis(const AlgebraDescriptor& algebra, int index) {
  if (index < 0 || index >= algebra.dim()) throw ValidationError("basis index out of range");
  Eigen::VectorXd c = Eigen::VectorXd::Zero(algebra.dim());
  c[index] = 1.0;
  return {algebra, std::move(c)};
}

Element& Element::operator+=(const Element& other) {
  require_same_algebra(*this, other, "addition");
  coords_ += other.coords_;
  return *this;
}

Element& Element::operator-=(const Element& other) {
  require_same_algebra(*this, other, "subtraction");
  coords_ -= other.coords_;
  return *this;
}

Element operator+(Element lhs, const Element& rhs) { return lhs += rhs; }
Element operator-(Element lhs, const Element& rhs) { return lhs -= rhs; }
Element operator*(double s, Element x) { return x *= s; }
Element operator*(Element x, double s) { return x *= s; }

double inner(const Element& x, const Element& y) {
  require_same_algebra(x, y, "inner product");
  return x.coords().dot(y.coords());
}

double norm(const Element& x) { return x.coords().norm(); }

double trace_form(const Element& x, const Element& y) { return inner(x, y) / x.algebra().trace_scale(); }

void require_same_algebra(const AlgebraDescriptor& a, const AlgebraDescriptor& b, std::string_view what) {
  if (!(a == b)) {
    throw AlgebraMismatch(std::string(what) + ": operands belong to " + a.name() + " and " + b.name());
  }
}

void require_same_algebra(const Element& x, const Element& y, std::string_view what) {
  require_same_algebra(x.algebra(), y.algebra(), what);
}

// ---------------------------------------------------------------------------

Endomorphism::Endomorphism(AlgebraDescriptor algebra, Eigen::MatrixXd matrix)
    : algebra_(algebra), matrix_(std::move(matrix)) {
  if (matrix_.rows() != algebra_.dim() || matrix_.cols() != algebra_.dim()) {
    throw ValidationError("endomorphism of " + algebra_.name() + " must be " + std::to_string(algebra_.dim()) +
                          "x" + std::to_string(algebra_.dim()));
  }
}

Endomorphism Endomorphism::identity(const AlgebraDescriptor& algebra) {
  return {algebra, Eigen::MatrixXd::Identity(algebra.dim(), algebra.dim())};
}

Endomorphism Endomorphism::scalar(const AlgebraDescriptor& algebra, double s) {
  return {algebra, s * Eigen::MatrixXd::Identity(algebra.dim(), algebra.dim())};
}

Element Endomorphism::apply(const Element& x) const {
  require_same_algebra(algebra_, x.algebra(), "endomorphism application");
  return {algebra_, matrix_ * x.coords()};
}

Endomorphism Endomorphism::operator*(const Endomorphism& other) const {
  require_same_algebra(algebra_, other.algebra_, "composition");
  return {algebra_, matrix_ * other.matrix_};
}

Endomorphism Endomorphism::operator+(const Endomorphism& other) const {
  require_same_algebra(algebra_, other.algebra_, "endomorphism sum");
  return {algebra_, matrix_ + other.matrix_};
}

Endomorphism Endomorphism::operator-(const Endomorphism& other) const {
  require_same_algebra(algebra_, other.algebra_, "endomorphism difference");
  return {algebra_, matrix_ - other.matrix_};
}

Endomorphism Endomorphism::operator*(double s) const { return {algebra_, s * matrix_}; }

Endomorphism operator*(double s, const Endomorphism& f) { return f * s; }

Endomorphism Endomorphism::adjoint() const { return {algebra_, matrix_.transpose()}; }

Endomorphism Endomorphism::inverse() const {
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(matrix_);
  double rcond = lu.rcond();
  if (!(rcond > 1e-300)) {
    throw SingularError("endomorphism of " + algebra_.name() + " is singular");
  }
  if (1.0 / rcond > 1e12) {
    std::ostringstream msg;
    msg << "inverting ill-conditioned endomorphism (condition estimate " << 1.0 / rcond << ")";
    log::warning(msg.str());
  }
  return {algebra_, lu.inverse()};
}

double Endomorphism::ddet() const { return matrix_.determinant(); }

double Endomorphism::distance(const Endomorphism& other) const {
  require_same_algebra(algebra_, other.algebra_, "endomorphism distance");
  return (matrix_ - other.matrix_).cwiseAbs().maxCoeff();
}

}  // namespace conelab
