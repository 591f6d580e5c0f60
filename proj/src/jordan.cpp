#include "conelab/jordan.hpp"

#include "conelab/error.hpp"
#include "jordan_detail.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace conelab {
namespace {

constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kInvSqrt2 = 0.7071067811865476;

void require_kind(const Element& x, AlgebraKind kind, const char* what) {
  if (x.algebra().kind() != kind) {
    throw ValidationError(std::string(what) + " is not defined for " + x.algebra().name());
  }
}

Element lorentz_product(const Element& x, const Element& y) {
  const auto& a = x.coords();
  const auto& b = y.coords();
  Eigen::VectorXd out(a.size());
  out[0] = a.dot(b);
  const auto n = a.size() - 1;
  out.tail(n) = a[0] * b.tail(n) + b[0] * a.tail(n);
  return {x.algebra(), std::move(out)};
}

Eigen::MatrixXd random_special_orthogonal(int n, Rng& rng) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXd g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = normal(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd& r = qr.matrixQR();
  for (int j = 0; j < n; ++j) {
    if (r(j, j) < 0) q.col(j) *= -1.0;
  }
  if (q.determinant() < 0) q.col(0) *= -1.0;
  return q;
}

Eigen::MatrixXcd random_unitary(int n, Rng& rng) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXcd g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = {normal(rng), normal(rng)};
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd& r = qr.matrixQR();
  for (int j = 0; j < n; ++j) {
    double mag = std::abs(r(j, j));
    if (mag > 0) q.col(j) *= std::conj(r(j, j) / mag);
  }
  return q;
}

}  // namespace

// ---------------------------------------------------------------------------
// matrix views

Eigen::MatrixXd to_real_matrix(const Element& x) {
  require_kind(x, AlgebraKind::sym_real, "to_real_matrix");
  const int r = x.algebra().order();
  const auto& c = x.coords();
  Eigen::MatrixXd m(r, r);
  int k = r;
  for (int i = 0; i < r; ++i) {
    m(i, i) = c[i];
    for (int j = i + 1; j < r; ++j, ++k) {
      m(i, j) = m(j, i) = c[k] * kInvSqrt2;
    }
  }
  return m;
}

Element from_real_matrix(const AlgebraDescriptor& algebra, const Eigen::MatrixXd& m) {
  if (algebra.kind() != AlgebraKind::sym_real || m.rows() != algebra.order() || m.cols() != algebra.order()) {
    throw ValidationError("from_real_matrix: shape does not match " + algebra.name());
  }
  const int r = algebra.order();
  Eigen::VectorXd c(algebra.dim());
  int k = r;
  for (int i = 0; i < r; ++i) {
    c[i] = m(i, i);
    for (int j = i + 1; j < r; ++j, ++k) c[k] = kInvSqrt2 * (m(i, j) + m(j, i));
  }
  return {algebra, std::move(c)};
}

Eigen::MatrixXcd to_complex_matrix(const Element& x) {
  require_kind(x, AlgebraKind::herm_complex, "to_complex_matrix");
  const int r = x.algebra().order();
  const auto& c = x.coords();
  Eigen::MatrixXcd m(r, r);
  int k = r;
  for (int i = 0; i < r; ++i) {
    m(i, i) = c[i];
    for (int j = i + 1; j < r; ++j, k += 2) {
      std::complex<double> v(c[k] * kInvSqrt2, c[k + 1] * kInvSqrt2);
      m(i, j) = v;
      m(j, i) = std::conj(v);
    }
  }
  return m;
}

Element from_complex_matrix(const AlgebraDescriptor& algebra, const Eigen::MatrixXcd& m) {
  if (algebra.kind() != AlgebraKind::herm_complex || m.rows() != algebra.order() ||
      m.cols() != algebra.order()) {
    throw ValidationError("from_complex_matrix: shape does not match " + algebra.name());
  }
  const int r = algebra.order();
  Eigen::VectorXd c(algebra.dim());
  int k = r;
  for (int i = 0; i < r; ++i) {
    c[i] = m(i, i).real();
    for (int j = i + 1; j < r; ++j, k += 2) {
      std::complex<double> v = 0.5 * (m(i, j) + std::conj(m(j, i)));
      c[k] = kSqrt2 * v.real();
      c[k + 1] = kSqrt2 * v.imag();
    }
  }
  return {algebra, std::move(c)};
}

// ---------------------------------------------------------------------------
// products

Element jordan_product(const Element& x, const Element& y) {
  require_same_algebra(x, y, "jordan_product");
  const auto& alg = x.algebra();
  switch (alg.kind()) {
    case AlgebraKind::sym_real: {
      Eigen::MatrixXd a = to_real_matrix(x);
      Eigen::MatrixXd b = to_real_matrix(y);
      Eigen::MatrixXd ab = a * b;
      return from_real_matrix(alg, 0.5 * (ab + ab.transpose()));
    }
    case AlgebraKind::herm_complex: {
      Eigen::MatrixXcd a = to_complex_matrix(x);
      Eigen::MatrixXcd b = to_complex_matrix(y);
      Eigen::MatrixXcd ab = a * b;
      return from_complex_matrix(alg, 0.5 * (ab + ab.adjoint()));
    }
    case AlgebraKind::lorentz:
      return lorentz_product(x, y);
  }
  throw ValidationError("unknown algebra kind");
}

Element square(const Element& x) { return jordan_product(x, x); }

Endomorphism lmap(const Element& x) {
  const auto& alg = x.algebra();
  const int n = alg.dim();
  Eigen::MatrixXd m(n, n);
  if (alg.kind() == AlgebraKind::lorentz) {
    const auto& c = x.coords();
    m.setZero();
    m(0, 0) = c[0];
    m.block(0, 1, 1, n - 1) = c.tail(n - 1).transpose();
    m.block(1, 0, n - 1, 1) = c.tail(n - 1);
    m.bottomRightCorner(n - 1, n - 1).diagonal().setConstant(c[0]);
    return {alg, std::move(m)};
  }
  for (int k = 0; k < n; ++k) m.col(k) = jordan_product(x, Element::basis(alg, k)).coords();
  return {alg, std::move(m)};
}

Element quad_apply(const Element& x, const Element& y) {
  require_same_algebra(x, y, "quad_rep");
  const auto& alg = x.algebra();
  switch (alg.kind()) {
    case AlgebraKind::sym_real: {
      Eigen::MatrixXd a = to_real_matrix(x);
      return from_real_matrix(alg, a * to_real_matrix(y) * a);
    }
    case AlgebraKind::herm_complex: {
      Eigen::MatrixXcd a = to_complex_matrix(x);
      return from_complex_matrix(alg, a * to_complex_matrix(y) * a);
    }
    case AlgebraKind::lorentz:
      return 2.0 * lorentz_product(x, lorentz_product(x, y)) - lorentz_product(lorentz_product(x, x), y);
  }
  throw ValidationError("unknown algebra kind");
}

Endomorphism quad_rep(const Element& x) {
  const auto& alg = x.algebra();
  if (alg.kind() == AlgebraKind::lorentz) {
    Endomorphism l = lmap(x);
    return 2.0 * (l * l) - lmap(square(x));
  }
  const int n = alg.dim();
  Eigen::MatrixXd m(n, n);
  for (int k = 0; k < n; ++k) m.col(k) = quad_apply(x, Element::basis(alg, k)).coords();
  return {alg, std::move(m)};
}

// ---------------------------------------------------------------------------
// frames

JordanFrame::JordanFrame(std::vector<Element> idempotents) : idempotents_(std::move(idempotents)) {
  if (idempotents_.empty()) throw ValidationError("Jordan frame must be non-empty");
  const auto& alg = idempotents_.front().algebra();
  if (static_cast<int>(idempotents_.size()) != alg.rank()) {
    throw ValidationError("Jordan frame of " + alg.name() + " needs " + std::to_string(alg.rank()) +
                          " idempotents, got " + std::to_string(idempotents_.size()));
  }
  Element sum = Element::zero(alg);
  for (std::size_t i = 0; i < idempotents_.size(); ++i) {
    const Element& ci = idempotents_[i];
    require_same_algebra(ci, sum, "Jordan frame");
    if ((square(ci) - ci).coords().cwiseAbs().maxCoeff() > kIdempotentTolerance) {
      throw ValidationError("frame element " + std::to_string(i + 1) + " is not idempotent");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (jordan_product(ci, idempotents_[j]).coords().cwiseAbs().maxCoeff() > kIdempotentTolerance) {
        throw ValidationError("frame elements " + std::to_string(j + 1) + " and " + std::to_string(i + 1) +
                              " are not orthogonal");
      }
    }
    sum += ci;
  }
  if ((sum - Element::identity(alg)).coords().cwiseAbs().maxCoeff() > kIdempotentTolerance) {
    throw ValidationError("frame does not sum to the identity");
  }
  standard_ = true;
  // Compare against the standard frame without recursing into validation.
  for (int i = 0; i < alg.rank() && standard_; ++i) {
    Eigen::VectorXd ref = Eigen::VectorXd::Zero(alg.dim());
    if (alg.kind() == AlgebraKind::lorentz) {
      ref[0] = 0.5;
      ref[1] = i == 0 ? 0.5 : -0.5;
    } else {
      ref[i] = 1.0;
    }
    standard_ = (idempotents_[i].coords() - ref).cwiseAbs().maxCoeff() < 1e-12;
  }
}

JordanFrame JordanFrame::standard(const AlgebraDescriptor& alg) {
  std::vector<Element> c;
  for (int i = 0; i < alg.rank(); ++i) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(alg.dim());
    if (alg.kind() == AlgebraKind::lorentz) {
      v[0] = 0.5;
      v[1] = i == 0 ? 0.5 : -0.5;
    } else {
      v[i] = 1.0;
    }
    c.emplace_back(alg, std::move(v));
  }
  return JordanFrame(std::move(c));
}

Element JordanFrame::partial_sum(int k) const {
  if (k < 0 || k > rank()) throw ValidationError("partial_sum: index out of range");
  Element s = Element::zero(algebra());
  for (int i = 0; i < k; ++i) s += idempotents_[i];
  return s;
}

JordanFrame JordanFrame::transformed(const Endomorphism& k) const {
  std::vector<Element> c;
  c.reserve(idempotents_.size());
  for (const auto& ci : idempotents_) c.push_back(k.apply(ci));
  return JordanFrame(std::move(c));
}

// ---------------------------------------------------------------------------
// spectral

namespace detail {

Eigenparts eigenparts(const Element& x) {
  const auto& alg = x.algebra();
  Eigenparts out;
  switch (alg.kind()) {
    case AlgebraKind::sym_real: {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(to_real_matrix(x));
      const int r = alg.order();
      for (int i = r - 1; i >= 0; --i) {
        Eigen::VectorXd v = es.eigenvectors().col(i);
        out.values.push_back(es.eigenvalues()[i]);
        out.idempotents.push_back(from_real_matrix(alg, v * v.transpose()));
      }
      return out;
    }
    case AlgebraKind::herm_complex: {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(to_complex_matrix(x));
      const int r = alg.order();
      for (int i = r - 1; i >= 0; --i) {
        Eigen::VectorXcd v = es.eigenvectors().col(i);
        out.values.push_back(es.eigenvalues()[i]);
        out.idempotents.push_back(from_complex_matrix(alg, v * v.adjoint()));
      }
      return out;
    }
    case AlgebraKind::lorentz: {
      const auto& c = x.coords();
      const int n = alg.order();
      Eigen::VectorXd bar = c.tail(n);
      double rho = bar.norm();
      Eigen::VectorXd u = Eigen::VectorXd::Zero(n);
      if (rho > 0) {
        u = bar / rho;
      } else {
        u[0] = 1.0;
      }
      Eigen::VectorXd plus(n + 1), minus(n + 1);
      plus << 0.5, 0.5 * u;
      minus << 0.5, -0.5 * u;
      out.values = {c[0] + rho, c[0] - rho};
      out.idempotents = {Element(alg, std::move(plus)), Element(alg, std::move(minus))};
      return out;
    }
  }
  throw ValidationError("unknown algebra kind");
}

Element spectral_function(const Eigenparts& parts, double (*fn)(double, double), double arg) {
  Element out = Element::zero(parts.idempotents.front().algebra());
  for (std::size_t i = 0; i < parts.values.size(); ++i) out += fn(parts.values[i], arg) * parts.idempotents[i];
  return out;
}

}  // namespace detail

Element SpectralDecomposition::reconstruct() const {
  Element out = Element::zero(frame.algebra());
  for (int i = 0; i < frame.rank(); ++i) out += eigenvalues[i] * frame[i];
  return out;
}

SpectralDecomposition spectral_decompose(const Element& x) {
  detail::Eigenparts parts = detail::eigenparts(x);
  Eigen::VectorXd values = Eigen::Map<const Eigen::VectorXd>(parts.values.data(), parts.values.size());
  return {JordanFrame(std::move(parts.idempotents)), std::move(values)};
}

Eigen::VectorXd eigenvalues(const Element& x) {
  const auto& alg = x.algebra();
  switch (alg.kind()) {
    case AlgebraKind::sym_real: {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(to_real_matrix(x), Eigen::EigenvaluesOnly);
      return es.eigenvalues().reverse();
    }
    case AlgebraKind::herm_complex: {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(to_complex_matrix(x), Eigen::EigenvaluesOnly);
      return es.eigenvalues().reverse();
    }
    case AlgebraKind::lorentz: {
      double rho = x.coords().tail(alg.order()).norm();
      Eigen::VectorXd v(2);
      v << x[0] + rho, x[0] - rho;
      return v;
    }
  }
  throw ValidationError("unknown algebra kind");
}

TraceDet trace_det(const Element& x) {
  Eigen::VectorXd lambda = eigenvalues(x);
  return {lambda.sum(), lambda.prod()};
}

double trace(const Element& x) {
  const auto& alg = x.algebra();
  if (alg.kind() == AlgebraKind::lorentz) return 2.0 * x[0];
  return x.coords().head(alg.order()).sum();
}

double det(const Element& x) {
  const auto& alg = x.algebra();
  switch (alg.kind()) {
    case AlgebraKind::sym_real:
      return to_real_matrix(x).determinant();
    case AlgebraKind::herm_complex:
      return to_complex_matrix(x).determinant().real();
    case AlgebraKind::lorentz: {
      double rho = x.coords().tail(alg.order()).norm();
      return (x[0] + rho) * (x[0] - rho);
    }
  }
  throw ValidationError("unknown algebra kind");
}

bool in_cone(const Element& x) { return eigenvalues(x).minCoeff() > 0.0; }

Element inverse(const Element& x) {
  detail::Eigenparts parts = detail::eigenparts(x);
  double max_abs = 0.0, min_abs = std::numeric_limits<double>::infinity();
  for (double v : parts.values) {
    max_abs = std::max(max_abs, std::abs(v));
    min_abs = std::min(min_abs, std::abs(v));
  }
  if (!(max_abs > 0.0) || min_abs < kSingularRatio * max_abs) {
    throw SingularError("element of " + x.algebra().name() + " is singular (min |lambda| = " +
                        std::to_string(min_abs) + ")");
  }
  return detail::spectral_function(parts, [](double v, double) { return 1.0 / v; }, 0.0);
}

Element power(const Element& x, double p) {
  detail::Eigenparts parts = detail::eigenparts(x);
  for (double v : parts.values) {
    if (!(v > 0.0)) throw DomainError("power: element is not in the cone");
  }
  return detail::spectral_function(parts, [](double v, double e) { return std::pow(v, e); }, p);
}

// ---------------------------------------------------------------------------
// random generation

Element random_gaussian_element(const AlgebraDescriptor& alg, Rng& rng) {
  std::normal_distribution<double> normal;
  Eigen::VectorXd c(alg.dim());
  for (int i = 0; i < alg.dim(); ++i) c[i] = normal(rng);
  return {alg, std::move(c)};
}

Element random_element(const AlgebraDescriptor& alg, Rng& rng, const SpectrumSpec& spectrum) {
  if (spectrum.hi < spectrum.lo) throw ValidationError("spectrum spec: hi < lo");
  if (spectrum.log_uniform && !(spectrum.lo > 0)) throw ValidationError("log-uniform spectrum needs lo > 0");
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const int r = alg.rank();
  Eigen::VectorXd lambda(r);
  for (int i = 0; i < r; ++i) {
    double t = unif(rng);
    lambda[i] = spectrum.log_uniform
                    ? std::exp(std::log(spectrum.lo) + t * (std::log(spectrum.hi) - std::log(spectrum.lo)))
                    : spectrum.lo + t * (spectrum.hi - spectrum.lo);
  }
  switch (alg.kind()) {
    case AlgebraKind::sym_real: {
      Eigen::MatrixXd o = random_special_orthogonal(r, rng);
      return from_real_matrix(alg, o * lambda.asDiagonal() * o.transpose());
    }
    case AlgebraKind::herm_complex: {
      Eigen::MatrixXcd u = random_unitary(r, rng);
      Eigen::MatrixXcd d = lambda.cast<std::complex<double>>().asDiagonal();
      return from_complex_matrix(alg, u * d * u.adjoint());
    }
    case AlgebraKind::lorentz: {
      const int n = alg.order();
      Eigen::MatrixXd o = random_special_orthogonal(n, rng);
      Eigen::VectorXd u = o.col(0);
      Eigen::VectorXd c(n + 1);
      c << 0.5 * (lambda[0] + lambda[1]), 0.5 * (lambda[0] - lambda[1]) * u;
      return {alg, std::move(c)};
    }
  }
  throw ValidationError("unknown algebra kind");
}

Endomorphism random_automorphism_k(const AlgebraDescriptor& alg, Rng& rng) {
  const int n = alg.dim();
  Eigen::MatrixXd m(n, n);
  switch (alg.kind()) {
    case AlgebraKind::sym_real: {
      Eigen::MatrixXd o = random_special_orthogonal(alg.order(), rng);
      for (int k = 0; k < n; ++k) {
        m.col(k) = from_real_matrix(alg, o * to_real_matrix(Element::basis(alg, k)) * o.transpose()).coords();
      }
      break;
    }
    case AlgebraKind::herm_complex: {
      Eigen::MatrixXcd u = random_unitary(alg.order(), rng);
      for (int k = 0; k < n; ++k) {
        m.col(k) =
            from_complex_matrix(alg, u * to_complex_matrix(Element::basis(alg, k)) * u.adjoint()).coords();
      }
      break;
    }
    case AlgebraKind::lorentz: {
      m.setZero();
      m(0, 0) = 1.0;
      m.bottomRightCorner(n - 1, n - 1) = random_special_orthogonal(alg.order(), rng);
      break;
    }
  }
  return {alg, std::move(m)};
}

}  // namespace conelab
