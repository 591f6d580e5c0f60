#include "conelab/triangular.hpp"

#include "conelab/error.hpp"
#include "conelab/peirce.hpp"

#include <cmath>

namespace conelab {

Endomorphism box_operator(const Element& x, const Element& y) {
  require_same_algebra(x, y, "box_operator");
  Endomorphism lx = lmap(x);
  Endomorphism ly = lmap(y);
  return lmap(jordan_product(x, y)) + lx * ly - ly * lx;
}

Endomorphism frobenius_transform(const Element& c, const Element& z) {
  require_same_algebra(c, z, "frobenius_transform");
  require_idempotent(c, "frobenius_transform");
  Element zh = peirce_project_unchecked(z, c, PeirceEigenvalue::half);
  Endomorphism n = 2.0 * box_operator(zh, c);
  return Endomorphism::identity(c.algebra()) + n + 0.5 * (n * n);
}

namespace {

// 2 (z[]c) y = 2 ((zc) y + z (c y) - c (z y))
Element nilpotent_apply(const Element& c, const Element& z, const Element& zc, const Element& y) {
  return 2.0 * (jordan_product(zc, y) + jordan_product(z, jordan_product(c, y)) -
                jordan_product(c, jordan_product(z, y)));
}

// 2 (c[]z) y = 2 ((cz) y + c (z y) - z (c y))
Element nilpotent_adjoint_apply(const Element& c, const Element& z, const Element& zc, const Element& y) {
  return 2.0 * (jordan_product(zc, y) + jordan_product(c, jordan_product(z, y)) -
                jordan_product(z, jordan_product(c, y)));
}

Element diagonal_root(const TriangularElement& t, double power) {
  Element d = Element::zero(t.frame.algebra());
  for (int k = 0; k < t.frame.rank(); ++k) d += std::pow(t.alpha[k], power) * t.frame[k];
  return d;
}

}  // namespace

Element frobenius_apply(const Element& c, const Element& z, const Element& y) {
  Element zc = jordan_product(z, c);
  Element ny = nilpotent_apply(c, z, zc, y);
  Element nny = nilpotent_apply(c, z, zc, ny);
  return y + ny + 0.5 * nny;
}

Element frobenius_apply_adjoint(const Element& c, const Element& z, const Element& y) {
  Element zc = jordan_product(z, c);
  Element ny = nilpotent_adjoint_apply(c, z, zc, y);
  Element nny = nilpotent_adjoint_apply(c, z, zc, ny);
  return y + ny + 0.5 * nny;
}

TriangularElement TriangularElement::identity(const JordanFrame& frame) {
  std::vector<Element> z(frame.rank() - 1, Element::zero(frame.algebra()));
  return {frame, std::move(z), Eigen::VectorXd::Ones(frame.rank())};
}

Element TriangularElement::apply(const Element& y) const {
  Element out = quad_apply(diagonal_root(*this, 0.5), y);
  for (int j = frame.rank() - 2; j >= 0; --j) out = frobenius_apply(frame[j], z[j], out);
  return out;
}

Element TriangularElement::apply_inverse(const Element& y) const {
  Element out = y;
  for (int j = 0; j + 1 < frame.rank(); ++j) out = frobenius_apply(frame[j], -z[j], out);
  return quad_apply(diagonal_root(*this, -0.5), out);
}

Element TriangularElement::apply_adjoint(const Element& y) const {
  Element out = y;
  for (int j = 0; j + 1 < frame.rank(); ++j) out = frobenius_apply_adjoint(frame[j], z[j], out);
  return quad_apply(diagonal_root(*this, 0.5), out);
}

Element TriangularElement::image_of_identity() const {
  Element out = diagonal_root(*this, 1.0);
  for (int j = frame.rank() - 2; j >= 0; --j) out = frobenius_apply(frame[j], z[j], out);
  return out;
}

TriangularElement triangular_decompose(const Element& x, const JordanFrame& frame) {
  require_same_algebra(x.algebra(), frame.algebra(), "triangular_decompose");
  const int r = frame.rank();
  TriangularElement t{frame, {}, Eigen::VectorXd(r)};
  t.z.reserve(r - 1);
  Element y = x;
  for (int j = 0; j < r; ++j) {
    const Element& c = frame[j];
    double a = inner(y, c) / inner(c, c);
    if (!(a > 0.0)) {
      throw DomainError("triangular_decompose: element is not in the cone (alpha_" + std::to_string(j + 1) +
                        " = " + std::to_string(a) + ")");
    }
    t.alpha[j] = a;
    if (j + 1 == r) break;
    Element h = peirce_project_unchecked(y, c, PeirceEigenvalue::half);
    Element rest = peirce_project_unchecked(y, c, PeirceEigenvalue::zero);
    y = rest - (1.0 / a) * peirce_project_unchecked(square(h), c, PeirceEigenvalue::zero);
    t.z.push_back((1.0 / a) * h);
  }
  return t;
}

namespace {

template <class Fn>
Endomorphism materialize(const AlgebraDescriptor& alg, Fn&& fn) {
  const int n = alg.dim();
  Eigen::MatrixXd m(n, n);
  for (int k = 0; k < n; ++k) m.col(k) = fn(Element::basis(alg, k)).coords();
  return {alg, std::move(m)};
}

}  // namespace

Endomorphism as_endomorphism(const TriangularElement& t) {
  return materialize(t.frame.algebra(), [&](const Element& b) { return t.apply(b); });
}

Endomorphism adjoint(const TriangularElement& t) {
  return materialize(t.frame.algebra(), [&](const Element& b) { return t.apply_adjoint(b); });
}

TriangularElement compose(const TriangularElement& t, const TriangularElement& t2) {
  return triangular_decompose(t.apply(t2.image_of_identity()), t.frame);
}

double frobenius_parameter_residual(const TriangularElement& t) {
  const int r = t.frame.rank();
  double worst = 0.0;
  for (int j = 0; j + 1 < r; ++j) {
    // sum_{k>j} E_jk = E(c_j, 1/2) intersected with E(c_0 + .. + c_{j-1}, 0)
    const Element& z = t.z[j];
    Element inside = peirce_project_unchecked(z, t.frame[j], PeirceEigenvalue::half);
    Element upper = t.frame.partial_sum(j);
    if (j > 0) inside = peirce_project_unchecked(inside, upper, PeirceEigenvalue::zero);
    worst = std::max(worst, norm(z - inside) / (1.0 + norm(z)));
  }
  return worst;
}

}  // namespace conelab
