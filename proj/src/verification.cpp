#include "conelab/verification.hpp"

#include "conelab/lukacs.hpp"
#include "conelab/peirce.hpp"
#include "conelab/triangular.hpp"

#include <algorithm>
#include <cmath>

namespace conelab {

double AxiomResiduals::max() const {
  return std::max({commutativity, jordan_identity, neutrality, form_associativity});
}

double PeirceResiduals::max() const { return std::max({table, square, product}); }

double TriangularResiduals::max() const { return std::max({round_trip, delta_equivariance, frobenius_unit}); }

AxiomResiduals check_axioms(const AlgebraDescriptor& algebra, int triples, Rng& rng) {
  AxiomResiduals r;
  r.triples = triples;
  const Element e = Element::identity(algebra);
  for (int i = 0; i < triples; ++i) {
    Element x = random_gaussian_element(algebra, rng);
    Element y = random_gaussian_element(algebra, rng);
    Element z = random_gaussian_element(algebra, rng);
    const double nx = norm(x), ny = norm(y), nz = norm(z);
    Element xy = jordan_product(x, y);
    Element x2 = square(x);
    r.commutativity = std::max(r.commutativity, norm(xy - jordan_product(y, x)) / (nx * ny));
    r.jordan_identity = std::max(
        r.jordan_identity, norm(jordan_product(x, jordan_product(x2, y)) - jordan_product(x2, xy)) / (nx * nx * nx * ny));
    r.neutrality = std::max(r.neutrality, norm(jordan_product(e, x) - x) / nx);
    r.form_associativity = std::max(r.form_associativity,
                                    std::abs(inner(xy, z) - inner(y, jordan_product(x, z))) / (nx * ny * nz));
  }
  return r;
}

namespace {

Element random_in(const PeirceBasis& b, int i, int j, Rng& rng) {
  std::normal_distribution<double> n;
  Eigen::VectorXd c(b.subspace(i, j).size());
  for (auto& v : c) v = n(rng);
  return b.compose(c, i, j);
}

JordanFrame random_frame(const AlgebraDescriptor& algebra, Rng& rng) {
  return JordanFrame::standard(algebra).transformed(random_automorphism_k(algebra, rng));
}

}  // namespace

PeirceResiduals check_peirce(const AlgebraDescriptor& algebra, int samples, Rng& rng) {
  PeirceResiduals out;
  out.samples = samples;
  const int r = algebra.rank(), d = algebra.peirce_d();
  int total = 0;
  PeirceBasis basis = build_peirce_basis(random_frame(algebra, rng));
  for (const auto& [key, vecs] : basis.subspaces) total += static_cast<int>(vecs.size());
  out.dim_formula = algebra.dim() == r + d * r * (r - 1) / 2 && total == algebra.dim();
  out.table = peirce_table_residual(basis);
  if (r < 2) return out;
  std::uniform_int_distribution<int> pick(0, r - 1);
  for (int s = 0; s < samples; ++s) {
    if (s > 0 && s % 50 == 0) basis = build_peirce_basis(random_frame(algebra, rng));
    int i = pick(rng), j = pick(rng);
    while (j == i) j = pick(rng);
    Element x = random_in(basis, std::min(i, j), std::max(i, j), rng);
    const double nx2 = trace_form(x, x);
    Element expect = (basis.frame[i] + basis.frame[j]) * (0.5 * nx2);
    out.square = std::max(out.square, norm(square(x) - expect) / nx2);
    if (r < 3) continue;
    int k = pick(rng);
    while (k == i || k == j) k = pick(rng);
    Element y = random_in(basis, std::min(j, k), std::max(j, k), rng);
    PeirceNormCheck c = peirce_norm_identities(basis, i, j, k, x, y);
    const double ny2 = trace_form(y, y);
    out.square = std::max(out.square, c.square_residual / nx2);
    out.product = std::max(out.product, c.product_residual / (nx2 * ny2));
  }
  return out;
}

TriangularResiduals check_triangular(const AlgebraDescriptor& algebra, int samples, Rng& rng) {
  TriangularResiduals out;
  out.samples = samples;
  const int r = algebra.rank();
  std::uniform_real_distribution<double> sdist(-2.0, 3.0);
  JordanFrame frame = random_frame(algebra, rng);
  PeirceBasis basis = build_peirce_basis(frame);
  for (int n = 0; n < samples; ++n) {
    if (n > 0 && n % 50 == 0) {
      frame = random_frame(algebra, rng);
      basis = build_peirce_basis(frame);
    }
    Eigen::VectorXd sv(r);
    for (auto& v : sv) v = sdist(rng);
    PowerExponent s(sv);
    Element x = random_element(algebra, rng, {});
    Element y = random_element(algebra, rng, {});
    TriangularElement t = triangular_decompose(x, frame);
    out.round_trip = std::max(out.round_trip, norm(t.image_of_identity() - x) / norm(x));
    double lhs = log_generalized_power(t.apply(y), s, frame);
    double rhs = log_generalized_power(t.image_of_identity(), s, frame) + log_generalized_power(y, s, frame);
    out.delta_equivariance = std::max(out.delta_equivariance, std::abs(lhs - rhs));
    if (r < 2) continue;
    // a single Frobenius factor: z in the sum of E_ik, k > i
    int i = n % (r - 1);
    Element z = Element::zero(algebra);
    for (int k = i + 1; k < r; ++k) z += random_in(basis, i, k, rng);
    Element img = frobenius_apply(frame[i], z, Element::identity(algebra));
    out.frobenius_unit = std::max(out.frobenius_unit, std::abs(log_generalized_power(img, s, frame)));
  }
  return out;
}

JacobianResiduals check_jacobian(const AlgebraDescriptor& algebra, const MultiplicationAlgorithm& w, int points,
                                 Rng& rng) {
  JacobianResiduals out;
  out.points = points;
  for (int i = 0; i < points; ++i) {
    Element y = random_element(algebra, rng, {});
    double expect = std::pow(det(y), algebra.dim_over_rank());
    out.ddet = std::max(out.ddet, std::abs(w.evaluate(y).ddet() / expect - 1));
    out.jacobian = std::max(out.jacobian, jacobian_check(y, w, rng).relative);
  }
  return out;
}

}  // namespace conelab
