#pragma once

// Randomized identity checks over a whole algebra, shared by the CLI suites
// and the acceptance runner.  All residuals are relative unless noted.

#include "conelab/multiplication.hpp"

namespace conelab {

struct AxiomResiduals {
  int triples = 0;
  double commutativity = 0;       // |xy - yx| / (|x||y|)
  double jordan_identity = 0;     // |x(x^2 y) - x^2(xy)| / (|x|^3 |y|)
  double neutrality = 0;          // |ex - x| / |x|
  double form_associativity = 0;  // |<xy,z> - <y,xz>| / (|x||y||z|)
  double max() const;
};

AxiomResiduals check_axioms(const AlgebraDescriptor& algebra, int triples, Rng& rng);

struct PeirceResiduals {
  int samples = 0;
  bool dim_formula = false;  // dim = r + d r(r-1)/2 and sum of E_ij dimensions
  double table = 0;          // multiplication-table leakage of basis products
  double square = 0;         // |x^2 - (1/2)|x|^2 (c_i + c_j)| / |x|^2, x in E_ij
  double product = 0;        // | |xy|^2 - |x|^2|y|^2/8 | / (|x|^2|y|^2), rank >= 3
  double max() const;
};

/// Samples are drawn in the Peirce spaces of random frames (a fresh frame
/// every 50 samples).
PeirceResiduals check_peirce(const AlgebraDescriptor& algebra, int samples, Rng& rng);

struct TriangularResiduals {
  int samples = 0;
  double round_trip = 0;        // |t_x e - x| / |x|
  double delta_equivariance = 0; // |log Delta_s(t y) - log Delta_s(t e) - log Delta_s(y)|
  double frobenius_unit = 0;    // |log Delta_s(tau_{c_i}(z) e)|
  double max() const;
};

TriangularResiduals check_triangular(const AlgebraDescriptor& algebra, int samples, Rng& rng);

struct JacobianResiduals {
  int points = 0;
  double ddet = 0;      // |DDet w(y) / (det y)^{dim/r} - 1|
  double jacobian = 0;  // finite-difference Jacobian of the inverse quotient map
};

JacobianResiduals check_jacobian(const AlgebraDescriptor& algebra, const MultiplicationAlgorithm& w, int points,
                                 Rng& rng);

}  // namespace conelab
