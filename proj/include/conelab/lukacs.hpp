#pragma once

// The quotient/sum map (x, y) -> (g(x+y)x, x+y), its Jacobian, the joint
// density factorization it induces, and Monte-Carlo checks of independence
// and K-invariance of the quotient.

#include "conelab/distributions.hpp"
#include "conelab/multiplication.hpp"
#include "conelab/stats.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace conelab {

struct QuotientPair {
  Element u;  // in D
  Element v;  // in V
};

/// (g(x+y)x, x+y).  Throws DomainError when x or y is not in V.
QuotientPair quotient_map(const Element& x, const Element& y, const MultiplicationAlgorithm& w);
/// (w(v)u, w(v)(e-u)).  Throws DomainError when u is not in D or v not in V.
std::pair<Element, Element> inverse_map(const Element& u, const Element& v, const MultiplicationAlgorithm& w);

struct JacobianCheck {
  double analytic = 0;  // (det v)^{dim/r}
  double numeric = 0;   // |det| of the central-difference derivative of the inverse map
  double relative = 0;
};

/// Full 2dim x 2dim derivative of (u, v) -> inverse_map(u, v) by central
/// differences with step fd_step (1 + |v|).  Throws NumericError when the
/// step underflows.
JacobianCheck jacobian_check(const Element& u, const Element& v, const MultiplicationAlgorithm& w,
                             double fd_step = 1e-5);
/// Same at a random u in D.
JacobianCheck jacobian_check(const Element& v, const MultiplicationAlgorithm& w, Rng& rng, double fd_step = 1e-5);

/// Random element of D with eigenvalues uniform in [lo, hi] within (0, 1).
Element random_domain_element(const AlgebraDescriptor& algebra, Rng& rng, double lo = 0.05, double hi = 0.95);

/// max over (x, y) of
///   |log[(det(x+y))^{dim/r} f_X(x) f_Y(y)] - log[f_U(u) f_V(v)]|
/// with f_V(v) = C det(v)^{dim/r} e(v) f(v) exp<Lambda,v> and
/// f_U(u) = C' e(w(e)u) f(w(e)(e-u)), C C' = C_X C_Y.
/// Strict mode throws ContractError when the models carry different Lambda
/// or an algorithm other than w; otherwise Lambda_X is used.
double factorization_residual(const DensityModel& model_x, const DensityModel& model_y,
                              const MultiplicationAlgorithm& w, const std::vector<std::pair<Element, Element>>& samples,
                              bool strict = true);

struct IndependenceReport {
  double statistic = 0;  // projection-averaged squared distance correlation
  double p_value = 1;
  int n = 0;
  int n_perm = 0;
  int projections = 0;
  std::uint64_t seed = 0;
};

/// Independence of U and V computed from paired draws of X and Y.
/// Throws InsufficientSamples when n < 100.
IndependenceReport independence_test(const std::vector<Element>& samples_x, const std::vector<Element>& samples_y,
                                     const MultiplicationAlgorithm& w, int n_perm, std::uint64_t seed,
                                     int projections = 8);

/// n draws of (U, V) with X ~ R(px), Y ~ R(py).
std::vector<QuotientPair> quotient_sample(const RieszParams& px, const RieszParams& py,
                                          const MultiplicationAlgorithm& w, int n, Rng& rng);

/// Rows of coordinates of the U resp. V parts.
Eigen::MatrixXd u_matrix(const std::vector<QuotientPair>& pairs);
Eigen::MatrixXd v_matrix(const std::vector<QuotientPair>& pairs);

struct KInvarianceQuotientReport {
  int n = 0;
  int rotations = 0;
  int n_perm = 0;
  std::uint64_t seed = 0;
  std::vector<double> statistics;  // energy statistic between U and kU, per rotation
  std::vector<double> p_values;
  double max_statistic = 0;
  double min_p_value = 1;
  double combined_p_value = 1;     // Fisher combination over rotations
};

/// For each of `rotations` random k in K, a two-sample energy test between a
/// batch of U and k applied to an independent batch of U.  Batches are fresh
/// per rotation so the per-rotation p-values are independent and combine
/// with Fisher's method.
KInvarianceQuotientReport k_invariant_quotient_check(const RieszParams& px, const RieszParams& py,
                                                     const MultiplicationAlgorithm& w, int n, int rotations,
                                                     int n_perm, std::uint64_t seed, int projections = 8);

}  // namespace conelab
