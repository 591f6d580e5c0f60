#pragma once

// w-logarithmic Cauchy functions, the additive Pexider equation and a
// constructive solver for the Olkin-Baker equation
//   a(x) + b(y) = c(x + y) + d(g(x + y) x)
// on a symmetric cone.

#include "conelab/log_cauchy.hpp"
#include "conelab/multiplication.hpp"

#include <json.hpp>

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace conelab {

using ScalarOracle = std::function<double(const Element&)>;
using ElementPairs = std::vector<std::pair<Element, Element>>;

/// n pairs of independent random cone points.
ElementPairs random_pairs(const AlgebraDescriptor& algebra, int n, Rng& rng, const SpectrumSpec& spectrum = {});

/// max |f(x) + f(w(e)y) - f(w(x)y)| over the pairs.
double wlog_residual(const LogCauchyFn& f, const MultiplicationAlgorithm& w, const ElementPairs& samples);

// ---- additive Pexider equation a(x) + b(y) = c(x + y) --------------------

struct PexiderSample {
  Element x;
  Element y;
  double a;  // a(x)
  double b;  // b(y)
  double c;  // c(x + y)
};

struct PexiderFit {
  Element lambda;
  double alpha = 0;
  double beta = 0;
  double residual = 0;  // max abs residual of the three fitted relations
};

/// Least-squares fit of a = <lambda,x> + alpha, b = <lambda,y> + beta,
/// c = <lambda,x+y> + alpha + beta.  Throws FitError when the design is rank
/// deficient.
PexiderFit pexider_fit(const std::vector<PexiderSample>& samples);

// ---- Olkin-Baker equation ----------------------------------------------

struct OlkinBakerOracles {
  ScalarOracle a, b, c, d;
};

struct GridSpec {
  int n_grid = 2000;
  SpectrumSpec spectrum;
  std::uint64_t seed = 1;
  /// Accepted max residual of the input equation on the grid.
  double tolerance = 1e-6;
  /// alpha ladder for the limit alpha -> 0 in the boundary substitution.
  std::vector<double> alpha_ladder{0.5, 0.1, 0.02, 0.004};
  /// Grid pairs used for the limit and w-logarithmic diagnostics.
  int diagnostic_points = 200;
  /// Frame for reading off the closed forms of e and f (standard frame when empty).
  std::optional<JordanFrame> frame;
};

struct OBDiagnostics {
  double equation_residual = 0;       // input equation on the grid
  double pexider_residual = 0;        // worst of the s = 2, 3 fits
  double lambda_consistency = 0;      // |lambda(3) - 2 lambda(2)|_max
  double scale_consistency = 0;       // alpha, beta deviation from k log s
  double constant_identity = 0;       // C1 + C2 - C3 - C4
  double reconstruction_residual = 0; // input equation from the recovered form
  double limit_residual = 0;          // a(w(v)u) - a(v) - g(u), Lambda removed
  double limit_uncertainty = 0;       // spread of the last two extrapolants
  double e_wlog_residual = 0;
  double f_wlog_residual = 0;
  double e_form_residual = 0;         // fit of e against log minors
  double f_form_residual = 0;
};

struct OBDecomposition {
  Element lambda;
  double k1 = 0;
  double k2 = 0;
  LogCauchyFn e_fn;
  LogCauchyFn f_fn;
  std::array<double, 4> constants{};
  OBDiagnostics diagnostics;
};

/// Recovers (Lambda, k1, k2, e, f, C1..C4) from oracles of the four
/// functions.  Throws InconsistencyError when the input equation or the
/// scaling relations fail on the grid, FitError when a fit is singular, and
/// ValidationError when w is not homogeneous.
OBDecomposition olkin_baker_decompose(const OlkinBakerOracles& oracles, AlgorithmPtr w,
                                      const AlgebraDescriptor& algebra, const GridSpec& grid = {});

/// Limit of d(alpha u) - k1 log alpha as alpha -> 0 by order-2 Richardson
/// extrapolation over the ladder.  Returns (estimate, spread of the last two
/// extrapolants).
std::pair<double, double> richardson_limit(const std::function<double(double)>& fn,
                                           const std::vector<double>& ladder);

/// Least-squares reading of f as sum_k c_k log Delta_k; returns the declared
/// form (log_det_power, delta_s_log, or custom when the fit residual exceeds
/// tol) with the original evaluator, and the fit residual.
std::pair<LogCauchyFn, double> identify_form(const ScalarOracle& f, const std::vector<Element>& points,
                                             const JordanFrame& frame, double tol = 1e-6);

nlohmann::json to_json(const OBDecomposition& ob);
nlohmann::json to_json(const LogCauchyFn& f);

// ---- forward construction ----------------------------------------------

/// Oracles built from a known solution: a = <Lambda,x> + e + C1,
/// b = <Lambda,x> + f + C2, c = <Lambda,x> + e + f + C3,
/// d(u) = e(w(e)u) + f(e - w(e)u) + C4.  Requires C1 + C2 = C3 + C4.
OlkinBakerOracles forward_oracles(const Element& lambda, const LogCauchyFn& e, const LogCauchyFn& f,
                                  const std::array<double, 4>& constants, AlgorithmPtr w);

// ---- tabulated oracles ---------------------------------------------------

struct OracleQuery {
  char oracle;  // 'a', 'b', 'c' or 'd'
  Element point;
};

/// Every oracle call olkin_baker_decompose makes for this algebra, w and grid
/// (the call pattern does not depend on the returned values), deduplicated
/// and in first-call order.
std::vector<OracleQuery> oracle_queries(AlgorithmPtr w, const AlgebraDescriptor& algebra, const GridSpec& grid);

/// CSV with header "oracle,<coordinate labels>,value"; value left empty when
/// no oracles are given.
void write_oracle_table(const std::string& path, const std::vector<OracleQuery>& queries,
                        const OlkinBakerOracles* values = nullptr);

/// Oracles answering from a table written by write_oracle_table.  Points are
/// matched on their printed coordinates; a missing point throws ConfigError.
OlkinBakerOracles read_oracle_table(const std::string& path, const AlgebraDescriptor& algebra);

// ---- K-invariance --------------------------------------------------------

struct KInvarianceReport {
  int samples = 0;
  double k_residual = 0;    // max |f(kx) - f(x)|
  double det_residual = 0;  // max |f(x) - f(y)| with det x = det y
};

KInvarianceReport k_invariance_check(const LogCauchyFn& f, const AlgebraDescriptor& algebra, Rng& rng, int n);

}  // namespace conelab
