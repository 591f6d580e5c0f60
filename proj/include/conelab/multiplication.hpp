#pragma once

// Multiplication algorithms w: V -> G with w(x)e = x, and the matching
// division algorithms g(x) = w(x)^{-1}.

#include "conelab/jordan.hpp"
#include "conelab/triangular.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

namespace conelab {

class MultiplicationAlgorithm {
 public:
  virtual ~MultiplicationAlgorithm() = default;

  /// Serialized form: "w1", "w2", "interp:<alpha>", "kext:<base>:<seed>", ...
  virtual std::string name() const = 0;
  /// w(x).  Throws DomainError when x is not in V.
  virtual Endomorphism evaluate(const Element& x) const = 0;
  /// g(x) = w(x)^{-1}.  Default: dense LU inverse of evaluate(x).
  virtual Endomorphism division(const Element& x) const;
  /// w(x) y.  Default materializes evaluate(x).
  virtual Element multiply(const Element& x, const Element& y) const;
  /// g(x) y.
  virtual Element divide(const Element& x, const Element& y) const;
  /// Whether w(sx) = s w(x) is expected to hold.
  virtual bool declared_homogeneous() const { return true; }
};

using AlgorithmPtr = std::shared_ptr<const MultiplicationAlgorithm>;

/// w1(x) = P(x^{1/2}).
AlgorithmPtr make_w1();
/// w2(x) = t_x for the given frame (standard frame of x's algebra when empty).
AlgorithmPtr make_w2(std::optional<JordanFrame> frame = std::nullopt);
/// P(x^alpha) t_{x^{1-2alpha}}; alpha = 1/2 gives w1, alpha = 0 gives w2.
AlgorithmPtr make_interp(double alpha, std::optional<JordanFrame> frame = std::nullopt);
/// w(x) k for a fixed k in K.  `label` is what name() reports after the base.
AlgorithmPtr make_kext(AlgorithmPtr base, Endomorphism k, std::string label);
/// w1 where det x > 1 and w2 elsewhere (not homogeneous).
AlgorithmPtr make_piecewise();
/// Arbitrary user-supplied w.
AlgorithmPtr make_custom(std::string name, std::function<Endomorphism(const Element&)> w, bool homogeneous);

/// Parses a config string for the given algebra; "kext:<base>:<seed>" draws
/// k from random_automorphism_k seeded with <seed>.  Throws ConfigError.
AlgorithmPtr parse_algorithm(std::string_view spec, const AlgebraDescriptor& algebra);

inline Element multiply(const MultiplicationAlgorithm& w, const Element& x, const Element& y) {
  return w.multiply(x, y);
}
inline Element divide(const MultiplicationAlgorithm& w, const Element& x, const Element& y) {
  return w.divide(x, y);
}

struct AlgorithmReport {
  std::string algorithm;
  int samples = 0;
  double neutrality = 0;         // ||w(x)e - x|| / ||x||
  double division = 0;           // ||g(x)x - e|| / ||e||
  double inverse = 0;            // max-abs of g(x)w(x) - I
  int cone_violations = 0;       // w(x)y not in V for x, y in V
  double homogeneity = 0;        // max-abs of w(sx) - s w(x), relative
  double degree_one_scaling = 0; // max-abs of g(sx) - g(x)/s, relative
  double ddet = 0;               // |DDet w(y) / (det y)^{dim/r} - 1|
  double det_multiplicative = 0; // |det(w(y)x) / (det y det x) - 1|
  bool homogeneous = false;      // homogeneity <= 1e-9
};

AlgorithmReport check_algorithm(const MultiplicationAlgorithm& w, const AlgebraDescriptor& algebra,
                                int sample_count, Rng& rng);

}  // namespace conelab
