#include "conelab/multiplication.hpp"

#include "conelab/error.hpp"
#include "jordan_detail.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

namespace conelab {

Endomorphism MultiplicationAlgorithm::division(const Element& x) const { return evaluate(x).inverse(); }

Element MultiplicationAlgorithm::multiply(const Element& x, const Element& y) const { return evaluate(x).apply(y); }

Element MultiplicationAlgorithm::divide(const Element& x, const Element& y) const { return division(x).apply(y); }

namespace {

// x^p and x^{-p} for x in V, sharing one eigendecomposition.
std::pair<Element, Element> cone_power_pair(const Element& x, double p, const char* who) {
  detail::Eigenparts parts = detail::eigenparts(x);
  for (double v : parts.values) {
    if (!(v > 0.0)) throw DomainError(std::string(who) + ": argument is not in the cone");
  }
  auto pw = [](double v, double e) { return std::pow(v, e); };
  return {detail::spectral_function(parts, pw, p), detail::spectral_function(parts, pw, -p)};
}

template <class Fn>
Endomorphism materialize(const AlgebraDescriptor& alg, Fn&& fn) {
  const int n = alg.dim();
  Eigen::MatrixXd m(n, n);
  for (int k = 0; k < n; ++k) m.col(k) = fn(Element::basis(alg, k)).coords();
  return {alg, std::move(m)};
}

class W1 final : public MultiplicationAlgorithm {
 public:
  std::string name() const override { return "w1"; }
  Endomorphism evaluate(const Element& x) const override {
    return quad_rep(cone_power_pair(x, 0.5, "w1").first);
  }
  Endomorphism division(const Element& x) const override {
    return quad_rep(cone_power_pair(x, 0.5, "w1").second);
  }
  Element multiply(const Element& x, const Element& y) const override {
    return quad_apply(cone_power_pair(x, 0.5, "w1").first, y);
  }
  Element divide(const Element& x, const Element& y) const override {
    return quad_apply(cone_power_pair(x, 0.5, "w1").second, y);
  }
};

class W2 final : public MultiplicationAlgorithm {
 public:
  explicit W2(std::optional<JordanFrame> frame) : frame_(std::move(frame)) {}
  std::string name() const override { return "w2"; }
  Endomorphism evaluate(const Element& x) const override { return as_endomorphism(decompose(x)); }
  Endomorphism division(const Element& x) const override {
    TriangularElement t = decompose(x);
    return materialize(x.algebra(), [&](const Element& b) { return t.apply_inverse(b); });
  }
  Element multiply(const Element& x, const Element& y) const override { return decompose(x).apply(y); }
  Element divide(const Element& x, const Element& y) const override { return decompose(x).apply_inverse(y); }

 private:
  TriangularElement decompose(const Element& x) const {
    if (frame_) {
      require_same_algebra(x.algebra(), frame_->algebra(), "w2");
      return triangular_decompose(x, *frame_);
    }
    return triangular_decompose(x, JordanFrame::standard(x.algebra()));
  }
  std::optional<JordanFrame> frame_;
};

class Interp final : public MultiplicationAlgorithm {
 public:
  Interp(double alpha, std::optional<JordanFrame> frame) : alpha_(alpha), frame_(std::move(frame)) {}
  std::string name() const override {
    std::ostringstream s;
    s << "interp:" << alpha_;
    return s.str();
  }
  Endomorphism evaluate(const Element& x) const override {
    Parts p = parts(x);
    return materialize(x.algebra(), [&](const Element& b) { return quad_apply(p.up, p.t.apply(b)); });
  }
  Endomorphism division(const Element& x) const override {
    Parts p = parts(x);
    return materialize(x.algebra(), [&](const Element& b) { return p.t.apply_inverse(quad_apply(p.down, b)); });
  }
  Element multiply(const Element& x, const Element& y) const override {
    Parts p = parts(x);
    return quad_apply(p.up, p.t.apply(y));
  }
  Element divide(const Element& x, const Element& y) const override {
    Parts p = parts(x);
    return p.t.apply_inverse(quad_apply(p.down, y));
  }

 private:
  struct Parts {
    Element up, down;
    TriangularElement t;
  };
  Parts parts(const Element& x) const {
    auto [up, down] = cone_power_pair(x, alpha_, "interp");
    Element inner_pt = power(x, 1.0 - 2.0 * alpha_);
    const JordanFrame frame = frame_ ? *frame_ : JordanFrame::standard(x.algebra());
    return {std::move(up), std::move(down), triangular_decompose(inner_pt, frame)};
  }
  double alpha_;
  std::optional<JordanFrame> frame_;
};

class KExtended final : public MultiplicationAlgorithm {
 public:
  KExtended(AlgorithmPtr base, Endomorphism k, std::string label)
      : base_(std::move(base)), k_(std::move(k)), kt_(k_.adjoint()), label_(std::move(label)) {}
  std::string name() const override { return "kext:" + base_->name() + ":" + label_; }
  Endomorphism evaluate(const Element& x) const override { return base_->evaluate(x) * k_; }
  Endomorphism division(const Element& x) const override { return kt_ * base_->division(x); }
  Element multiply(const Element& x, const Element& y) const override { return base_->multiply(x, k_.apply(y)); }
  Element divide(const Element& x, const Element& y) const override { return kt_.apply(base_->divide(x, y)); }
  bool declared_homogeneous() const override { return base_->declared_homogeneous(); }

 private:
  AlgorithmPtr base_;
  Endomorphism k_;
  Endomorphism kt_;
  std::string label_;
};

class Piecewise final : public MultiplicationAlgorithm {
 public:
  std::string name() const override { return "piecewise"; }
  Endomorphism evaluate(const Element& x) const override { return pick(x).evaluate(x); }
  Endomorphism division(const Element& x) const override { return pick(x).division(x); }
  Element multiply(const Element& x, const Element& y) const override { return pick(x).multiply(x, y); }
  Element divide(const Element& x, const Element& y) const override { return pick(x).divide(x, y); }
  bool declared_homogeneous() const override { return false; }

 private:
  const MultiplicationAlgorithm& pick(const Element& x) const {
    if (det(x) > 1.0) return w1_;
    return w2_;
  }
  W1 w1_;
  W2 w2_{std::nullopt};
};

class Custom final : public MultiplicationAlgorithm {
 public:
  Custom(std::string name, std::function<Endomorphism(const Element&)> w, bool homogeneous)
      : name_(std::move(name)), w_(std::move(w)), homogeneous_(homogeneous) {}
  std::string name() const override { return name_; }
  Endomorphism evaluate(const Element& x) const override { return w_(x); }
  bool declared_homogeneous() const override { return homogeneous_; }

 private:
  std::string name_;
  std::function<Endomorphism(const Element&)> w_;
  bool homogeneous_;
};

}  // namespace

AlgorithmPtr make_w1() { return std::make_shared<W1>(); }
AlgorithmPtr make_w2(std::optional<JordanFrame> frame) { return std::make_shared<W2>(std::move(frame)); }
AlgorithmPtr make_interp(double alpha, std::optional<JordanFrame> frame) {
  return std::make_shared<Interp>(alpha, std::move(frame));
}
AlgorithmPtr make_kext(AlgorithmPtr base, Endomorphism k, std::string label) {
  if (!base) throw ValidationError("kext: base algorithm is null");
  return std::make_shared<KExtended>(std::move(base), std::move(k), std::move(label));
}
AlgorithmPtr make_piecewise() { return std::make_shared<Piecewise>(); }
AlgorithmPtr make_custom(std::string name, std::function<Endomorphism(const Element&)> w, bool homogeneous) {
  return std::make_shared<Custom>(std::move(name), std::move(w), homogeneous);
}

AlgorithmPtr parse_algorithm(std::string_view spec, const AlgebraDescriptor& algebra) {
  static const char* kValid = "valid: w1, w2, interp:<alpha>, kext:<base>:<seed>, piecewise";
  if (spec == "w1") return make_w1();
  if (spec == "w2") return make_w2();
  if (spec == "piecewise") return make_piecewise();
  if (spec.rfind("interp:", 0) == 0) {
    std::string_view arg = spec.substr(7);
    double alpha = 0;
    auto [ptr, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), alpha);
    if (arg.empty() || ec != std::errc() || ptr != arg.data() + arg.size() || !std::isfinite(alpha)) {
      throw ConfigError("malformed interpolation parameter in '" + std::string(spec) + "'");
    }
    return make_interp(alpha);
  }
  if (spec.rfind("kext:", 0) == 0) {
    std::string_view rest = spec.substr(5);
    auto colon = rest.rfind(':');
    if (colon == std::string_view::npos || colon == 0) {
      throw ConfigError("malformed '" + std::string(spec) + "' (expected kext:<base>:<seed>)");
    }
    std::string_view seed_text = rest.substr(colon + 1);
    unsigned long long seed = 0;
    auto [ptr, ec] = std::from_chars(seed_text.data(), seed_text.data() + seed_text.size(), seed);
    if (seed_text.empty() || ec != std::errc() || ptr != seed_text.data() + seed_text.size()) {
      throw ConfigError("malformed seed in '" + std::string(spec) + "'");
    }
    AlgorithmPtr base = parse_algorithm(rest.substr(0, colon), algebra);
    Rng rng(seed);
    return make_kext(std::move(base), random_automorphism_k(algebra, rng), std::string(seed_text));
  }
  throw ConfigError("unknown multiplication algorithm '" + std::string(spec) + "' (" + kValid + ")");
}

// ---------------------------------------------------------------------------

namespace {

double relative_distance(const Endomorphism& a, const Endomorphism& ref) {
  double scale = std::max(1.0, ref.matrix().cwiseAbs().maxCoeff());
  return a.distance(ref) / scale;
}

}  // namespace

AlgorithmReport check_algorithm(const MultiplicationAlgorithm& w, const AlgebraDescriptor& algebra,
                                int sample_count, Rng& rng) {
  AlgorithmReport rep;
  rep.algorithm = w.name();
  rep.samples = sample_count;
  const Element e = Element::identity(algebra);
  const Endomorphism id = Endomorphism::identity(algebra);
  const double expo = algebra.dim_over_rank();
  std::uniform_real_distribution<double> scale_dist(std::log(0.2), std::log(5.0));
  for (int i = 0; i < sample_count; ++i) {
    Element x = random_element(algebra, rng, {});
    Element y = random_element(algebra, rng, {});
    double s = std::exp(scale_dist(rng));

    Endomorphism wx = w.evaluate(x);
    Endomorphism gx = w.division(x);
    rep.neutrality = std::max(rep.neutrality, norm(wx.apply(e) - x) / norm(x));
    rep.division = std::max(rep.division, norm(gx.apply(x) - e) / norm(e));
    rep.inverse = std::max(rep.inverse, (gx * wx).distance(id));
    if (!in_cone(wx.apply(y))) ++rep.cone_violations;

    Element sx = s * x;
    rep.homogeneity = std::max(rep.homogeneity, relative_distance(w.evaluate(sx), s * wx));
    rep.degree_one_scaling = std::max(rep.degree_one_scaling, relative_distance(w.division(sx), (1.0 / s) * gx));

    double dy = det(y);
    Endomorphism wy = w.evaluate(y);
    rep.ddet = std::max(rep.ddet, std::abs(wy.ddet() / std::pow(dy, expo) - 1.0));
    rep.det_multiplicative = std::max(rep.det_multiplicative, std::abs(det(wy.apply(x)) / (dy * det(x)) - 1.0));
  }
  rep.homogeneous = rep.homogeneity <= 1e-9;
  return rep;
}

}  // namespace conelab
