#include "conelab/log_cauchy.hpp"

#include <cmath>

namespace conelab {

std::string to_string(DeclaredForm form) {
  switch (form) {
    case DeclaredForm::log_det_power:
      return "log_det_power";
    case DeclaredForm::delta_s_log:
      return "delta_s_log";
    case DeclaredForm::custom:
      return "custom";
  }
  return "custom";
}

LogCauchyFn LogCauchyFn::log_det_power(double kappa) {
  LogCauchyFn f;
  f.form = DeclaredForm::log_det_power;
  f.kappa = kappa;
  f.evaluator = [kappa](const Element& x) { return kappa == 0.0 ? 0.0 : kappa * std::log(det(x)); };
  return f;
}

LogCauchyFn LogCauchyFn::delta_s_log(PowerExponent s, JordanFrame frame) {
  LogCauchyFn f;
  f.form = DeclaredForm::delta_s_log;
  f.s = s;
  f.frame = frame;
  f.evaluator = [s = std::move(s), frame = std::move(frame)](const Element& x) {
    return log_generalized_power(x, s, frame);
  };
  return f;
}

LogCauchyFn LogCauchyFn::custom(std::function<double(const Element&)> fn) {
  LogCauchyFn f;
  f.evaluator = std::move(fn);
  return f;
}

LogCauchyFn LogCauchyFn::zero() { return log_det_power(0.0); }

}  // namespace conelab
