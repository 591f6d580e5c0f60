#pragma once

// Functions f: V -> R carried together with the closed form they are known
// (or declared) to have.  Used both as w-logarithmic Cauchy functions and as
// the logarithm of the multiplicative factor of a density.

#include "conelab/jordan.hpp"
#include "conelab/peirce.hpp"

#include <functional>
#include <optional>
#include <string>

namespace conelab {

enum class DeclaredForm { log_det_power, delta_s_log, custom };

std::string to_string(DeclaredForm form);

struct LogCauchyFn {
  std::function<double(const Element&)> evaluator;
  DeclaredForm form = DeclaredForm::custom;
  /// log_det_power: f = kappa log det.
  double kappa = 0.0;
  /// delta_s_log: f = log Delta_s relative to frame.
  std::optional<PowerExponent> s;
  std::optional<JordanFrame> frame;

  double operator()(const Element& x) const { return evaluator(x); }

  static LogCauchyFn log_det_power(double kappa);
  static LogCauchyFn delta_s_log(PowerExponent s, JordanFrame frame);
  static LogCauchyFn custom(std::function<double(const Element&)> f);
  static LogCauchyFn zero();
};

}  // namespace conelab
