#pragma once

// Internal spectral helpers shared by the library sources.  Unlike
// spectral_decompose these skip frame validation.

#include "conelab/jordan.hpp"

#include <vector>

namespace conelab::detail {

struct Eigenparts {
  std::vector<double> values;  // descending
  std::vector<Element> idempotents;
};

Eigenparts eigenparts(const Element& x);
Element spectral_function(const Eigenparts& parts, double (*fn)(double, double), double arg);

}  // namespace conelab::detail
