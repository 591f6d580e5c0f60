#pragma once

#include "conelab/algebra.hpp"
#include "conelab/jordan.hpp"

#include <Eigen/Dense>

#include <initializer_list>

namespace testing {

using conelab::AlgebraDescriptor;
using conelab::Element;

inline Element sym(std::initializer_list<std::initializer_list<double>> rows) {
  const int r = static_cast<int>(rows.size());
  Eigen::MatrixXd m(r, r);
  int i = 0;
  for (const auto& row : rows) {
    int j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  return conelab::from_real_matrix(AlgebraDescriptor::sym_real(r), m);
}

inline Element lor(std::initializer_list<double> c) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(c.size()));
  int i = 0;
  for (double x : c) v[i++] = x;
  return Element(AlgebraDescriptor::lorentz(static_cast<int>(c.size()) - 1), v);
}

inline double maxdiff(const Element& a, const Element& b) {
  return (a.coords() - b.coords()).cwiseAbs().maxCoeff();
}

inline double maxdiff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace testing
