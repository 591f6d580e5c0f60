#include "conelab/peirce.hpp"

#include "conelab/error.hpp"

#include <cmath>
#include <set>

namespace conelab {

void require_idempotent(const Element& c, std::string_view what) {
  double res = (square(c) - c).coords().cwiseAbs().maxCoeff();
  if (res > kIdempotentTolerance) {
    throw ValidationError(std::string(what) + ": element is not idempotent (residual " + std::to_string(res) +
                          ")");
  }
}

Element peirce_project_unchecked(const Element& x, const Element& c, PeirceEigenvalue eigenvalue) {
  Element cx = jordan_product(c, x);
  Element ccx = jordan_product(c, cx);
  switch (eigenvalue) {
    case PeirceEigenvalue::one:
      return 2.0 * ccx - cx;
    case PeirceEigenvalue::half:
      return 4.0 * (cx - ccx);
    case PeirceEigenvalue::zero:
      return x - 2.0 * ccx + cx - 4.0 * (cx - ccx);
  }
  throw ValidationError("unknown Peirce eigenvalue");
}

Element peirce_project(const Element& x, const Element& c, PeirceEigenvalue eigenvalue) {
  require_same_algebra(x, c, "peirce_project");
  require_idempotent(c, "peirce_project");
  return peirce_project_unchecked(x, c, eigenvalue);
}

// ---------------------------------------------------------------------------

const std::vector<Element>& PeirceBasis::subspace(int i, int j) const {
  if (i > j) std::swap(i, j);
  auto it = subspaces.find({i, j});
  if (it == subspaces.end()) throw ValidationError("no Peirce subspace E_" + std::to_string(i + 1) +
                                                   std::to_string(j + 1));
  return it->second;
}

Eigen::VectorXd PeirceBasis::coordinates(const Element& x, int i, int j) const {
  const auto& b = subspace(i, j);
  Eigen::VectorXd out(b.size());
  for (std::size_t m = 0; m < b.size(); ++m) out[m] = inner(x, b[m]);
  return out;
}

Element PeirceBasis::compose(const Eigen::VectorXd& coords, int i, int j) const {
  const auto& b = subspace(i, j);
  if (coords.size() != static_cast<Eigen::Index>(b.size())) {
    throw ValidationError("Peirce coordinates have the wrong length");
  }
  Element out = Element::zero(frame.algebra());
  for (std::size_t m = 0; m < b.size(); ++m) out += coords[m] * b[m];
  return out;
}

Element PeirceBasis::project(const Element& x, int i, int j) const { return compose(coordinates(x, i, j), i, j); }

PeirceBasis build_peirce_basis(const JordanFrame& frame) {
  const auto& alg = frame.algebra();
  const int r = frame.rank();
  const int n = alg.dim();
  PeirceBasis out{frame, {}};
  for (int i = 0; i < r; ++i) {
    out.subspaces[{i, i}] = {(1.0 / norm(frame[i])) * frame[i]};
  }
  for (int i = 0; i < r; ++i) {
    for (int j = i + 1; j < r; ++j) {
      std::vector<Element> vecs;
      for (int m = 0; m < n && static_cast<int>(vecs.size()) < alg.peirce_d(); ++m) {
        Element v = peirce_project_unchecked(
            peirce_project_unchecked(Element::basis(alg, m), frame[j], PeirceEigenvalue::half), frame[i],
            PeirceEigenvalue::half);
        for (int pass = 0; pass < 2; ++pass) {
          for (const auto& b : vecs) v -= inner(v, b) * b;
        }
        double len = norm(v);
        if (len > 1e-8) vecs.push_back((1.0 / len) * v);
      }
      if (static_cast<int>(vecs.size()) != alg.peirce_d()) {
        throw ValidationError("Peirce subspace E_" + std::to_string(i + 1) + std::to_string(j + 1) +
                              " has dimension " + std::to_string(vecs.size()) + ", expected " +
                              std::to_string(alg.peirce_d()));
      }
      out.subspaces[{i, j}] = std::move(vecs);
    }
  }
  return out;
}

double peirce_table_residual(const PeirceBasis& basis) {
  using Pair = std::pair<int, int>;
  auto targets = [](Pair a, Pair b) {
    std::vector<Pair> t;
    std::multiset<int> ia{a.first, a.second}, ib{b.first, b.second};
    std::set<int> shared;
    for (int v : ia)
      if (ib.count(v)) shared.insert(v);
    if (shared.empty()) return t;
    bool da = a.first == a.second, db = b.first == b.second;
    if (da && db) {
      t.push_back(a);
    } else if (da) {
      t.push_back(b);
    } else if (db) {
      t.push_back(a);
    } else if (a == b) {
      t.push_back({a.first, a.first});
      t.push_back({a.second, a.second});
    } else {
      int s = *shared.begin();
      int p = a.first == s ? a.second : a.first;
      int q = b.first == s ? b.second : b.first;
      t.push_back({std::min(p, q), std::max(p, q)});
    }
    return t;
  };
  double worst = 0.0;
  for (const auto& [pa, va] : basis.subspaces) {
    for (const auto& [pb, vb] : basis.subspaces) {
      auto t = targets(pa, pb);
      for (const auto& x : va) {
        for (const auto& y : vb) {
          Element prod = jordan_product(x, y);
          Element rest = prod;
          for (const auto& p : t) rest -= basis.project(prod, p.first, p.second);
          worst = std::max(worst, norm(rest));
        }
      }
    }
  }
  return worst;
}

PeirceNormCheck peirce_norm_identities(const PeirceBasis& basis, int i, int j, int k, const Element& x,
                                       const Element& y) {
  const int r = basis.frame.rank();
  if (i < 0 || j < 0 || k < 0 || i >= r || j >= r || k >= r || i == j || j == k || i == k) {
    throw ValidationError("peirce_norm_identities needs distinct indices i, j, k in [0, r)");
  }
  auto check_in = [&](const Element& v, int a, int b, const char* name) {
    double off = norm(v - basis.project(v, a, b));
    if (off > 1e-9 * (1.0 + norm(v))) {
      throw ValidationError(std::string(name) + " is not in E_" + std::to_string(a + 1) + std::to_string(b + 1));
    }
  };
  check_in(x, i, j, "x");
  check_in(y, j, k, "y");
  const double scale = x.algebra().trace_scale();
  Element x2 = square(x);
  double nx = inner(x, x) / scale;
  double ny = inner(y, y) / scale;
  Element xy = jordan_product(x, y);
  double nxy = inner(xy, xy) / scale;
  Element expect = 0.5 * nx * (basis.frame[i] + basis.frame[j]);
  return {x2, nxy, norm(x2 - expect), std::abs(nxy - nx * ny / 8.0)};
}

// ---------------------------------------------------------------------------

PowerExponent::PowerExponent(std::initializer_list<double> s) : s_(static_cast<Eigen::Index>(s.size())) {
  Eigen::Index i = 0;
  for (double v : s) s_[i++] = v;
}

PowerExponent PowerExponent::constant(int rank, double p) { return PowerExponent(Eigen::VectorXd::Constant(rank, p)); }

bool PowerExponent::is_constant() const { return s_.size() == 0 || (s_.array() == s_[0]).all(); }

Eigen::VectorXd principal_minors_generic(const Element& x, const JordanFrame& frame) {
  require_same_algebra(x.algebra(), frame.algebra(), "principal_minor");
  const int r = frame.rank();
  const Element e = Element::identity(x.algebra());
  Eigen::VectorXd out(r);
  Element ek = Element::zero(x.algebra());
  for (int k = 0; k < r; ++k) {
    ek += frame[k];
    out[k] = det(quad_apply(ek, x) + (e - ek));
  }
  return out;
}

Eigen::VectorXd principal_minors(const Element& x, const JordanFrame& frame) {
  require_same_algebra(x.algebra(), frame.algebra(), "principal_minor");
  const auto& alg = x.algebra();
  const int r = frame.rank();
  if (frame.is_standard()) {
    Eigen::VectorXd out(r);
    switch (alg.kind()) {
      case AlgebraKind::sym_real: {
        Eigen::MatrixXd m = to_real_matrix(x);
        for (int k = 1; k <= r; ++k) out[k - 1] = m.topLeftCorner(k, k).determinant();
        return out;
      }
      case AlgebraKind::herm_complex: {
        Eigen::MatrixXcd m = to_complex_matrix(x);
        for (int k = 1; k <= r; ++k) out[k - 1] = m.topLeftCorner(k, k).determinant().real();
        return out;
      }
      case AlgebraKind::lorentz:
        out[0] = x[0] + x[1];
        out[1] = det(x);
        return out;
    }
  }
  return principal_minors_generic(x, frame);
}

double principal_minor(const Element& x, int k, const JordanFrame& frame) {
  if (k < 1 || k > frame.rank()) throw ValidationError("principal_minor: k must be in [1, r]");
  return principal_minors(x, frame)[k - 1];
}

double log_generalized_power(const Element& x, const PowerExponent& s, const JordanFrame& frame) {
  const int r = frame.rank();
  if (s.size() != r) {
    throw ValidationError("power exponent has length " + std::to_string(s.size()) + ", rank is " +
                          std::to_string(r));
  }
  Eigen::VectorXd minors = principal_minors(x, frame);
  double out = 0.0;
  for (int k = 0; k < r; ++k) {
    if (!(minors[k] > 0.0)) {
      throw DomainError("generalized power: principal minor " + std::to_string(k + 1) + " is not positive");
    }
    double next = k + 1 < r ? s[k + 1] : 0.0;
    double expo = s[k] - next;
    if (expo != 0.0) out += expo * std::log(minors[k]);
  }
  return out;
}

double generalized_power(const Element& x, const PowerExponent& s, const JordanFrame& frame) {
  return std::exp(log_generalized_power(x, s, frame));
}

}  // namespace conelab
