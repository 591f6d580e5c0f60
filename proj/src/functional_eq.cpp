#include "conelab/functional_eq.hpp"

#include "conelab/error.hpp"
#include "conelab/parallel.hpp"
#include "conelab/peirce.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <unordered_map>

namespace conelab {

ElementPairs random_pairs(const AlgebraDescriptor& algebra, int n, Rng& rng, const SpectrumSpec& spectrum) {
  ElementPairs out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) {
    Element x = random_element(algebra, rng, spectrum);
    Element y = random_element(algebra, rng, spectrum);
    out.emplace_back(std::move(x), std::move(y));
  }
  return out;
}

double wlog_residual(const LogCauchyFn& f, const MultiplicationAlgorithm& w, const ElementPairs& samples) {
  if (samples.empty()) return 0.0;
  const Endomorphism we = w.evaluate(Element::identity(samples.front().first.algebra()));
  std::vector<double> res(samples.size());
  parallel_for(samples.size(), [&](std::size_t i) {
    const auto& [x, y] = samples[i];
    res[i] = std::abs(f(x) + f(we.apply(y)) - f(w.multiply(x, y)));
  });
  return *std::max_element(res.begin(), res.end());
}

PexiderFit pexider_fit(const std::vector<PexiderSample>& samples) {
  if (samples.empty()) throw FitError("pexider_fit: no samples");
  const AlgebraDescriptor& alg = samples.front().x.algebra();
  const int n = alg.dim();
  const Eigen::Index rows = 3 * static_cast<Eigen::Index>(samples.size());
  Eigen::MatrixXd design = Eigen::MatrixXd::Zero(rows, n + 2);
  Eigen::VectorXd rhs(rows);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    require_same_algebra(s.x, s.y, "pexider_fit");
    require_same_algebra(s.x.algebra(), alg, "pexider_fit");
    Eigen::Index r = 3 * static_cast<Eigen::Index>(i);
    design.row(r).head(n) = s.x.coords();
    design(r, n) = 1;
    rhs[r] = s.a;
    design.row(r + 1).head(n) = s.y.coords();
    design(r + 1, n + 1) = 1;
    rhs[r + 1] = s.b;
    design.row(r + 2).head(n) = s.x.coords() + s.y.coords();
    design(r + 2, n) = 1;
    design(r + 2, n + 1) = 1;
    rhs[r + 2] = s.c;
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  if (qr.rank() < n + 2)
    throw FitError("pexider_fit: rank-deficient design (rank " + std::to_string(qr.rank()) + " of " +
                   std::to_string(n + 2) + "); add more samples");
  Eigen::VectorXd sol = qr.solve(rhs);
  PexiderFit fit{Element(alg, sol.head(n)), sol[n], sol[n + 1], 0.0};
  fit.residual = (design * sol - rhs).cwiseAbs().maxCoeff();
  return fit;
}

std::pair<double, double> richardson_limit(const std::function<double(double)>& fn,
                                           const std::vector<double>& ladder) {
  if (ladder.size() < 3) throw ValidationError("richardson_limit: need at least three ladder points");
  std::vector<double> vals(ladder.size());
  for (std::size_t i = 0; i < ladder.size(); ++i) vals[i] = fn(ladder[i]);
  // Lagrange value at 0 of the quadratic through points i, i+1, i+2.
  auto extrapolate = [&](std::size_t i) {
    double sum = 0;
    for (std::size_t a = i; a < i + 3; ++a) {
      double weight = 1;
      for (std::size_t b = i; b < i + 3; ++b)
        if (b != a) weight *= ladder[b] / (ladder[b] - ladder[a]);
      sum += weight * vals[a];
    }
    return sum;
  };
  const std::size_t last = ladder.size() - 3;
  double est = extrapolate(last);
  double spread;
  if (last > 0) {
    spread = std::abs(est - extrapolate(last - 1));
  } else {
    // compare with the linear extrapolant of the last two points
    double h1 = ladder[1], h2 = ladder[2];
    double lin = (h1 * vals[2] - h2 * vals[1]) / (h1 - h2);
    spread = std::abs(est - lin);
  }
  return {est, spread};
}

std::pair<LogCauchyFn, double> identify_form(const ScalarOracle& f, const std::vector<Element>& points,
                                             const JordanFrame& frame, double tol) {
  const int r = frame.rank();
  LogCauchyFn out = LogCauchyFn::custom(f);
  if (points.empty()) return {out, 0.0};
  Eigen::MatrixXd design(points.size(), r);
  Eigen::VectorXd rhs(points.size());
  std::vector<Eigen::VectorXd> minors(points.size());
  parallel_for(points.size(), [&](std::size_t i) {
    minors[i] = principal_minors(points[i], frame);
    rhs[static_cast<Eigen::Index>(i)] = f(points[i]);
  });
  for (std::size_t i = 0; i < points.size(); ++i) design.row(i) = minors[i].array().log().transpose();
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  if (qr.rank() < r) return {out, std::numeric_limits<double>::infinity()};
  Eigen::VectorXd coef = qr.solve(rhs);
  double residual = (design * coef - rhs).cwiseAbs().maxCoeff();
  if (!(residual <= tol)) return {out, residual};
  // sum_k c_k log Delta_k = log Delta_s with c_k = s_k - s_{k+1}
  Eigen::VectorXd s(r);
  double acc = 0;
  for (int k = r - 1; k >= 0; --k) {
    acc += coef[k];
    s[k] = acc;
  }
  bool constant = (s.array() - s[r - 1]).abs().maxCoeff() <= tol * (1 + s.cwiseAbs().maxCoeff());
  if (constant) {
    out.form = DeclaredForm::log_det_power;
    out.kappa = s[r - 1];
  } else {
    out.form = DeclaredForm::delta_s_log;
    out.s = PowerExponent(s);
    out.frame = frame;
  }
  return {out, residual};
}

namespace {

double max_abs(const std::vector<double>& v) {
  double m = 0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double mean(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / v.size();
}

void check_homogeneous(const MultiplicationAlgorithm& w, const ElementPairs& pairs) {
  if (!w.declared_homogeneous())
    throw ValidationError("olkin_baker_decompose: algorithm " + w.name() + " is not homogeneous of degree 1");
  for (std::size_t i = 0; i < std::min<std::size_t>(5, pairs.size()); ++i) {
    const Element& x = pairs[i].first;
    Endomorphism w1 = w.evaluate(x), w2 = w.evaluate(x * 2.0);
    double scale = 1 + w1.matrix().cwiseAbs().maxCoeff();
    if (w2.distance(w1 * 2.0) > 1e-8 * scale)
      throw ValidationError("olkin_baker_decompose: algorithm " + w.name() + " is not homogeneous of degree 1");
  }
}

}  // namespace

OBDecomposition olkin_baker_decompose(const OlkinBakerOracles& oracles, AlgorithmPtr w,
                                      const AlgebraDescriptor& algebra, const GridSpec& grid) {
  if (!oracles.a || !oracles.b || !oracles.c || !oracles.d)
    throw ValidationError("olkin_baker_decompose: all four oracles are required");
  if (grid.n_grid < algebra.dim() + 2) throw FitError("olkin_baker_decompose: grid too small for the fits");
  Rng rng(grid.seed);
  const ElementPairs pairs = random_pairs(algebra, grid.n_grid, rng, grid.spectrum);
  check_homogeneous(*w, pairs);
  const std::size_t n = pairs.size();
  const Element e = Element::identity(algebra);
  const Endomorphism we = w->evaluate(e);
  const JordanFrame frame = grid.frame ? *grid.frame : JordanFrame::standard(algebra);

  std::vector<Element> v, u;
  v.reserve(n);
  u.reserve(n);
  for (const auto& [x, y] : pairs) v.push_back(x + y);
  u.resize(n, e);
  parallel_for(n, [&](std::size_t i) { u[i] = w->divide(v[i], pairs[i].first); });

  OBDiagnostics diag;

  // (0) the input equation on the grid
  std::vector<double> A(n), B(n), Cv(n), D(n), eq(n);
  parallel_for(n, [&](std::size_t i) {
    A[i] = oracles.a(pairs[i].first);
    B[i] = oracles.b(pairs[i].second);
    Cv[i] = oracles.c(v[i]);
    D[i] = oracles.d(u[i]);
    eq[i] = A[i] + B[i] - Cv[i] - D[i];
  });
  diag.equation_residual = max_abs(eq);
  if (!(diag.equation_residual <= grid.tolerance)) {
    std::ostringstream msg;
    msg << "olkin_baker_decompose: equation residual " << diag.equation_residual << " exceeds tolerance "
        << grid.tolerance;
    throw InconsistencyError(msg.str());
  }

  // (1)-(2) additive Pexider fits of a_s, b_s, c_s
  const std::array<double, 2> scales{2.0, 3.0};
  std::array<PexiderFit, 2> fits{PexiderFit{e, 0, 0, 0}, PexiderFit{e, 0, 0, 0}};
  for (std::size_t k = 0; k < scales.size(); ++k) {
    const double s = scales[k];
    std::vector<PexiderSample> samples(n, PexiderSample{e, e, 0, 0, 0});
    parallel_for(n, [&](std::size_t i) {
      const auto& [x, y] = pairs[i];
      samples[i] = PexiderSample{x, y, oracles.a(x * s) - A[i], oracles.b(y * s) - B[i], oracles.c(v[i] * s) - Cv[i]};
    });
    fits[k] = pexider_fit(samples);
    diag.pexider_residual = std::max(diag.pexider_residual, fits[k].residual);
  }
  // lambda(t) = (t - 1) Lambda: least squares over t = 2, 3
  const Element lambda = (fits[0].lambda + fits[1].lambda * 2.0) * (1.0 / 5.0);
  diag.lambda_consistency = (fits[1].lambda.coords() - 2.0 * fits[0].lambda.coords()).cwiseAbs().maxCoeff();
  const double l2 = std::log(2.0), l3 = std::log(3.0);
  const double k1 = (fits[0].alpha * l2 + fits[1].alpha * l3) / (l2 * l2 + l3 * l3);
  const double k2 = (fits[0].beta * l2 + fits[1].beta * l3) / (l2 * l2 + l3 * l3);
  diag.scale_consistency = std::max({std::abs(fits[0].alpha - k1 * l2), std::abs(fits[1].alpha - k1 * l3),
                                     std::abs(fits[0].beta - k2 * l2), std::abs(fits[1].beta - k2 * l3)});
  const double scale_tol = 10 * grid.tolerance * (1 + lambda.coords().cwiseAbs().maxCoeff() + std::abs(k1) + std::abs(k2));
  if (!(diag.pexider_residual <= 10 * grid.tolerance) || !(diag.lambda_consistency <= scale_tol) ||
      !(diag.scale_consistency <= scale_tol)) {
    std::ostringstream msg;
    msg << "olkin_baker_decompose: scaling relations fail (pexider residual " << diag.pexider_residual
        << ", lambda consistency " << diag.lambda_consistency << ", log-scale consistency "
        << diag.scale_consistency << ")";
    throw InconsistencyError(msg.str());
  }

  // (3)-(4) a_bar = a - <Lambda,.> and the w-logarithmic parts
  auto a_bar = [a = oracles.a, lambda](const Element& x) { return a(x) - inner(lambda, x); };
  auto b_bar = [b = oracles.b, lambda](const Element& x) { return b(x) - inner(lambda, x); };
  const double C1 = a_bar(e), C2 = b_bar(e);
  ScalarOracle e_eval = [a_bar, C1](const Element& x) { return a_bar(x) - C1; };
  ScalarOracle f_eval = [b_bar, C2](const Element& x) { return b_bar(x) - C2; };

  // c from x = y = v, d from the boundary substitution
  std::vector<double> c_rest(n), d_rest(n), e_v(n), f_v(n), e_u(n), f_u(n);
  parallel_for(n, [&](std::size_t i) {
    e_v[i] = e_eval(v[i]);
    f_v[i] = f_eval(v[i]);
    Element wu = we.apply(u[i]);
    e_u[i] = e_eval(wu);
    f_u[i] = f_eval(e - wu);
    c_rest[i] = Cv[i] - inner(lambda, v[i]) - e_v[i] - f_v[i];
    d_rest[i] = D[i] - e_u[i] - f_u[i];
  });
  const double C3 = mean(c_rest), C4 = mean(d_rest);
  diag.constant_identity = C1 + C2 - C3 - C4;

  std::vector<double> rec(n);
  parallel_for(n, [&](std::size_t i) {
    const auto& [x, y] = pairs[i];
    double a_rec = inner(lambda, x) + e_eval(x) + C1;
    double b_rec = inner(lambda, y) + f_eval(y) + C2;
    double c_rec = inner(lambda, v[i]) + e_v[i] + f_v[i] + C3;
    double d_rec = e_u[i] + f_u[i] + C4;
    rec[i] = std::max({std::abs(a_rec + b_rec - c_rec - d_rec), std::abs(c_rec - Cv[i]), std::abs(d_rec - D[i])});
  });
  diag.reconstruction_residual = max_abs(rec);

  // limit g(u) = lim {d(alpha u) - k1 log alpha} - (k1 + k2) log 2 - d(e/2);
  // a_bar(w(v)u) - a_bar(v) = g(u), and w(v)u = x on the grid
  const std::size_t m = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(0, grid.diagnostic_points)));
  const double d_half = oracles.d(e * 0.5);
  std::vector<double> lim_res(m), lim_unc(m), e_wlog(m), f_wlog(m);
  parallel_for(m, [&](std::size_t i) {
    auto [lim, unc] = richardson_limit(
        [&](double al) { return oracles.d(u[i] * al) - k1 * std::log(al); }, grid.alpha_ladder);
    double g = lim - (k1 + k2) * l2 - d_half;
    lim_res[i] = a_bar(pairs[i].first) - a_bar(v[i]) - g;
    lim_unc[i] = unc;
    const auto& [x, y] = pairs[i];
    Element wy = we.apply(y), wxy = w->multiply(x, y);
    e_wlog[i] = e_eval(x) + e_eval(wy) - e_eval(wxy);
    f_wlog[i] = f_eval(x) + f_eval(wy) - f_eval(wxy);
  });
  diag.limit_residual = max_abs(lim_res);
  diag.limit_uncertainty = max_abs(lim_unc);
  diag.e_wlog_residual = max_abs(e_wlog);
  diag.f_wlog_residual = max_abs(f_wlog);

  // closed forms of e and f on the grid points
  std::vector<Element> pts;
  pts.reserve(n);
  for (const auto& p : pairs) pts.push_back(p.first);
  auto [e_fn, e_res] = identify_form(e_eval, pts, frame, std::max(1e-6, 10 * grid.tolerance));
  auto [f_fn, f_res] = identify_form(f_eval, pts, frame, std::max(1e-6, 10 * grid.tolerance));
  diag.e_form_residual = e_res;
  diag.f_form_residual = f_res;

  return OBDecomposition{lambda, k1, k2, std::move(e_fn), std::move(f_fn), {C1, C2, C3, C4}, diag};
}

nlohmann::json to_json(const LogCauchyFn& f) {
  nlohmann::json j;
  j["form"] = to_string(f.form);
  if (f.form == DeclaredForm::log_det_power) j["kappa"] = f.kappa;
  if (f.form == DeclaredForm::delta_s_log && f.s) {
    std::vector<double> s(f.s->values().data(), f.s->values().data() + f.s->size());
    j["s"] = s;
  }
  return j;
}

nlohmann::json to_json(const OBDecomposition& ob) {
  nlohmann::json j;
  j["algebra"] = ob.lambda.algebra().name();
  const auto& c = ob.lambda.coords();
  j["lambda"] = std::vector<double>(c.data(), c.data() + c.size());
  j["k1"] = ob.k1;
  j["k2"] = ob.k2;
  j["C"] = ob.constants;
  j["e_fn"] = to_json(ob.e_fn);
  j["f_fn"] = to_json(ob.f_fn);
  const auto& d = ob.diagnostics;
  j["residuals"] = {{"equation", d.equation_residual},
                    {"pexider", d.pexider_residual},
                    {"lambda_consistency", d.lambda_consistency},
                    {"scale_consistency", d.scale_consistency},
                    {"constant_identity", d.constant_identity},
                    {"reconstruction", d.reconstruction_residual},
                    {"limit", d.limit_residual},
                    {"limit_uncertainty", d.limit_uncertainty},
                    {"e_wlog", d.e_wlog_residual},
                    {"f_wlog", d.f_wlog_residual},
                    {"e_form", d.e_form_residual},
                    {"f_form", d.f_form_residual}};
  return j;
}

OlkinBakerOracles forward_oracles(const Element& lambda, const LogCauchyFn& e, const LogCauchyFn& f,
                                  const std::array<double, 4>& C, AlgorithmPtr w) {
  const double gap = C[0] + C[1] - C[2] - C[3];
  if (std::abs(gap) > 1e-12 * (1 + std::abs(C[0]) + std::abs(C[1]) + std::abs(C[2]) + std::abs(C[3])))
    throw ValidationError("forward_oracles: constants must satisfy C1 + C2 = C3 + C4");
  const AlgebraDescriptor alg = lambda.algebra();
  const Element id = Element::identity(alg);
  const Endomorphism we = w->evaluate(id);
  OlkinBakerOracles o;
  o.a = [=](const Element& x) { return inner(lambda, x) + e(x) + C[0]; };
  o.b = [=](const Element& x) { return inner(lambda, x) + f(x) + C[1]; };
  o.c = [=](const Element& x) { return inner(lambda, x) + e(x) + f(x) + C[2]; };
  o.d = [=](const Element& uu) {
    Element wu = we.apply(uu);
    return e(wu) + f(id - wu) + C[3];
  };
  return o;
}

namespace {

std::string point_key(const Element& x) {
  std::string key;
  char buf[40];
  for (Eigen::Index i = 0; i < x.coords().size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", x[static_cast<int>(i)]);
    if (i) key += ',';
    key += buf;
  }
  return key;
}

}  // namespace

std::vector<OracleQuery> oracle_queries(AlgorithmPtr w, const AlgebraDescriptor& algebra, const GridSpec& grid) {
  std::mutex mu;
  std::set<std::pair<char, std::string>> seen;
  std::vector<OracleQuery> found;
  auto recorder = [&](char name) {
    return [&, name](const Element& x) {
      std::lock_guard<std::mutex> lock(mu);
      if (seen.emplace(name, point_key(x)).second) found.push_back({name, x});
      return 0.0;
    };
  };
  OlkinBakerOracles rec{recorder('a'), recorder('b'), recorder('c'), recorder('d')};
  olkin_baker_decompose(rec, std::move(w), algebra, grid);
  // threads record in arbitrary order; sort for a reproducible table
  std::vector<std::pair<std::pair<char, std::string>, std::size_t>> order;
  order.reserve(found.size());
  for (std::size_t i = 0; i < found.size(); ++i) order.push_back({{found[i].oracle, point_key(found[i].point)}, i});
  std::sort(order.begin(), order.end());
  std::vector<OracleQuery> out;
  out.reserve(found.size());
  for (const auto& o : order) out.push_back(found[o.second]);
  return out;
}

void write_oracle_table(const std::string& path, const std::vector<OracleQuery>& queries,
                        const OlkinBakerOracles* values) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write oracle table " + path);
  if (queries.empty()) {
    out << "oracle,value\n";
    return;
  }
  out << "oracle";
  for (const auto& label : queries.front().point.algebra().coordinate_labels()) out << ',' << label;
  out << ",value\n";
  char buf[40];
  for (const auto& q : queries) {
    out << q.oracle << ',' << point_key(q.point) << ',';
    if (values) {
      const ScalarOracle& fn = q.oracle == 'a' ? values->a : q.oracle == 'b' ? values->b : q.oracle == 'c' ? values->c : values->d;
      std::snprintf(buf, sizeof buf, "%.17g", fn(q.point));
      out << buf;
    }
    out << '\n';
  }
}

OlkinBakerOracles read_oracle_table(const std::string& path, const AlgebraDescriptor& algebra) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read oracle table " + path);
  using Table = std::unordered_map<std::string, double>;
  auto tables = std::make_shared<std::map<char, Table>>();
  std::string line;
  std::getline(in, line);  // header
  const int dim = algebra.dim();
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (static_cast<int>(cells.size()) != dim + 2 || cells[0].size() != 1 || std::string("abcd").find(cells[0][0]) == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(line_no) + ": expected oracle letter, " + std::to_string(dim) +
                        " coordinates and a value");
    Eigen::VectorXd c(dim);
    try {
      for (int i = 0; i < dim; ++i) c[i] = std::stod(cells[1 + i]);
      (*tables)[cells[0][0]][point_key(Element(algebra, c))] = std::stod(cells[dim + 1]);
    } catch (const std::logic_error&) {
      throw ConfigError(path + ":" + std::to_string(line_no) + ": unparsable number");
    }
  }
  auto lookup = [tables, path](char name) {
    return [tables, path, name](const Element& x) {
      const Table& t = (*tables)[name];
      auto it = t.find(point_key(x));
      if (it == t.end())
        throw ConfigError(path + ": no tabulated value of " + std::string(1, name) + " at (" + point_key(x) + ")");
      return it->second;
    };
  };
  for (char name : std::string("abcd")) (*tables)[name];  // no insertion while threads read
  return {lookup('a'), lookup('b'), lookup('c'), lookup('d')};
}

KInvarianceReport k_invariance_check(const LogCauchyFn& f, const AlgebraDescriptor& algebra, Rng& rng, int n) {
  KInvarianceReport rep;
  rep.samples = n;
  std::uniform_real_distribution<double> unif(std::log(0.3), std::log(3.0));
  for (int i = 0; i < n; ++i) {
    Element x = random_element(algebra, rng, {});
    Endomorphism k = random_automorphism_k(algebra, rng);
    rep.k_residual = std::max(rep.k_residual, std::abs(f(k.apply(x)) - f(x)));
    if (algebra.rank() < 2) continue;
    SpectralDecomposition sd = spectral_decompose(x);
    Eigen::VectorXd lam = sd.eigenvalues;
    double c = std::exp(unif(rng));
    lam[0] *= c;
    lam[1] /= c;
    Element y = Element::zero(algebra);
    for (int j = 0; j < sd.frame.rank(); ++j) y = y + sd.frame[j] * lam[j];
    rep.det_residual = std::max(rep.det_residual, std::abs(f(x) - f(y)));
  }
  return rep;
}

}  // namespace conelab
