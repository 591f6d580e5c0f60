#include "conelab/stats.hpp"

#include "conelab/error.hpp"
#include "conelab/parallel.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace conelab::stats {

namespace {

// Fenwick tree over y-ranks holding (count, sum x, sum y, sum xy).
struct Fenwick {
  explicit Fenwick(std::size_t n) : t(n + 1) {}
  struct Node {
    double c = 0, x = 0, y = 0, xy = 0;
  };
  void add(std::size_t i, double x, double y) {
    for (++i; i < t.size(); i += i & (~i + 1)) {
      t[i].c += 1;
      t[i].x += x;
      t[i].y += y;
      t[i].xy += x * y;
    }
  }
  Node prefix(std::size_t i) const {  // ranks < i
    Node s;
    for (; i > 0; i -= i & (~i + 1)) {
      s.c += t[i].c;
      s.x += t[i].x;
      s.y += t[i].y;
      s.xy += t[i].xy;
    }
    return s;
  }
  std::vector<Node> t;
};

// Row sums a_i. = sum_j |v_i - v_j|, given the sort order of v.
std::vector<double> abs_row_sums(const std::vector<double>& v, const std::vector<std::size_t>& order) {
  const std::size_t n = v.size();
  double total = 0;
  for (double a : v) total += a;
  std::vector<double> out(n);
  double below = 0;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t i = order[k];
    double above = total - below - v[i];
    out[i] = v[i] * k - below + above - v[i] * (n - 1 - k);
    below += v[i];
  }
  return out;
}

std::vector<std::size_t> argsort(const std::vector<double>& v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  return idx;
}

// Precomputed pieces of a 1-D dcov between x and y where y may be permuted.
struct DcovPlan {
  std::vector<double> x, y;
  std::vector<std::size_t> x_order;
  std::vector<std::size_t> y_rank;
  std::vector<double> a_row, b_row;
  double a_sum = 0, b_sum = 0;
  double x_var = 0, y_var = 0;  // dcov2(x,x), dcov2(y,y)

  DcovPlan(std::vector<double> xs, std::vector<double> ys) : x(std::move(xs)), y(std::move(ys)) {
    if (x.size() != y.size() || x.empty()) throw ValidationError("dcov: samples must have equal, non-zero length");
    x_order = argsort(x);
    std::vector<std::size_t> y_order = argsort(y);
    y_rank.resize(y.size());
    for (std::size_t k = 0; k < y.size(); ++k) y_rank[y_order[k]] = k;
    a_row = abs_row_sums(x, x_order);
    b_row = abs_row_sums(y, y_order);
    a_sum = std::accumulate(a_row.begin(), a_row.end(), 0.0);
    b_sum = std::accumulate(b_row.begin(), b_row.end(), 0.0);
    x_var = self_term(x, x_order, a_row, a_sum);
    y_var = self_term(y, y_order, b_row, b_sum);
  }

  static double self_term(const std::vector<double>& v, const std::vector<std::size_t>& order,
                          const std::vector<double>& row, double sum) {
    const double n = static_cast<double>(v.size());
    // sum_ij |v_i - v_j|^2 = 2 n sum v^2 - 2 (sum v)^2
    double s1 = 0, s2 = 0, cross = 0;
    for (double a : v) {
      s1 += a;
      s2 += a * a;
    }
    for (double r : row) cross += r * r;
    (void)order;
    double sq = 2 * n * s2 - 2 * s1 * s1;
    return sq / (n * n) + sum * sum / (n * n * n * n) - 2 * cross / (n * n * n);
  }

  // dcov2 with y permuted: pairs (x_i, y_perm[i]).
  double eval(const std::vector<std::size_t>* perm) const {
    const std::size_t n = x.size();
    Fenwick fw(n);
    double pair_sum = 0;
    double cx = 0, sx = 0, sy = 0, sxy = 0;
    for (std::size_t k = 0; k < n; ++k) {
      std::size_t i = x_order[k];
      std::size_t yi_idx = perm ? (*perm)[i] : i;
      double xi = x[i], yi = y[yi_idx];
      std::size_t rank = y_rank[yi_idx];
      Fenwick::Node lt = fw.prefix(rank);
      Fenwick::Node gt{cx - lt.c, sx - lt.x, sy - lt.y, sxy - lt.xy};
      double plus = xi * yi * lt.c - xi * lt.y - yi * lt.x + lt.xy;
      double minus = xi * yi * gt.c - xi * gt.y - yi * gt.x + gt.xy;
      pair_sum += plus - minus;
      fw.add(rank, xi, yi);
      cx += 1;
      sx += xi;
      sy += yi;
      sxy += xi * yi;
    }
    pair_sum *= 2;
    double cross = 0;
    for (std::size_t i = 0; i < n; ++i) cross += a_row[i] * b_row[perm ? (*perm)[i] : i];
    const double nn = static_cast<double>(n);
    return pair_sum / (nn * nn) + a_sum * b_sum / (nn * nn * nn * nn) - 2 * cross / (nn * nn * nn);
  }

  double dcor2(const std::vector<std::size_t>* perm) const {
    double denom = std::sqrt(x_var * y_var);
    if (!(denom > 0)) return 0.0;
    return std::max(0.0, eval(perm)) / denom;
  }
};

Eigen::VectorXd random_direction(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Eigen::VectorXd v(dim);
  for (int i = 0; i < dim; ++i) v[i] = normal(rng);
  return v / v.norm();
}

std::vector<double> project(const Eigen::MatrixXd& m, const Eigen::VectorXd& dir) {
  Eigen::VectorXd p = m * dir;
  return {p.data(), p.data() + p.size()};
}

double permutation_p(double observed, const std::vector<double>& perm_stats) {
  std::size_t ge = 0;
  for (double s : perm_stats)
    if (s >= observed) ++ge;
  return (1.0 + ge) / (1.0 + perm_stats.size());
}

}  // namespace

double dcov2(const std::vector<double>& x, const std::vector<double>& y) { return DcovPlan(x, y).eval(nullptr); }

double dcor2(const std::vector<double>& x, const std::vector<double>& y) { return DcovPlan(x, y).dcor2(nullptr); }

Eigen::MatrixXd whiten(const Eigen::MatrixXd& sample) {
  const Eigen::Index n = sample.rows();
  if (n < 2) throw InsufficientSamples("whiten needs at least two rows");
  Eigen::MatrixXd centered = sample.rowwise() - sample.colwise().mean();
  Eigen::MatrixXd cov = centered.transpose() * centered / static_cast<double>(n - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
  const double top = es.eigenvalues().maxCoeff();
  std::vector<Eigen::Index> keep;
  for (Eigen::Index k = 0; k < cov.rows(); ++k)
    if (es.eigenvalues()[k] > 1e-12 * top && es.eigenvalues()[k] > 0) keep.push_back(k);
  Eigen::MatrixXd out(n, static_cast<Eigen::Index>(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c) {
    Eigen::Index k = keep[c];
    out.col(c) = centered * es.eigenvectors().col(k) / std::sqrt(es.eigenvalues()[k]);
  }
  return out;
}

TestResult projection_dcor_test(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, int projections, int n_perm,
                                std::uint64_t seed) {
  if (a.rows() != b.rows()) throw ValidationError("independence test: samples must have equal length");
  if (projections < 1 || n_perm < 1) throw ValidationError("independence test: projections and n_perm must be >= 1");
  Eigen::MatrixXd wa = whiten(a);
  Eigen::MatrixXd wb = whiten(b);
  std::mt19937_64 rng(seed);
  std::vector<DcovPlan> plans;
  plans.reserve(projections);
  for (int k = 0; k < projections; ++k) {
    Eigen::VectorXd da = random_direction(static_cast<int>(wa.cols()), rng);
    Eigen::VectorXd db = random_direction(static_cast<int>(wb.cols()), rng);
    plans.emplace_back(project(wa, da), project(wb, db));
  }
  auto statistic = [&](const std::vector<std::size_t>* perm) {
    double s = 0;
    for (const auto& p : plans) s += p.dcor2(perm);
    return s / projections;
  };
  TestResult res;
  res.statistic = statistic(nullptr);
  res.n_perm = n_perm;
  std::vector<double> perm_stats(n_perm);
  const std::size_t n = static_cast<std::size_t>(a.rows());
  parallel_for(static_cast<std::size_t>(n_perm), [&](std::size_t b_idx) {
    std::mt19937_64 prng(derive_seed(seed, b_idx));
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), prng);
    perm_stats[b_idx] = statistic(&perm);
  });
  res.p_value = permutation_p(res.statistic, perm_stats);
  return res;
}

namespace {

// Energy distance of a labelled pooled 1-D sample, pooled values sorted.
double energy_sorted(const std::vector<double>& z, const std::vector<char>& label, std::size_t n_a) {
  const std::size_t n = z.size();
  const double na = static_cast<double>(n_a), nb = static_cast<double>(n - n_a);
  // within-group pair sums sum_{i<j} (z_j - z_i) over sorted order
  double cnt[2] = {0, 0}, sum[2] = {0, 0}, within[2] = {0, 0};
  double cnt_all = 0, sum_all = 0, total = 0;
  for (std::size_t k = 0; k < n; ++k) {
    int g = label[k];
    within[g] += z[k] * cnt[g] - sum[g];
    total += z[k] * cnt_all - sum_all;
    cnt[g] += 1;
    sum[g] += z[k];
    cnt_all += 1;
    sum_all += z[k];
  }
  double cross = total - within[0] - within[1];
  return 2.0 * cross / (na * nb) - 2.0 * within[0] / (na * na) - 2.0 * within[1] / (nb * nb);
}

}  // namespace

double energy_distance(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.empty() || y.empty()) throw ValidationError("energy distance: empty sample");
  std::vector<std::pair<double, char>> pooled;
  pooled.reserve(x.size() + y.size());
  for (double v : x) pooled.emplace_back(v, 0);
  for (double v : y) pooled.emplace_back(v, 1);
  std::sort(pooled.begin(), pooled.end());
  std::vector<double> z(pooled.size());
  std::vector<char> lab(pooled.size());
  for (std::size_t k = 0; k < pooled.size(); ++k) {
    z[k] = pooled[k].first;
    lab[k] = pooled[k].second;
  }
  return energy_sorted(z, lab, x.size());
}

TestResult projection_energy_test(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, int projections,
                                  int n_perm, std::uint64_t seed) {
  if (a.cols() != b.cols()) throw ValidationError("energy test: samples must have the same dimension");
  if (a.rows() < 2 || b.rows() < 2) throw InsufficientSamples("energy test needs at least two rows per sample");
  if (projections < 1 || n_perm < 1) throw ValidationError("energy test: projections and n_perm must be >= 1");
  const std::size_t na = static_cast<std::size_t>(a.rows()), nb = static_cast<std::size_t>(b.rows());
  const std::size_t n = na + nb;
  Eigen::MatrixXd pooled(n, a.cols());
  pooled << a, b;
  // scale columns by the pooled standard deviation
  Eigen::RowVectorXd sd = ((pooled.rowwise() - pooled.colwise().mean()).cwiseAbs2().colwise().sum() / (n - 1.0))
                              .cwiseSqrt();
  for (Eigen::Index c = 0; c < pooled.cols(); ++c)
    if (sd[c] > 0) pooled.col(c) /= sd[c];

  std::mt19937_64 rng(seed);
  struct Proj {
    std::vector<double> z;           // sorted values
    std::vector<std::size_t> owner;  // pooled row index of each sorted value
  };
  std::vector<Proj> proj(projections);
  for (int k = 0; k < projections; ++k) {
    std::vector<double> v = project(pooled, random_direction(static_cast<int>(pooled.cols()), rng));
    std::vector<std::size_t> order = argsort(v);
    proj[k].z.resize(n);
    proj[k].owner = order;
    for (std::size_t i = 0; i < n; ++i) proj[k].z[i] = v[order[i]];
  }
  auto statistic = [&](const std::vector<char>& row_label) {
    double s = 0;
    std::vector<char> lab(n);
    for (const auto& p : proj) {
      for (std::size_t i = 0; i < n; ++i) lab[i] = row_label[p.owner[i]];
      s += energy_sorted(p.z, lab, na);
    }
    return s / projections;
  };
  std::vector<char> base(n, 0);
  for (std::size_t i = na; i < n; ++i) base[i] = 1;
  TestResult res;
  res.statistic = statistic(base);
  res.n_perm = n_perm;
  std::vector<double> perm_stats(n_perm);
  parallel_for(static_cast<std::size_t>(n_perm), [&](std::size_t b_idx) {
    std::mt19937_64 prng(derive_seed(seed, b_idx));
    std::vector<char> lab = base;
    std::shuffle(lab.begin(), lab.end(), prng);
    perm_stats[b_idx] = statistic(lab);
  });
  res.p_value = permutation_p(res.statistic, perm_stats);
  return res;
}

double ks_statistic(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw ValidationError("KS statistic: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double d = 0;
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  while (i < a.size() && j < b.size()) {
    double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= v) ++i;
    while (j < b.size() && b[j] <= v) ++j;
    d = std::max(d, std::abs(i / na - j / nb));
  }
  return d;
}

double ks_uniform_distance(std::vector<double> sample) {
  if (sample.empty()) throw ValidationError("KS distance: empty sample");
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0;
  for (std::size_t k = 0; k < sample.size(); ++k) {
    double f = std::clamp(sample[k], 0.0, 1.0);
    d = std::max({d, (k + 1) / n - f, f - k / n});
  }
  return d;
}

double kolmogorov_survival(double lambda) {
  if (lambda <= 0) return 1.0;
  if (lambda < 0.2) return 1.0;
  double sum = 0;
  for (int k = 1; k <= 100; ++k) {
    double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 ? 1.0 : -1.0) * term;
    if (term < 1e-17) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

double ks_two_sample_pvalue(double d, std::size_t n, std::size_t m) {
  double ne = static_cast<double>(n) * m / (static_cast<double>(n) + m);
  double s = std::sqrt(ne);
  return kolmogorov_survival((s + 0.12 + 0.11 / s) * d);
}

double fisher_combine(const std::vector<double>& p_values) {
  if (p_values.empty()) throw ValidationError("fisher_combine: no p-values");
  double stat = 0;
  for (double p : p_values) stat += -2.0 * std::log(std::max(p, 1e-300));
  return boost::math::gamma_q(static_cast<double>(p_values.size()), stat / 2.0);
}

}  // namespace conelab::stats
