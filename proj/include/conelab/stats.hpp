#pragma once

// Nonparametric test statistics used by the Monte-Carlo harnesses.
// Multivariate samples are n x p matrices, one row per observation.

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace conelab::stats {

/// Squared sample distance covariance (V-statistic) of two 1-D samples,
/// O(n log n).
double dcov2(const std::vector<double>& x, const std::vector<double>& y);
/// Squared distance correlation in [0, 1].
double dcor2(const std::vector<double>& x, const std::vector<double>& y);

/// Centers the columns and maps the sample covariance to the identity.
/// Columns with (near) zero variance are dropped.
Eigen::MatrixXd whiten(const Eigen::MatrixXd& sample);

struct TestResult {
  double statistic = 0.0;
  double p_value = 1.0;
  int n_perm = 0;
};

/// Independence test between the rows of a and b: mean over `projections`
/// random direction pairs of dcor2 between the projected (whitened)
/// samples; p-value from n_perm joint row permutations of b,
/// (1 + #{T_perm >= T}) / (1 + n_perm).  Deterministic in `seed` and
/// independent of the thread count.
TestResult projection_dcor_test(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, int projections, int n_perm,
                                std::uint64_t seed);

/// Two-sample 1-D energy statistic 2E|X-Y| - E|X-X'| - E|Y-Y'| (V-statistic).
double energy_distance(const std::vector<double>& x, const std::vector<double>& y);

/// Two-sample test: mean energy distance over random projections, p-value
/// from n_perm relabelings of the pooled sample.
TestResult projection_energy_test(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, int projections,
                                  int n_perm, std::uint64_t seed);

/// Two-sample Kolmogorov-Smirnov statistic sup |F_a - F_b|.
double ks_statistic(std::vector<double> a, std::vector<double> b);
/// One-sample KS distance to U(0, 1).
double ks_uniform_distance(std::vector<double> sample);
/// Kolmogorov survival function Q(lambda) = 2 sum (-1)^{k-1} exp(-2 k^2 lambda^2).
double kolmogorov_survival(double lambda);
/// Asymptotic p-value of the two-sample KS test (Stephens' small-sample correction).
double ks_two_sample_pvalue(double d, std::size_t n, std::size_t m);

/// Fisher's combination of independent p-values: P(chi2_{2k} >= -2 sum log p).
double fisher_combine(const std::vector<double>& p_values);

}  // namespace conelab::stats
