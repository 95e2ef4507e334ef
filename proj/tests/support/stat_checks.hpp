// SPDX-License-Identifier: Apache-2.0
//
// Statistical helpers for tests: chi-square survival function via the
// regularized incomplete gamma function, and a Kolmogorov-Smirnov check
// against Uniform(0,1).

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace testsupport {

// Regularized lower incomplete gamma P(a, x), series expansion.
// Converges fast for x < a + 1.
inline double gamma_p_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  for (int k = 1; k < 100000; ++k) {
    term *= x / (a + k);
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Regularized upper incomplete gamma Q(a, x), Lentz continued fraction.
// Converges fast for x >= a + 1.
inline double gamma_q_cf(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 100000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < 1e-16) break;
  }
  return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Survival function of the chi-square distribution with dof degrees of
// freedom, i.e. P(X > x).
inline double chi2_sf(double x, double dof) {
  if (x <= 0.0) return 1.0;
  const double a = 0.5 * dof;
  const double half = 0.5 * x;
  if (half < a + 1.0) return 1.0 - gamma_p_series(a, half);
  return gamma_q_cf(a, half);
}

// Pearson chi-square statistic for observed counts against expected counts.
// Bins with expected mass below min_expected are pooled into the last kept
// bin. Returns the survival-function p-value.
inline double chi2_gof_pvalue(const std::vector<double>& observed,
                              const std::vector<double>& expected,
                              double min_expected = 5.0) {
  if (observed.size() != expected.size() || observed.empty())
    throw std::invalid_argument("chi2_gof_pvalue: size mismatch");
  std::vector<double> obs, exp;
  double pool_o = 0.0, pool_e = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    pool_o += observed[i];
    pool_e += expected[i];
    if (pool_e >= min_expected) {
      obs.push_back(pool_o);
      exp.push_back(pool_e);
      pool_o = pool_e = 0.0;
    }
  }
  if (pool_e > 0.0) {
    if (obs.empty()) {
      obs.push_back(pool_o);
      exp.push_back(pool_e);
    } else {
      obs.back() += pool_o;
      exp.back() += pool_e;
    }
  }
  if (obs.size() < 2) throw std::invalid_argument("chi2_gof_pvalue: one bin");
  double stat = 0.0;
  for (std::size_t i = 0; i < obs.size(); ++i) {
    const double diff = obs[i] - exp[i];
    stat += diff * diff / exp[i];
  }
  return chi2_sf(stat, static_cast<double>(obs.size() - 1));
}

// Two-sided KS distance of a sample against Uniform(0,1).
inline double ks_uniform_distance(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  double d = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double u = values[i];
    d = std::max(d, (i + 1) / n - u);
    d = std::max(d, u - i / n);
  }
  return d;
}

// Asymptotic KS critical value at level alpha for sample size n.
inline double ks_critical(double alpha, std::size_t n) {
  return std::sqrt(-0.5 * std::log(alpha / 2.0)) /
         std::sqrt(static_cast<double>(n));
}

}  // namespace testsupport
