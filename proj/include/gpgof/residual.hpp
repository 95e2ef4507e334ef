// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "gpgof/count_sample.hpp"
#include "gpgof/family.hpp"
#include "gpgof/weights.hpp"

namespace gpgof {

// Residual of the pmf recurrence evaluated on sample frequencies:
//
//   d(k) = (k+1) f_{k+1} - lambda * sum_{u=0}^{k} f_u q_{k-u}(theta),
//
// with f_k the relative frequencies. Under the hypothesized family with
// true parameters, E d(k) = 0 for every k. For k >= M1 (the sample
// maximum) the first term vanishes and d(k) reduces to the convolution
// tail, which decays at the rate of the q coefficients.
struct ResidualVector {
  std::vector<double> d;
  int m1 = 0;
  // Upper bound on the weighted squared-residual mass beyond the stored
  // range, from the family's tail decay ratio and w_k <= 1. Exactly zero
  // for pb, whose residuals vanish identically past m1 + nu - 1.
  double tail_bound = 0.0;
};

namespace detail {

// Evaluates d(k) on demand; grows its q cache geometrically.
class ResidualEval {
 public:
  ResidualEval(const CountSample& s, const FamilySpec& spec,
               const FittedParams& par)
      : spec_(spec), par_(par), m1_(s.max_value()) {
    validate_params(spec, par.lambda, par.theta);
    f_.resize(m1_ + 1);
    for (int k = 0; k <= m1_; ++k) f_[k] = s.rel_freq(k);
    q_ = rate_coeff_vector(spec_, par_.theta, m1_ + 16);
  }

  int m1() const { return m1_; }

  double at(int k) {
    if (static_cast<int>(q_.size()) <= k)
      q_ = rate_coeff_vector(spec_, par_.theta,
                             std::max(k + 1, 2 * static_cast<int>(q_.size())));
    const int lo = std::max(0, k - m1_);
    double conv = 0.0;
    for (int j = lo; j <= k; ++j) conv += q_[j] * f_[k - j];
    const double lead = k < m1_ ? (k + 1) * f_[k + 1] : 0.0;
    return lead - par_.lambda * conv;
  }

 private:
  FamilySpec spec_;
  FittedParams par_;
  int m1_;
  std::vector<double> f_;
  std::vector<double> q_;
};

}  // namespace detail

// d(0..kmax) with no truncation logic; diagnostic use.
inline std::vector<double> residual_range(const CountSample& sample,
                                          const FamilySpec& spec,
                                          const FittedParams& par, int kmax) {
  if (kmax < 0) throw std::domain_error("kmax must be >= 0");
  detail::ResidualEval eval(sample, spec, par);
  std::vector<double> d(static_cast<std::size_t>(kmax) + 1);
  for (int k = 0; k <= kmax; ++k) d[k] = eval.at(k);
  return d;
}

// Residuals truncated once five consecutive weighted squared terms past M1
// fall below trunc_tol (hard cap M1 + 10^4 terms). The scheme only affects
// where truncation strikes; the stored residuals themselves are
// scheme-independent.
inline ResidualVector residuals(const CountSample& sample,
                                const FamilySpec& spec,
                                const FittedParams& par,
                                const WeightScheme& scheme,
                                double trunc_tol = 1e-14) {
  if (!(trunc_tol > 0.0)) throw std::domain_error("trunc_tol must be > 0");
  validate_scheme(scheme);
  detail::ResidualEval eval(sample, spec, par);
  const int m1 = eval.m1();
  // pb residuals are exactly zero from m1 + nu on; running through that
  // point makes the reported tail bound exact.
  const int stop_floor = spec.id == family_id::pb ? m1 + spec.nu : m1;
  const int hard_cap = m1 + 10000;

  ResidualVector rv;
  rv.m1 = m1;
  WeightIter w(scheme);
  int consecutive = 0;
  int last = 0;
  for (int k = 0;; ++k, w.advance()) {
    const double dk = eval.at(k);
    rv.d.push_back(dk);
    last = k;
    if (k >= stop_floor) {
      consecutive = w.value() * dk * dk < trunc_tol ? consecutive + 1 : 0;
      if (consecutive >= 5) {
        // pp decay ratio theta/(k+1-m1) must be < 1 before the geometric
        // majorant below is valid.
        if (spec.id != family_id::pp || par.theta < k + 1 - m1) break;
      }
    }
    if (k >= hard_cap) break;
  }

  const double dT = rv.d.back();
  double rho;
  switch (spec.id) {
    case family_id::katz:
      rho = par.theta;  // exact: d(k+1) = theta d(k) for k >= m1
      break;
    case family_id::pp:
      rho = par.theta / (last + 1 - m1);
      break;
    case family_id::pb:
      rho = 0.0;
      break;
    default:
      rho = 0.0;
  }
  if (rho >= 1.0) {
    rv.tail_bound = std::numeric_limits<double>::infinity();
  } else {
    rv.tail_bound = dT * dT * rho * rho / (1.0 - rho * rho);
  }
  return rv;
}

// Weighted sum of squared residuals over the stored range.
inline double weighted_statistic(const ResidualVector& rv,
                                 const WeightScheme& scheme) {
  validate_scheme(scheme);
  WeightIter w(scheme);
  double s = 0.0;
  for (double dk : rv.d) {
    s += w.value() * dk * dk;
    w.advance();
  }
  return s;
}

// The goodness-of-fit statistic sum_k w_k d(k)^2, within the residual
// vector's tail_bound of the untruncated series.
inline double statistic(const CountSample& sample, const FamilySpec& spec,
                        const FittedParams& par, const WeightScheme& scheme,
                        double trunc_tol = 1e-14) {
  return weighted_statistic(residuals(sample, spec, par, scheme, trunc_tol),
                            scheme);
}

}  // namespace gpgof
