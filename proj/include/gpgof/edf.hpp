// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <vector>

#include "gpgof/count_sample.hpp"
#include "gpgof/family.hpp"
#include "gpgof/pmf.hpp"

namespace gpgof {

// Model and empirical distribution functions shared by the two EDF
// statistics, built once per (sample, params) pair. model_tail[j] is
// 1 - F(j) accumulated backwards from the table tail, which keeps the
// small denominators of the quadratic statistic accurate where forward
// subtraction would cancel.
struct EdfInputs {
  std::vector<double> model_pmf;
  std::vector<double> model_cdf;
  std::vector<double> model_tail;
  std::vector<double> emp_cdf;  // F_n(j), j = 0..m1; one beyond
  std::int64_t n = 0;
  int m1 = 0;

  double model_f(int j) const {
    return j < static_cast<int>(model_pmf.size()) ? model_pmf[j] : 0.0;
  }
  double model_F(int j) const {
    if (j < 0) return 0.0;
    if (j < static_cast<int>(model_cdf.size())) return model_cdf[j];
    return model_cdf.empty() ? 0.0 : model_cdf.back();
  }
  double model_T(int j) const {  // 1 - F(j) without cancellation
    if (j < 0) return 1.0;
    if (j < static_cast<int>(model_tail.size())) return model_tail[j];
    return model_tail.empty() ? 1.0 : model_tail.back();
  }
  double emp_F(int j) const {
    if (j < 0) return 0.0;
    if (j <= m1) return emp_cdf[j];
    return 1.0;
  }
};

inline EdfInputs build_edf_inputs(const CountSample& sample,
                                  const FamilySpec& spec,
                                  const FittedParams& par,
                                  double mass_tol = 1e-12) {
  EdfInputs in;
  PmfTable tbl = pmf_table(spec, par, mass_tol);
  in.model_pmf = std::move(tbl.p);
  const int len = static_cast<int>(in.model_pmf.size());
  in.model_cdf.resize(len);
  in.model_tail.resize(len);
  double c = 0.0;
  for (int j = 0; j < len; ++j) in.model_cdf[j] = c += in.model_pmf[j];
  double t = tbl.cdf_tail;
  for (int j = len; j-- > 0;) {
    in.model_tail[j] = t;
    t += in.model_pmf[j];
  }
  in.n = sample.n;
  in.m1 = sample.max_value();
  in.emp_cdf.resize(in.m1 + 1);
  std::int64_t acc = 0;
  for (int j = 0; j <= in.m1; ++j) {
    acc += j < static_cast<int>(sample.freq.size()) ? sample.freq[j] : 0;
    in.emp_cdf[j] = static_cast<double>(acc) / static_cast<double>(sample.n);
  }
  return in;
}

struct AdResult {
  double value = 0.0;
  // No summable term existed: F(1)(1-F(1)) was already below the cutoff.
  bool degenerate = false;
};

// Quadratic EDF statistic with variance weighting,
//   n * sum_j (F_n(j) - F(j))^2 f(j) / (F(j)(1 - F(j))),
// summed from j = 1 up to 30, stopping early once the denominator falls
// below denom_cutoff (terms at and beyond that point are numerically
// unusable and excluded).
inline AdResult ad_statistic(const EdfInputs& in,
                             double denom_cutoff = 1e-10) {
  double sum = 0.0;
  int terms = 0;
  for (int j = 1; j <= 30; ++j) {
    const double denom = in.model_F(j) * in.model_T(j);
    if (denom < denom_cutoff) break;
    const double diff = in.emp_F(j) - in.model_F(j);
    sum += diff * diff * in.model_f(j) / denom;
    ++terms;
  }
  return {static_cast<double>(in.n) * sum, terms == 0};
}

// Unweighted quadratic EDF statistic,
//   n * sum_j (F_n(j) - F(j))^2 f(j),  j = 0..max(30, M1).
inline double cvm_statistic(const EdfInputs& in) {
  const int jmax = std::max(30, in.m1);
  double sum = 0.0;
  for (int j = 0; j <= jmax; ++j) {
    const double f = in.model_f(j);
    if (f == 0.0) continue;
    const double diff = in.emp_F(j) - in.model_F(j);
    sum += diff * diff * f;
  }
  return static_cast<double>(in.n) * sum;
}

inline AdResult ad_statistic(const CountSample& sample, const FamilySpec& spec,
                             const FittedParams& par,
                             double denom_cutoff = 1e-10) {
  return ad_statistic(build_edf_inputs(sample, spec, par), denom_cutoff);
}

inline double cvm_statistic(const CountSample& sample, const FamilySpec& spec,
                            const FittedParams& par) {
  return cvm_statistic(build_edf_inputs(sample, spec, par));
}

}  // namespace gpgof
