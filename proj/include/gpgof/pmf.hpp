// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "gpgof/count_sample.hpp"
#include "gpgof/errors.hpp"
#include "gpgof/family.hpp"
#include "gpgof/rng.hpp"

namespace gpgof {

// Hard cap on tabulated pmf length; exceeding it raises computation_error.
inline constexpr int kPmfMaxLen = 1'000'000;

// Probability table p_0..p_K with the mass beyond K in cdf_tail. Every
// tabled entry is strictly positive and sum(p) + cdf_tail == 1 up to
// rounding.
struct PmfTable {
  std::vector<double> p;
  double cdf_tail = 0.0;
};

// Incrementally unrolls the pmf recurrence
//   p_{k+1} = lambda/(k+1) * sum_{j} q_j p_{k-j}.
// The katz family keeps the running convolution c_k = theta c_{k-1} + p_k,
// which is the same sum folded one term at a time, so each step is O(1);
// the other families convolve against the stored q vector, whose effective
// support is finite (pb exactly, pp by underflow).
class PmfBuilder {
 public:
  PmfBuilder(const FamilySpec& spec, const FittedParams& par)
      : spec_(spec), par_(par) {
    validate_params(spec, par.lambda, par.theta);
    const double p0 = pmf_at_zero(spec, par);
    p_.push_back(p0);
    cum_ = p0;
    if (spec_.id == family_id::katz) {
      conv_ = p0;
    } else {
      q_.push_back(rate_coeff(spec_, par_.theta, 0));
      q_support_open_ = true;
    }
  }

  // Appends p_{k+1} where k is the current last index.
  void extend_one() {
    const int k = static_cast<int>(p_.size()) - 1;
    if (k + 1 >= kPmfMaxLen)
      throw computation_error("pmf table exceeds length cap");
    double next;
    if (spec_.id == family_id::katz) {
      next = par_.lambda * conv_ / (k + 1);
    } else {
      grow_q(k + 1);
      const int jmax = std::min(k, static_cast<int>(q_.size()) - 1);
      double s = 0.0;
      for (int j = 0; j <= jmax; ++j) s += q_[j] * p_[k - j];
      next = par_.lambda * s / (k + 1);
    }
    p_.push_back(next);
    cum_ += next;
    if (spec_.id == family_id::katz) conv_ = par_.theta * conv_ + next;
  }

  const std::vector<double>& probs() const { return p_; }
  double cum() const { return cum_; }
  double tail() const { return std::max(0.0, 1.0 - cum_); }

 private:
  void grow_q(int len) {
    if (!q_support_open_) return;
    while (static_cast<int>(q_.size()) < len) {
      const int k = static_cast<int>(q_.size());
      double next;
      if (spec_.id == family_id::pp) {
        next = q_.back() * par_.theta / k;
      } else {  // pb
        if (k >= spec_.nu) {
          q_support_open_ = false;
          return;
        }
        next = q_.back() * par_.theta / (1.0 - par_.theta) *
               static_cast<double>(spec_.nu - k) / k;
      }
      if (next <= 0.0) {
        q_support_open_ = false;
        return;
      }
      q_.push_back(next);
    }
  }

  FamilySpec spec_;
  FittedParams par_;
  std::vector<double> p_;
  std::vector<double> q_;
  bool q_support_open_ = false;
  double conv_ = 0.0;
  double cum_ = 0.0;
};

// Tabulates the pmf until the untabled mass drops below mass_tol.
inline PmfTable pmf_table(const FamilySpec& spec, const FittedParams& par,
                          double mass_tol = 1e-12) {
  if (!(mass_tol > 0.0) || mass_tol > 1e-6)
    throw std::domain_error("mass_tol must lie in (0, 1e-6]");
  PmfBuilder b(spec, par);
  while (b.tail() > mass_tol) b.extend_one();
  return {b.probs(), b.tail()};
}

// Inverse-CDF sampler over a lazily extended pmf table. Each instance owns
// its table, so copies of the same (spec, params) pair draw identical
// streams from identical RngStream states regardless of threading.
class GpSampler {
 public:
  GpSampler(const FamilySpec& spec, const FittedParams& par,
            double init_tail = 1e-12)
      : builder_(spec, par) {
    while (builder_.tail() > init_tail) builder_.extend_one();
    rebuild_cum();
  }

  int draw(RngStream& rng) {
    const double u = rng.u01();
    auto it = std::upper_bound(cum_.begin(), cum_.end(), u);
    if (it != cum_.end()) return static_cast<int>(it - cum_.begin());
    while (u >= cum_.back()) {
      builder_.extend_one();
      cum_.push_back(cum_.back() + builder_.probs().back());
    }
    return static_cast<int>(cum_.size()) - 1;
  }

  CountSample sample(std::int64_t n, RngStream& rng) {
    if (n < 1) throw std::domain_error("sample size must be >= 1");
    CountSample s;
    s.n = n;
    for (std::int64_t i = 0; i < n; ++i) {
      const int v = draw(rng);
      if (static_cast<std::size_t>(v) >= s.freq.size()) s.freq.resize(v + 1, 0);
      ++s.freq[v];
    }
    return s;
  }

 private:
  void rebuild_cum() {
    cum_.clear();
    cum_.reserve(builder_.probs().size());
    double c = 0.0;
    for (double p : builder_.probs()) cum_.push_back(c += p);
  }

  PmfBuilder builder_;
  std::vector<double> cum_;  // cum_[k] = P(X <= k)
};

// Draws a sample of n observations from the family.
inline CountSample sample(const FamilySpec& spec, const FittedParams& par,
                          std::int64_t n, RngStream& rng) {
  GpSampler s(spec, par);
  return s.sample(n, rng);
}

}  // namespace gpgof
