// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "gpgof/count_sample.hpp"
#include "gpgof/errors.hpp"

namespace gpgof {

// Count families whose pmf obeys the weighted recurrence
//
//     (k+1) p_{k+1} = lambda * sum_{u=0}^{k} p_u q_{k-u}(theta),
//
// where q_k are the Taylor coefficients of the rate series R(t) in
// g'(t) = lambda R(t) g(t) for the pgf g. The q_k determine the family:
//
//   katz  q_k = theta^k                      (geometric rates; equals a
//                                             negative binomial for
//                                             0 < theta < 1)
//   pp    q_k = exp(-theta) theta^{k+1}/k!   (Poisson-stopped Poisson,
//                                             Neyman type A)
//   pb    q_k = C(nu-1,k) nu p^{k+1}
//               (1-p)^{nu-1-k},  k < nu      (Poisson-stopped binomial
//                                             with nu trials; theta = p)
enum class family_id { katz, pp, pb };

struct FamilySpec {
  family_id id = family_id::katz;
  int nu = 0;  // binomial trial count, pb only
};

struct FittedParams {
  double lambda = 0.0;
  double theta = 0.0;    // success probability p for pb
  bool clamped = false;  // estimates hit the domain clamp
};

struct Moments {
  double mean = 0.0;
  double variance = 0.0;
};

// Domain clamps for moment estimates.
inline constexpr double kParamFloor = 1e-6;
inline constexpr double kProbCeil = 1.0 - 1e-6;

// exp(-theta) underflows past ~745 and the pmf would lose positivity.
inline constexpr double kPpThetaCap = 700.0;

inline void validate_spec(const FamilySpec& spec) {
  if (spec.id == family_id::pb && spec.nu < 1)
    throw std::domain_error("pb family needs nu >= 1");
}

inline void validate_params(const FamilySpec& spec, double lambda,
                            double theta) {
  validate_spec(spec);
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw std::domain_error("lambda must be positive and finite");
  switch (spec.id) {
    case family_id::katz:
      if (!(theta > 0.0) || !(theta < 1.0))
        throw std::domain_error("katz theta must lie in (0, 1)");
      break;
    case family_id::pp:
      if (!(theta > 0.0) || !(theta <= kPpThetaCap))
        throw std::domain_error("pp theta must lie in (0, 700]");
      break;
    case family_id::pb:
      if (!(theta > 0.0) || !(theta < 1.0))
        throw std::domain_error("pb success probability must lie in (0, 1)");
      break;
  }
}

// Rate coefficient q_k(theta). Scalar form; evaluated by the same
// recurrences as the vector form so both paths agree bit for bit.
inline double rate_coeff(const FamilySpec& spec, double theta, int k) {
  if (k < 0) throw std::domain_error("rate coefficient index must be >= 0");
  switch (spec.id) {
    case family_id::katz: {
      if (!(theta > 0.0) || !(theta < 1.0))
        throw std::domain_error("katz theta must lie in (0, 1)");
      double q = 1.0;
      for (int j = 0; j < k; ++j) q *= theta;
      return q;
    }
    case family_id::pp: {
      if (!(theta > 0.0) || !(theta <= kPpThetaCap))
        throw std::domain_error("pp theta must lie in (0, 700]");
      double q = theta * std::exp(-theta);
      // Same association as the vector form: multiply, then divide.
      for (int j = 1; j <= k; ++j) q = q * theta / j;
      return q;
    }
    case family_id::pb: {
      validate_spec(spec);
      if (!(theta > 0.0) || !(theta < 1.0))
        throw std::domain_error("pb success probability must lie in (0, 1)");
      if (k >= spec.nu) return 0.0;
      double q = spec.nu * theta;
      for (int j = 0; j < spec.nu - 1; ++j) q *= 1.0 - theta;
      const double ratio = theta / (1.0 - theta);
      for (int j = 0; j < k; ++j)
        q = q * ratio * static_cast<double>(spec.nu - 1 - j) / (j + 1);
      return q;
    }
  }
  throw std::domain_error("unknown family");
}

// First len rate coefficients. Entries beyond the pb support are zero; pp
// entries that underflow to zero stay zero, which downstream convolutions
// rely on for their effective support.
inline std::vector<double> rate_coeff_vector(const FamilySpec& spec,
                                             double theta, int len) {
  if (len < 0) throw std::domain_error("rate coefficient length must be >= 0");
  std::vector<double> q(static_cast<std::size_t>(len), 0.0);
  if (len == 0) return q;
  switch (spec.id) {
    case family_id::katz: {
      if (!(theta > 0.0) || !(theta < 1.0))
        throw std::domain_error("katz theta must lie in (0, 1)");
      q[0] = 1.0;
      for (int k = 1; k < len; ++k) q[k] = q[k - 1] * theta;
      break;
    }
    case family_id::pp: {
      if (!(theta > 0.0) || !(theta <= kPpThetaCap))
        throw std::domain_error("pp theta must lie in (0, 700]");
      q[0] = theta * std::exp(-theta);
      for (int k = 1; k < len; ++k) q[k] = q[k - 1] * theta / k;
      break;
    }
    case family_id::pb: {
      validate_spec(spec);
      if (!(theta > 0.0) || !(theta < 1.0))
        throw std::domain_error("pb success probability must lie in (0, 1)");
      double v = spec.nu * theta;
      for (int j = 0; j < spec.nu - 1; ++j) v *= 1.0 - theta;
      q[0] = v;
      const double ratio = theta / (1.0 - theta);
      const int kmax = std::min(len, spec.nu);
      for (int k = 1; k < kmax; ++k)
        q[k] = q[k - 1] * ratio * static_cast<double>(spec.nu - k) / k;
      break;
    }
  }
  return q;
}

// Index past which every rate coefficient is exactly zero, or INT_MAX when
// the support is unbounded.
inline int rate_support(const FamilySpec& spec) {
  return spec.id == family_id::pb ? spec.nu : std::numeric_limits<int>::max();
}

// Closed-form mean and variance.
inline Moments moments(const FamilySpec& spec, const FittedParams& par) {
  validate_params(spec, par.lambda, par.theta);
  const double lam = par.lambda, th = par.theta;
  switch (spec.id) {
    case family_id::katz:
      return {lam / (1.0 - th), lam / ((1.0 - th) * (1.0 - th))};
    case family_id::pp:
      return {lam * th, lam * th * (1.0 + th)};
    case family_id::pb:
      return {lam * spec.nu * th,
              lam * spec.nu * th * (1.0 - th + spec.nu * th)};
  }
  throw std::domain_error("unknown family");
}

// P(X = 0) in closed form. log1p/expm1 keep precision for extreme
// parameters where the naive powers would round badly.
inline double pmf_at_zero(const FamilySpec& spec, const FittedParams& par) {
  validate_params(spec, par.lambda, par.theta);
  const double lam = par.lambda, th = par.theta;
  switch (spec.id) {
    case family_id::katz:
      return std::exp(lam / th * std::log1p(-th));
    case family_id::pp:
      return std::exp(lam * std::expm1(-th));
    case family_id::pb:
      return std::exp(lam * std::expm1(spec.nu * std::log1p(-th)));
  }
  throw std::domain_error("unknown family");
}

// P(X = 0) by the series exp(-lambda sum_k q_k/(k+1)), truncated when the
// increment drops below 1e-15. Fallback form; the closed forms above are
// used everywhere, and tests cross-check the two.
inline double pmf_at_zero_series(const FamilySpec& spec,
                                 const FittedParams& par) {
  validate_params(spec, par.lambda, par.theta);
  const int support = rate_support(spec);
  double sum = 0.0;
  double q = rate_coeff(spec, par.theta, 0);
  for (int k = 0;; ++k) {
    const double inc = q / (k + 1);
    sum += inc;
    if (k + 1 >= support) break;
    if (inc < 1e-15) break;
    if (k > 1000000)
      throw computation_error("pmf_at_zero_series: no convergence");
    switch (spec.id) {
      case family_id::katz:
        q *= par.theta;
        break;
      case family_id::pp:
        q *= par.theta / (k + 1);
        break;
      case family_id::pb:
        q *= par.theta / (1.0 - par.theta) *
             static_cast<double>(spec.nu - 1 - k) / (k + 1);
        break;
    }
  }
  return std::exp(-par.lambda * sum);
}

// Moment inversion on (mean, variance) with domain clamping. The clamped
// flag records that the raw inversion left the parameter domain.
inline FittedParams estimate_from_moments(const FamilySpec& spec, double mean,
                                          double variance) {
  validate_spec(spec);
  if (!(mean > 0.0)) throw estimation_error("sample mean is zero");
  if (!(variance > 0.0)) throw estimation_error("sample variance is zero");
  FittedParams out;
  auto clamp = [&out](double value, double lo, double hi) {
    if (value < lo) {
      out.clamped = true;
      return lo;
    }
    if (value > hi) {
      out.clamped = true;
      return hi;
    }
    return value;
  };
  const double inf = std::numeric_limits<double>::infinity();
  switch (spec.id) {
    case family_id::katz:
      out.theta = clamp(1.0 - mean / variance, kParamFloor, kProbCeil);
      out.lambda = clamp(mean * mean / variance, kParamFloor, inf);
      break;
    case family_id::pp:
      out.theta = clamp(variance / mean - 1.0, kParamFloor, kPpThetaCap);
      out.lambda = clamp(mean / out.theta, kParamFloor, inf);
      break;
    case family_id::pb:
      if (spec.nu < 2)
        throw std::domain_error("pb moment estimation needs nu >= 2");
      out.theta =
          clamp((variance / mean - 1.0) / (spec.nu - 1), kParamFloor, kProbCeil);
      out.lambda = clamp(mean / (spec.nu * out.theta), kParamFloor, inf);
      break;
  }
  return out;
}

inline FittedParams estimate_moments(const FamilySpec& spec,
                                     const CountSample& sample) {
  if (sample.n < 2)
    throw std::domain_error("moment estimation needs n >= 2");
  return estimate_from_moments(spec, sample.mean(), sample.variance());
}

// Fallback for degenerate resamples (zero mean or variance): matches the
// sample mean with minimal dispersion at the clamp boundary. Always flagged.
inline FittedParams fallback_params(const FamilySpec& spec,
                                    const CountSample& sample) {
  validate_spec(spec);
  const double mean = std::max(sample.mean(), kParamFloor);
  FittedParams out;
  out.clamped = true;
  out.theta = kParamFloor;
  switch (spec.id) {
    case family_id::katz:
      out.lambda = mean * (1.0 - out.theta);
      break;
    case family_id::pp:
      out.lambda = mean / out.theta;
      break;
    case family_id::pb:
      out.lambda = mean / (spec.nu * out.theta);
      break;
  }
  return out;
}

inline std::string family_label(const FamilySpec& spec) {
  switch (spec.id) {
    case family_id::katz:
      return "katz";
    case family_id::pp:
      return "pp";
    case family_id::pb:
      return "pb:" + std::to_string(spec.nu);
  }
  throw std::domain_error("unknown family");
}

inline FamilySpec parse_family(const std::string& text) {
  if (text == "katz") return {family_id::katz, 0};
  if (text == "pp") return {family_id::pp, 0};
  if (text.rfind("pb:", 0) == 0) {
    int nu = 0;
    try {
      std::size_t pos = 0;
      nu = std::stoi(text.substr(3), &pos);
      if (pos != text.size() - 3) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw std::domain_error("bad pb trial count in family '" + text + "'");
    }
    if (nu < 1) throw std::domain_error("pb family needs nu >= 1");
    return {family_id::pb, nu};
  }
  throw std::domain_error("unknown family '" + text +
                          "' (expected katz, pp, or pb:<nu>)");
}

}  // namespace gpgof
