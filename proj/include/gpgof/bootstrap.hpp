// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "gpgof/count_sample.hpp"
#include "gpgof/edf.hpp"
#include "gpgof/errors.hpp"
#include "gpgof/family.hpp"
#include "gpgof/parallel.hpp"
#include "gpgof/pmf.hpp"
#include "gpgof/residual.hpp"
#include "gpgof/rng.hpp"
#include "gpgof/weights.hpp"

namespace gpgof {

// One test statistic to calibrate: a weighted residual statistic with a
// given scheme, or one of the two EDF competitors.
struct StatDescriptor {
  enum class kind { weighted, anderson_darling, cramer_von_mises };
  kind type = kind::weighted;
  WeightScheme scheme{};
  std::string label;
};

inline StatDescriptor stat_from_name(std::string name) {
  std::transform(name.begin(), name.end(), name.begin(),
                 [](unsigned char c) { return std::toupper(c); });
  if (name.size() == 2 && name[0] == 'S' && name[1] >= '1' && name[1] <= '7') {
    const int i = name[1] - '0';
    return {StatDescriptor::kind::weighted, preset_weights(i),
            preset_label(i)};
  }
  if (name == "AD")
    return {StatDescriptor::kind::anderson_darling, {}, "AD"};
  if (name == "CVM")
    return {StatDescriptor::kind::cramer_von_mises, {}, "CVM"};
  throw std::domain_error("unknown statistic '" + name +
                          "' (expected S1..S7, AD, or CVM)");
}

// S1..S7, AD, CVM in reporting order.
inline std::vector<StatDescriptor> all_statistics() {
  std::vector<StatDescriptor> out;
  for (int i = 1; i <= 7; ++i)
    out.push_back({StatDescriptor::kind::weighted, preset_weights(i),
                   preset_label(i)});
  out.push_back({StatDescriptor::kind::anderson_darling, {}, "AD"});
  out.push_back({StatDescriptor::kind::cramer_von_mises, {}, "CVM"});
  return out;
}

struct GofTestResult {
  std::string statistic;
  double observed = 0.0;
  double p_value = 1.0;
  double critical_value = 0.0;
  double alpha = 0.05;
  std::int64_t b = 0;
  // Resampling replicates whose re-estimation needed clamping or the
  // degenerate fallback.
  int degenerate_replicates = 0;
  std::vector<double> draws;
};

// Resampling p-value with the add-one convention: the observed value joins
// the b draws as an exchangeable member, so under the null the p-value is
// uniform on {1/(b+1), ..., 1}.
inline double pvalue_from_draws(double observed,
                                const std::vector<double>& draws) {
  std::int64_t count = 0;
  for (double d : draws)
    if (d >= observed) ++count;
  return static_cast<double>(1 + count) /
         static_cast<double>(draws.size() + 1);
}

// inf{x : #{draws >= x}/b <= alpha}: with m = floor(alpha b), the
// (b-m)-th smallest draw.
inline double critical_from_draws(std::vector<double> draws, double alpha) {
  if (draws.empty()) throw std::domain_error("no draws");
  if (!(alpha > 0.0) || !(alpha < 1.0))
    throw std::domain_error("alpha must lie in (0, 1)");
  std::sort(draws.begin(), draws.end());
  const std::int64_t b = static_cast<std::int64_t>(draws.size());
  const std::int64_t m =
      static_cast<std::int64_t>(std::floor(alpha * static_cast<double>(b)));
  const std::int64_t idx = std::max<std::int64_t>(0, b - m - 1);
  return draws[idx];
}

// Rejection is driven by the p-value rule; critical_value is diagnostic.
inline bool reject(const GofTestResult& r, double alpha) {
  if (!(alpha > 0.0) || !(alpha < 1.0))
    throw std::domain_error("alpha must lie in (0, 1)");
  return r.p_value <= alpha;
}

namespace detail {

// Evaluates every requested statistic on one (sample, params) pair.
// Weighted statistics share a single residual pass: the constant scheme
// has the loosest truncation rule (w_k <= 1), so its range covers every
// preset's own truncation point.
inline std::vector<double> evaluate_statistics(
    const CountSample& sample, const FamilySpec& spec, const FittedParams& par,
    const std::vector<StatDescriptor>& stats, double trunc_tol) {
  std::vector<double> out(stats.size(), 0.0);
  bool need_residuals = false, need_edf = false;
  for (const auto& s : stats) {
    if (s.type == StatDescriptor::kind::weighted) need_residuals = true;
    else need_edf = true;
  }
  ResidualVector rv;
  if (need_residuals)
    rv = residuals(sample, spec, par, WeightScheme{}, trunc_tol);
  EdfInputs edf;
  if (need_edf) edf = build_edf_inputs(sample, spec, par);
  for (std::size_t i = 0; i < stats.size(); ++i) {
    switch (stats[i].type) {
      case StatDescriptor::kind::weighted:
        out[i] = weighted_statistic(rv, stats[i].scheme);
        break;
      case StatDescriptor::kind::anderson_darling:
        out[i] = ad_statistic(edf).value;
        break;
      case StatDescriptor::kind::cramer_von_mises:
        out[i] = cvm_statistic(edf);
        break;
    }
  }
  return out;
}

}  // namespace detail

// Parametric resampling calibration. Fits the family to the sample by
// moments, draws b resamples of the same size from the fit, re-estimates
// on each, and evaluates every requested statistic on every resample.
// Replicate i's stream is derived from (seed, i) alone, so draws are
// identical for any thread count and any descriptor list.
inline std::vector<GofTestResult> bootstrap_run(
    const CountSample& sample, const FamilySpec& spec,
    const std::vector<StatDescriptor>& stats, std::int64_t b, double alpha,
    std::uint64_t seed, int threads = 1, double trunc_tol = 1e-14) {
  if (stats.empty()) throw std::domain_error("no statistics requested");
  if (b < 1) throw std::domain_error("bootstrap cycle count must be >= 1");
  if (!(alpha > 0.0) || !(alpha < 1.0))
    throw std::domain_error("alpha must lie in (0, 1)");
  if (sample.n < 2) throw std::domain_error("test needs n >= 2");

  const FittedParams fit = estimate_moments(spec, sample);
  const std::vector<double> observed =
      detail::evaluate_statistics(sample, spec, fit, stats, trunc_tol);

  std::vector<std::vector<double>> draws(
      stats.size(), std::vector<double>(static_cast<std::size_t>(b), 0.0));
  std::vector<char> degenerate(static_cast<std::size_t>(b), 0);
  const std::uint64_t boot_seed = derive_seed(seed, kSaltBootstrap);

  parallel_chunks(b, threads, [&](std::int64_t begin, std::int64_t end) {
    GpSampler sampler(spec, fit);
    for (std::int64_t i = begin; i < end; ++i) {
      RngStream rng(derive_seed(boot_seed, static_cast<std::uint64_t>(i)));
      const CountSample resample = sampler.sample(sample.n, rng);
      FittedParams refit;
      try {
        refit = estimate_moments(spec, resample);
      } catch (const estimation_error&) {
        refit = fallback_params(spec, resample);
      }
      if (refit.clamped) degenerate[i] = 1;
      const std::vector<double> values = detail::evaluate_statistics(
          resample, spec, refit, stats, trunc_tol);
      for (std::size_t s = 0; s < stats.size(); ++s) draws[s][i] = values[s];
    }
  });

  int degenerate_count = 0;
  for (char flag : degenerate) degenerate_count += flag;

  std::vector<GofTestResult> results;
  results.reserve(stats.size());
  for (std::size_t s = 0; s < stats.size(); ++s) {
    GofTestResult r;
    r.statistic = stats[s].label;
    r.observed = observed[s];
    r.p_value = pvalue_from_draws(observed[s], draws[s]);
    r.critical_value = critical_from_draws(draws[s], alpha);
    r.alpha = alpha;
    r.b = b;
    r.degenerate_replicates = degenerate_count;
    r.draws = std::move(draws[s]);
    results.push_back(std::move(r));
  }
  return results;
}

inline GofTestResult bootstrap_test(const CountSample& sample,
                                    const FamilySpec& spec,
                                    const StatDescriptor& stat, std::int64_t b,
                                    double alpha, std::uint64_t seed,
                                    int threads = 1,
                                    double trunc_tol = 1e-14) {
  return bootstrap_run(sample, spec, {stat}, b, alpha, seed, threads,
                       trunc_tol)[0];
}

}  // namespace gpgof
