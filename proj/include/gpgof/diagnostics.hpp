// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "gpgof/alternatives.hpp"
#include "gpgof/errors.hpp"
#include "gpgof/family.hpp"
#include "gpgof/parallel.hpp"
#include "gpgof/residual.hpp"
#include "gpgof/rng.hpp"

namespace gpgof {

// Average absolute residual profile of an alternative against a null
// family, used to pick a weight scheme before running the test. avg_abs_d
// covers k = 0..8; the maximum is taken over the wider range k = 0..M1+10
// per replicate, where late residuals have already decayed.
struct WeightDiagnostics {
  std::vector<double> avg_abs_d;  // k = 0..8
  double max_value = 0.0;
  int argmax_k = 0;
  std::string recommendation;  // "S4" or "S5"
  int failures = 0;            // replicates whose moment fit had no solution
};

// Draws reps samples of size n from the alternative, fits the null family
// by moments on each, and averages |d(k)| across replicates. Replicates
// beyond their own evaluated range contribute zero at large k, where the
// residuals they skipped are geometrically negligible. The recommendation
// is S5 when the profile peaks late (argmax > 2) and the k = 0 residual is
// clearly dominated (below half the peak); otherwise S4.
inline WeightDiagnostics diagnostics(const FamilySpec& null_spec,
                                     const AlternativeSpec& alt,
                                     std::int64_t n, std::int64_t reps,
                                     std::uint64_t seed, int threads = 1) {
  if (n < 2) throw std::domain_error("diagnostics needs n >= 2");
  if (reps < 1) throw std::domain_error("diagnostics needs reps >= 1");
  validate_spec(null_spec);

  std::vector<std::vector<double>> profiles(static_cast<std::size_t>(reps));
  std::vector<char> failed(static_cast<std::size_t>(reps), 0);
  const std::uint64_t base = derive_seed(seed, kSaltDiagnostics);

  parallel_chunks(reps, threads, [&](std::int64_t begin, std::int64_t end) {
    for (std::int64_t r = begin; r < end; ++r) {
      RngStream rng(derive_seed(base, static_cast<std::uint64_t>(r)));
      const CountSample s = sample_alternative(alt, n, rng);
      FittedParams fit;
      try {
        fit = estimate_moments(null_spec, s);
      } catch (const estimation_error&) {
        failed[r] = 1;
        continue;
      }
      const int kmax = std::max(8, s.max_value() + 10);
      profiles[r] = residual_range(s, null_spec, fit, kmax);
    }
  });

  WeightDiagnostics out;
  std::size_t widest = 9;
  for (const auto& p : profiles) widest = std::max(widest, p.size());
  std::vector<double> sums(widest, 0.0);
  std::int64_t succeeded = 0;
  for (std::int64_t r = 0; r < reps; ++r) {
    if (failed[r]) {
      ++out.failures;
      continue;
    }
    ++succeeded;
    for (std::size_t k = 0; k < profiles[r].size(); ++k)
      sums[k] += std::abs(profiles[r][k]);
  }
  if (succeeded == 0)
    throw computation_error("diagnostics: every replicate failed to fit");

  std::vector<double> avg(widest);
  for (std::size_t k = 0; k < widest; ++k)
    avg[k] = sums[k] / static_cast<double>(succeeded);
  out.avg_abs_d.assign(avg.begin(), avg.begin() + 9);
  out.argmax_k = 0;
  out.max_value = avg[0];
  for (std::size_t k = 1; k < avg.size(); ++k)
    if (avg[k] > out.max_value) {
      out.max_value = avg[k];
      out.argmax_k = static_cast<int>(k);
    }
  out.recommendation =
      (out.avg_abs_d[0] < 0.5 * out.max_value && out.argmax_k > 2) ? "S5"
                                                                   : "S4";
  return out;
}

}  // namespace gpgof
