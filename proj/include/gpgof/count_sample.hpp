// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace gpgof {

// Frequency representation of a sample of non-negative integer counts.
// freq[v] is the multiplicity of value v; n is the total number of
// observations and always equals the sum of freq. Relative frequencies are
// exact rationals freq[v]/n evaluated on demand, so they sum to one by
// construction. Trailing zero entries in freq are permitted and do not
// affect any derived quantity.
struct CountSample {
  std::vector<std::int64_t> freq;
  std::int64_t n = 0;

  // Largest observed value.
  int max_value() const {
    for (std::size_t i = freq.size(); i-- > 0;)
      if (freq[i] > 0) return static_cast<int>(i);
    throw std::domain_error("CountSample: no observations");
  }

  double rel_freq(int k) const {
    if (k < 0 || static_cast<std::size_t>(k) >= freq.size()) return 0.0;
    return static_cast<double>(freq[k]) / static_cast<double>(n);
  }

  double mean() const {
    if (n < 1) throw std::domain_error("CountSample: empty sample");
    __int128 sx = 0;
    for (std::size_t v = 0; v < freq.size(); ++v)
      sx += static_cast<__int128>(v) * freq[v];
    return static_cast<double>(sx) / static_cast<double>(n);
  }

  // Unbiased sample variance (n-1 divisor), computed from exact integer
  // sums so that exactly-constant samples give exactly zero.
  double variance() const {
    if (n < 2) throw std::domain_error("CountSample: variance needs n >= 2");
    __int128 sx = 0, sxx = 0;
    for (std::size_t v = 0; v < freq.size(); ++v) {
      sx += static_cast<__int128>(v) * freq[v];
      sxx += static_cast<__int128>(v) * static_cast<__int128>(v) * freq[v];
    }
    const __int128 num = static_cast<__int128>(n) * sxx - sx * sx;
    return static_cast<double>(num) /
           (static_cast<double>(n) * static_cast<double>(n - 1));
  }

  static CountSample from_values(const std::vector<int>& values) {
    if (values.empty()) throw std::domain_error("empty sample");
    CountSample s;
    for (int v : values) {
      if (v < 0) throw std::domain_error("negative count value");
      if (static_cast<std::size_t>(v) >= s.freq.size()) s.freq.resize(v + 1, 0);
      ++s.freq[v];
    }
    s.n = static_cast<std::int64_t>(values.size());
    return s;
  }

  static CountSample from_pairs(
      const std::vector<std::pair<int, std::int64_t>>& pairs) {
    if (pairs.empty()) throw std::domain_error("empty sample");
    CountSample s;
    for (auto [v, c] : pairs) {
      if (v < 0) throw std::domain_error("negative count value");
      if (c < 1) throw std::domain_error("frequency must be >= 1");
      if (static_cast<std::size_t>(v) >= s.freq.size()) s.freq.resize(v + 1, 0);
      s.freq[v] += c;
      s.n += c;
    }
    return s;
  }
};

}  // namespace gpgof
