// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace gpgof {

// Weight sequence 0 < w_k <= 1 applied to squared residuals. Two kinds:
// a constant weight of one, and the pmf of a negative binomial with
// integer size and success probability prob, w_k = C(k+size-1, k)
// prob^size (1-prob)^k, which down-weights large k geometrically.
struct WeightScheme {
  enum class kind { constant, neg_binomial };
  kind type = kind::constant;
  int size = 0;
  double prob = 0.0;
};

inline void validate_scheme(const WeightScheme& w) {
  if (w.type == WeightScheme::kind::neg_binomial) {
    if (w.size < 1) throw std::domain_error("weight size must be >= 1");
    if (!(w.prob > 0.0) || !(w.prob < 1.0))
      throw std::domain_error("weight prob must lie in (0, 1)");
  }
}

// O(1)-per-step iterator over w_0, w_1, ...
class WeightIter {
 public:
  explicit WeightIter(const WeightScheme& w) : scheme_(w) {
    validate_scheme(w);
    if (w.type == WeightScheme::kind::constant) {
      value_ = 1.0;
    } else {
      value_ = 1.0;
      for (int j = 0; j < w.size; ++j) value_ *= w.prob;
    }
  }

  double value() const { return value_; }

  void advance() {
    ++k_;
    if (scheme_.type == WeightScheme::kind::neg_binomial)
      value_ *= (1.0 - scheme_.prob) *
                static_cast<double>(k_ - 1 + scheme_.size) / k_;
  }

 private:
  WeightScheme scheme_;
  int k_ = 0;
  double value_ = 0.0;
};

inline double weight(const WeightScheme& w, int k) {
  if (k < 0) throw std::domain_error("weight index must be >= 0");
  WeightIter it(w);
  for (int j = 0; j < k; ++j) it.advance();
  return it.value();
}

// Preset schemes S1..S7: S1 is constant; S2..S7 are negative binomial pmf
// weights with (size, prob) covering light to heavy down-weighting.
inline WeightScheme preset_weights(int index) {
  switch (index) {
    case 1:
      return {WeightScheme::kind::constant, 0, 0.0};
    case 2:
      return {WeightScheme::kind::neg_binomial, 2, 0.25};
    case 3:
      return {WeightScheme::kind::neg_binomial, 2, 0.5};
    case 4:
      return {WeightScheme::kind::neg_binomial, 2, 0.75};
    case 5:
      return {WeightScheme::kind::neg_binomial, 4, 0.25};
    case 6:
      return {WeightScheme::kind::neg_binomial, 4, 0.5};
    case 7:
      return {WeightScheme::kind::neg_binomial, 4, 0.75};
    default:
      throw std::domain_error("preset weight index must lie in 1..7");
  }
}

inline std::string preset_label(int index) {
  if (index < 1 || index > 7)
    throw std::domain_error("preset weight index must lie in 1..7");
  return "S" + std::to_string(index);
}

}  // namespace gpgof
