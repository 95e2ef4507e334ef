// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>

namespace gpgof {

// Moment estimation has no usable solution (zero sample mean or zero
// sample variance). Callers running resampling loops catch this and
// substitute clamped fallback parameters.
class estimation_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A numeric routine exceeded its hard size or iteration cap.
class computation_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gpgof
