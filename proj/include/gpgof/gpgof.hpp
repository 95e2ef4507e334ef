// SPDX-License-Identifier: Apache-2.0
#pragma once

// Umbrella header: goodness-of-fit testing for count families defined by
// the pmf recurrence (k+1) p_{k+1} = lambda sum_u p_u q_{k-u}(theta),
// with weighted residual statistics, EDF competitors, parametric
// resampling calibration, alternative samplers, and a Monte Carlo harness.

#include "gpgof/alternatives.hpp"
#include "gpgof/bootstrap.hpp"
#include "gpgof/count_sample.hpp"
#include "gpgof/diagnostics.hpp"
#include "gpgof/edf.hpp"
#include "gpgof/errors.hpp"
#include "gpgof/family.hpp"
#include "gpgof/parallel.hpp"
#include "gpgof/pmf.hpp"
#include "gpgof/residual.hpp"
#include "gpgof/rng.hpp"
#include "gpgof/simulate.hpp"
#include "gpgof/weights.hpp"
