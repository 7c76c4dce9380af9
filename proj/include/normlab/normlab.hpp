#pragma once

// Umbrella header for the normlab library: lp->lq operator norms (including
// quasi-norm exponents), structured random matrix sampling, explicit norm
// bounds for structured random matrices, and Monte Carlo verification
// experiments.

#include "normlab/bounds.hpp"
#include "normlab/exponent.hpp"
#include "normlab/experiments.hpp"
#include "normlab/matrix.hpp"
#include "normlab/norms.hpp"
#include "normlab/opnorm.hpp"
#include "normlab/rng.hpp"
#include "normlab/sampling.hpp"
#include "normlab/scenarios.hpp"
#include "normlab/special.hpp"
#include "normlab/util.hpp"
