#pragma once

// Umbrella header: exact circulant simulation of fractional Brownian motion,
// discrete-variations Hurst estimation, and the kernel verification suite.

#include "circulant.hpp"
#include "cov.hpp"
#include "fft.hpp"
#include "filters.hpp"
#include "hurst.hpp"
#include "io.hpp"
#include "kernels.hpp"
#include "parallel.hpp"
#include "quadrature.hpp"
#include "rng.hpp"
#include "selfcheck.hpp"
#include "stats.hpp"
#include "version.hpp"
