#pragma once

#include "deconv/csv.hpp"
#include "deconv/densities.hpp"
#include "deconv/estimator.hpp"
#include "deconv/harness.hpp"
#include "deconv/noise.hpp"
#include "deconv/quadrature.hpp"
#include "deconv/rng.hpp"
#include "deconv/selection.hpp"
