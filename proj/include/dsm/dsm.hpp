/**
 * @file dsm.hpp
 * @brief Umbrella header for the direct sampling library.
 */
#pragma once

#include "specfun.hpp"
#include "geometry.hpp"
#include "forward.hpp"
#include "parallel.hpp"
#include "indicators.hpp"
#include "locator.hpp"
#include "io.hpp"
#include "presets.hpp"
#include "experiment.hpp"
#include "verify.hpp"
