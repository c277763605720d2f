#pragma once

#include "cavity/analytic.hpp"
#include "cavity/core.hpp"
#include "cavity/numeric.hpp"
#include "cavity/sweep.hpp"
#include "cavity/time_grid.hpp"
