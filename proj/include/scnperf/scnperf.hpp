#pragma once

// Umbrella header.

#include "scnperf/ase.hpp"
#include "scnperf/commands.hpp"
#include "scnperf/config.hpp"
#include "scnperf/coverage.hpp"
#include "scnperf/csv.hpp"
#include "scnperf/errors.hpp"
#include "scnperf/fading.hpp"
#include "scnperf/intensity.hpp"
#include "scnperf/model.hpp"
#include "scnperf/parallel.hpp"
#include "scnperf/quadrature.hpp"
#include "scnperf/sim.hpp"
#include "scnperf/special.hpp"
