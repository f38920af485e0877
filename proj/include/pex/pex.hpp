#pragma once

// Umbrella header for the persistent-excitation analysis toolkit.

#include "pex/adaptive.hpp"
#include "pex/csv.hpp"
#include "pex/decompose.hpp"
#include "pex/errors.hpp"
#include "pex/estimator.hpp"
#include "pex/gram.hpp"
#include "pex/json_io.hpp"
#include "pex/pe_tests.hpp"
#include "pex/projection.hpp"
#include "pex/recurrence.hpp"
#include "pex/signal.hpp"
#include "pex/subspace.hpp"
#include "pex/time_grid.hpp"
