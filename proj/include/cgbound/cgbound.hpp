#pragma once

// Umbrella header.

#include "cgbound/core/cost.hpp"
#include "cgbound/core/covariance.hpp"
#include "cgbound/core/errors.hpp"
#include "cgbound/core/json_io.hpp"
#include "cgbound/core/linalg.hpp"
#include "cgbound/core/parallel.hpp"
#include "cgbound/core/projections.hpp"
#include "cgbound/core/random.hpp"
#include "cgbound/core/tikhonov.hpp"
#include "cgbound/core/types.hpp"

#include "cgbound/network/config.hpp"
#include "cgbound/network/forward.hpp"
#include "cgbound/network/json.hpp"
#include "cgbound/network/parameters.hpp"
#include "cgbound/network/scale_updates.hpp"

#include "cgbound/lipschitz/constants.hpp"
#include "cgbound/lipschitz/log_real.hpp"
#include "cgbound/lipschitz/verify.hpp"

#include "cgbound/geb/bound.hpp"
#include "cgbound/geb/covering.hpp"
#include "cgbound/geb/scaling.hpp"

#include "cgbound/harness/config.hpp"
#include "cgbound/harness/dataset.hpp"
#include "cgbound/harness/gap.hpp"
#include "cgbound/harness/report.hpp"
