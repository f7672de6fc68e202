#pragma once

#include "fleetdyn/analytics.hpp"
#include "fleetdyn/calibration.hpp"
#include "fleetdyn/dynamics.hpp"
#include "fleetdyn/error.hpp"
#include "fleetdyn/infra.hpp"
#include "fleetdyn/io.hpp"
#include "fleetdyn/scenario.hpp"
