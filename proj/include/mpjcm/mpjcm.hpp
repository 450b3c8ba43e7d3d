#pragma once

#include "mpjcm/dynamics.hpp"
#include "mpjcm/error.hpp"
#include "mpjcm/observables.hpp"
#include "mpjcm/oracle.hpp"
#include "mpjcm/revivals.hpp"
#include "mpjcm/states.hpp"
#include "mpjcm/timeseries.hpp"
