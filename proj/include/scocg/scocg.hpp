#pragma once

#include "scocg/cocg.hpp"
#include "scocg/errors.hpp"
#include "scocg/greens.hpp"
#include "scocg/linalg.hpp"
#include "scocg/matrix_market.hpp"
#include "scocg/invariants.hpp"
#include "scocg/oracle.hpp"
#include "scocg/report.hpp"
#include "scocg/run_config.hpp"
#include "scocg/seed_switch.hpp"
#include "scocg/shifted_cocg.hpp"
#include "scocg/solve_family.hpp"
