#pragma once

#include "coevo/basins.hpp"
#include "coevo/config.hpp"
#include "coevo/cycles.hpp"
#include "coevo/dynamics.hpp"
#include "coevo/eigen3x3.hpp"
#include "coevo/errors.hpp"
#include "coevo/game_model.hpp"
#include "coevo/metrics.hpp"
#include "coevo/parallel.hpp"
#include "coevo/report_io.hpp"
#include "coevo/stability.hpp"
