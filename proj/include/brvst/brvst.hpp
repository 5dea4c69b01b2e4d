#pragma once

#include "brvst/arv.hpp"
#include "brvst/baseline.hpp"
#include "brvst/config.hpp"
#include "brvst/error.hpp"
#include "brvst/event.hpp"
#include "brvst/geometry.hpp"
#include "brvst/grid_manager.hpp"
#include "brvst/metrics.hpp"
#include "brvst/mobility.hpp"
#include "brvst/overlay.hpp"
#include "brvst/pub_cache.hpp"
#include "brvst/scenario.hpp"
#include "brvst/simulator.hpp"
#include "brvst/summary_forest.hpp"
#include "brvst/sweep.hpp"
#include "brvst/wire.hpp"
#include "brvst/workload.hpp"
#include "brvst/zone_manager.hpp"
