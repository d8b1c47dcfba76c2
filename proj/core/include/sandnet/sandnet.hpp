#pragma once

#include "sandnet/cascade.hpp"
#include "sandnet/engine.hpp"
#include "sandnet/heights.hpp"
#include "sandnet/metrics.hpp"
#include "sandnet/network.hpp"
#include "sandnet/reference_cases.hpp"
#include "sandnet/render.hpp"
#include "sandnet/report.hpp"
#include "sandnet/scenario_io.hpp"
#include "sandnet/standard.hpp"
