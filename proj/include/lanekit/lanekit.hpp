#pragma once

// Umbrella header for the lanekit library.

#include "lanekit/assignment.hpp"
#include "lanekit/coordmaps.hpp"
#include "lanekit/eval.hpp"
#include "lanekit/fov.hpp"
#include "lanekit/lane.hpp"
#include "lanekit/lane_io.hpp"
#include "lanekit/losses.hpp"
#include "lanekit/report_json.hpp"
#include "lanekit/sampling.hpp"
#include "lanekit/svg.hpp"
#include "lanekit/synth.hpp"
