// SPDX-License-Identifier: Apache-2.0
//
// cbsim: two-cell coordinated zero-forcing downlink with limited-backhaul
// CSI exchange and per-user quantization bit allocation
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

// Umbrella header.

#include "cbsim/errors.hpp"      // error taxonomy
#include "cbsim/geometry.hpp"    // scenario config, layout, path loss
#include "cbsim/config_file.hpp" // key-value scenario files
#include "cbsim/rng.hpp"         // deterministic per-trial streams
#include "cbsim/channel.hpp"     // channel draws and CSI quantization
#include "cbsim/beamforming.hpp" // coordinated zero forcing, SINR, rates
#include "cbsim/analysis.hpp"    // closed-form model, stats, regions
#include "cbsim/allocation.hpp"  // backhaul bit-allocation schemes
#include "cbsim/montecarlo.hpp"  // trial driver and aggregation
#include "cbsim/experiments.hpp" // experiment sweeps and CSV output
