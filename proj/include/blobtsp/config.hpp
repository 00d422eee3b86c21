#pragma once

#include <map>
#include <string>

#include "blobtsp/swarm.hpp"

namespace blobtsp::config {

// Everything a single simulation run needs besides the dataset and seed.
struct RunParams {
    int lattice_width = 200;
    int lattice_height = 200;
    swarm::SwarmConfig swarm;
    int detect_radius = 3; // Chebyshev, for tour reading
    int max_steps = 50000;
};

// Flat `key = value` file; '#' starts a comment. Unknown keys are errors
// so typos never silently fall back to defaults.
std::map<std::string, std::string> parse_file(const std::string& path);

// Applies recognised keys (lattice_width, lattice_height, sensor_angle,
// rotation_angle, sensor_offset, deposit_amount, step_length,
// division_period, deletion_period, division_window_min,
// division_window_max, survival_max, halting_half_width,
// halting_threshold, init_density, rng_seed, detect_radius, max_steps).
void apply(const std::map<std::string, std::string>& kv, RunParams& params);

RunParams load_run_params(const std::string& path);

} // namespace blobtsp::config
