#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "blobtsp/geometry.hpp"
#include "blobtsp/lattice.hpp"
#include "blobtsp/rng.hpp"

namespace blobtsp::swarm {

struct Particle {
    int x = 0;
    int y = 0;
    double heading = 0.0; // degrees, [0, 360)
    bool moved_since_division_test = false;
};

struct SwarmConfig {
    double sensor_angle = 60.0;   // SA, degrees
    double rotation_angle = 60.0; // RA, degrees
    double sensor_offset = 7.0;   // SO, cells
    double deposit_amount = 5.0;
    double step_length = 1.0;
    int division_period = 5;
    int deletion_period = 10;
    int division_window_min = 1;
    int division_window_max = 10;
    int survival_max = 80;
    int halting_half_width = 2; // 5x5 window
    int halting_threshold = 15;
    double init_density = 0.6;
    std::uint64_t rng_seed = 1;
};

// A red->green transition that persisted to the end of the run.
struct UncoverEvent {
    int step = 0;
    int city = 0;
};

struct SimState {
    int step = 0;
    bool halted = false;
    std::vector<Particle> particles;
    lattice::ChemoField field;
    lattice::OccupancyGrid occ;
    std::vector<lattice::CityStimulus> cities;
    std::vector<UncoverEvent> trace;

    SimState(int width, int height) : field(width, height), occ(width, height) {}

    int population() const { return static_cast<int>(particles.size()); }
};

double normalize_heading(double degrees);

// Seeds every lattice cell inside or on the hull with probability
// init_density. Cells are visited row-major over the hull's bounding box;
// each seeded particle draws one heading.
SimState init_blob(std::span<const geom::Point> hull, const SwarmConfig& cfg,
                   int width, int height, Rng& rng);

// Registers the dataset's cities as stimuli. They must keep a 2-cell margin
// from the lattice edge so the 3x3 and 5x5 windows fit.
void attach_cities(SimState& state, const geom::CityDataset& ds);

// Three samples at distance SO: F at the heading, FL at heading-SA, FR at
// heading+SA (coordinates rounded to cells, off-lattice reads 0).
//   F greatest        -> keep heading
//   F smallest        -> turn RA in a random direction (one coin draw)
//   FL < FR           -> turn +RA, FR < FL -> turn -RA
//   otherwise         -> keep heading
double sense(const Particle& p, const lattice::ChemoField& field,
             const SwarmConfig& cfg, Rng& rng);

// Step one cell along the heading. A free in-bounds target relocates the
// particle and deposits there; a blocked or off-lattice target leaves it in
// place with a freshly randomised heading and no deposit.
bool attempt_move(Particle& p, std::int32_t id, lattice::OccupancyGrid& occ,
                  lattice::ChemoField& field, const SwarmConfig& cfg, Rng& rng);

// 9x9 window count (focal particle included). A particle that moved since
// its last test and sits in a window of 1..10 spawns into a uniformly
// random empty 3x3 neighbour when one exists. The moved flag clears in
// every case.
std::optional<Particle> division_test(Particle& p,
                                      const lattice::OccupancyGrid& occ,
                                      const SwarmConfig& cfg, Rng& rng);

// Survives unless the 9x9 window (focal included) exceeds survival_max,
// i.e. deletion fires only at full local saturation.
bool deletion_test(const Particle& p, const lattice::OccupancyGrid& occ,
                   const SwarmConfig& cfg);

// Updates every city's traffic light (uncovered iff its 5x5 window holds
// fewer than halting_threshold particles) and the insertion trace; returns
// true when all cities are uncovered.
bool check_halting(SimState& state, const SwarmConfig& cfg);

// One scheduler step: project stimuli, sense+move every particle in a fresh
// random permutation, diffuse, run the periodic division/deletion sweeps,
// then the halting check. The step counter increments first, so sweeps fire
// on steps 5, 10, ... of the run.
void step(SimState& state, const SwarmConfig& cfg, Rng& rng);

using StepCallback = std::function<void(const SimState&)>;

// Returns true when the run halted within max_steps ("no convergence"
// otherwise; the state is left intact for diagnosis either way).
bool run_until_halt(SimState& state, const SwarmConfig& cfg, Rng& rng,
                    int max_steps, const StepCallback& after_step = {});

// Particle store <-> occupancy bijection; cheap enough to assert at halt.
bool occupancy_consistent(const SimState& state);

} // namespace blobtsp::swarm
