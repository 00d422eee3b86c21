#include "blobtsp/swarm.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace blobtsp::swarm {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

struct Offset {
    int dx;
    int dy;
};

Offset heading_offset(double heading_deg, double distance) {
    const double rad = heading_deg * kDegToRad;
    return {static_cast<int>(std::lround(distance * std::cos(rad))),
            static_cast<int>(std::lround(distance * std::sin(rad)))};
}

} // namespace

double normalize_heading(double degrees) {
    double h = std::fmod(degrees, 360.0);
    if (h < 0.0) h += 360.0;
    return h;
}

SimState init_blob(std::span<const geom::Point> hull, const SwarmConfig& cfg,
                   int width, int height, Rng& rng) {
    if (hull.size() < 3) throw std::runtime_error("degenerate hull");
    if (cfg.init_density <= 0.0 || cfg.init_density > 1.0)
        throw std::runtime_error("empty initialization");

    SimState state(width, height);
    int min_x = hull[0].x, max_x = hull[0].x;
    int min_y = hull[0].y, max_y = hull[0].y;
    for (const geom::Point& v : hull) {
        min_x = std::min(min_x, v.x);
        max_x = std::max(max_x, v.x);
        min_y = std::min(min_y, v.y);
        max_y = std::max(max_y, v.y);
    }
    min_x = std::max(min_x, 0);
    min_y = std::max(min_y, 0);
    max_x = std::min(max_x, width - 1);
    max_y = std::min(max_y, height - 1);

    for (int y = min_y; y <= max_y; ++y) {
        for (int x = min_x; x <= max_x; ++x) {
            if (!geom::point_in_hull({x, y}, hull)) continue;
            if (rng.uniform01() >= cfg.init_density) continue;
            const auto id = static_cast<std::int32_t>(state.particles.size());
            state.particles.push_back({x, y, rng.angle_deg(), false});
            state.occ.place(id, x, y);
        }
    }
    if (state.particles.empty()) throw std::runtime_error("empty initialization");
    return state;
}

void attach_cities(SimState& state, const geom::CityDataset& ds) {
    state.cities.clear();
    for (int i = 0; i < ds.size(); ++i) {
        const geom::City& c = ds.cities[static_cast<std::size_t>(i)];
        if (c.x < 2 || c.x > state.field.width() - 3 || c.y < 2 ||
            c.y > state.field.height() - 3) {
            throw std::runtime_error("city too close to lattice edge: " + c.label);
        }
        state.cities.push_back({i, c.x, c.y, false});
    }
}

double sense(const Particle& p, const lattice::ChemoField& field,
             const SwarmConfig& cfg, Rng& rng) {
    const auto sample_at = [&](double angle) {
        const Offset o = heading_offset(angle, cfg.sensor_offset);
        return field.sample(p.x + o.dx, p.y + o.dy);
    };
    const double f = sample_at(p.heading);
    const double fl = sample_at(p.heading - cfg.sensor_angle);
    const double fr = sample_at(p.heading + cfg.sensor_angle);

    double heading = p.heading;
    if (f > fl && f > fr) {
        // keep
    } else if (f < fl && f < fr) {
        heading += rng.coin() ? cfg.rotation_angle : -cfg.rotation_angle;
    } else if (fl < fr) {
        heading += cfg.rotation_angle;
    } else if (fr < fl) {
        heading -= cfg.rotation_angle;
    }
    return normalize_heading(heading);
}

bool attempt_move(Particle& p, std::int32_t id, lattice::OccupancyGrid& occ,
                  lattice::ChemoField& field, const SwarmConfig& cfg,
                  Rng& rng) {
    const Offset o = heading_offset(p.heading, cfg.step_length);
    const int tx = p.x + o.dx;
    const int ty = p.y + o.dy;
    if (occ.in_bounds(tx, ty) && !occ.occupied(tx, ty)) {
        occ.relocate(id, p.x, p.y, tx, ty);
        p.x = tx;
        p.y = ty;
        field.deposit(tx, ty, cfg.deposit_amount);
        p.moved_since_division_test = true;
        return true;
    }
    p.heading = rng.angle_deg();
    return false;
}

std::optional<Particle> division_test(Particle& p,
                                      const lattice::OccupancyGrid& occ,
                                      const SwarmConfig& cfg, Rng& rng) {
    const int c = lattice::count_particles_window(occ, p.x, p.y, 4);
    const bool eligible = c >= cfg.division_window_min &&
                          c <= cfg.division_window_max &&
                          p.moved_since_division_test;
    p.moved_since_division_test = false;
    if (!eligible) return std::nullopt;

    Offset slots[8];
    int n_slots = 0;
    for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
            if (dx == 0 && dy == 0) continue;
            const int nx = p.x + dx;
            const int ny = p.y + dy;
            if (occ.in_bounds(nx, ny) && !occ.occupied(nx, ny)) {
                slots[n_slots++] = {dx, dy};
            }
        }
    }
    if (n_slots == 0) return std::nullopt;
    const Offset pick = slots[rng.below(static_cast<std::uint64_t>(n_slots))];
    return Particle{p.x + pick.dx, p.y + pick.dy, rng.angle_deg(), false};
}

bool deletion_test(const Particle& p, const lattice::OccupancyGrid& occ,
                   const SwarmConfig& cfg) {
    return lattice::count_particles_window(occ, p.x, p.y, 4) <= cfg.survival_max;
}

bool check_halting(SimState& state, const SwarmConfig& cfg) {
    bool all_uncovered = true;
    for (lattice::CityStimulus& c : state.cities) {
        const int count = lattice::count_particles_window(
            state.occ, c.x, c.y, cfg.halting_half_width);
        const bool uncovered = count < cfg.halting_threshold;
        if (uncovered && !c.uncovered) {
            state.trace.push_back({state.step, c.index});
        } else if (!uncovered && c.uncovered) {
            // The uncover did not persist; drop its pending event.
            std::erase_if(state.trace, [&](const UncoverEvent& e) {
                return e.city == c.index;
            });
        }
        c.uncovered = uncovered;
        all_uncovered = all_uncovered && uncovered;
    }
    return all_uncovered;
}

void step(SimState& state, const SwarmConfig& cfg, Rng& rng) {
    ++state.step;

    lattice::project_cities(state.field, state.cities, state.occ);

    // Motor pass over a fresh random permutation of the population.
    std::vector<std::int32_t> order(state.particles.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        order[i] = static_cast<std::int32_t>(i);
    rng.shuffle(order);
    for (std::int32_t id : order) {
        Particle& p = state.particles[static_cast<std::size_t>(id)];
        p.heading = sense(p, state.field, cfg, rng);
        attempt_move(p, id, state.occ, state.field, cfg, rng);
    }

    state.field.diffuse();

    if (cfg.division_period > 0 && state.step % cfg.division_period == 0) {
        // Snapshot: particles spawned in this sweep wait for the next one.
        std::vector<std::int32_t> sweep(state.particles.size());
        for (std::size_t i = 0; i < sweep.size(); ++i)
            sweep[i] = static_cast<std::int32_t>(i);
        rng.shuffle(sweep);
        for (std::int32_t id : sweep) {
            Particle& p = state.particles[static_cast<std::size_t>(id)];
            if (auto spawned = division_test(p, state.occ, cfg, rng)) {
                const auto new_id =
                    static_cast<std::int32_t>(state.particles.size());
                state.occ.place(new_id, spawned->x, spawned->y);
                state.particles.push_back(*spawned);
            }
        }
    }

    if (cfg.deletion_period > 0 && state.step % cfg.deletion_period == 0) {
        std::vector<std::int32_t> sweep(state.particles.size());
        for (std::size_t i = 0; i < sweep.size(); ++i)
            sweep[i] = static_cast<std::int32_t>(i);
        rng.shuffle(sweep);
        std::vector<char> dead(state.particles.size(), 0);
        for (std::int32_t id : sweep) {
            const Particle& p = state.particles[static_cast<std::size_t>(id)];
            if (!deletion_test(p, state.occ, cfg)) {
                dead[static_cast<std::size_t>(id)] = 1;
                state.occ.remove(p.x, p.y);
            }
        }
        // Compact the store and re-key survivors in the grid.
        std::size_t w = 0;
        for (std::size_t r = 0; r < state.particles.size(); ++r) {
            if (dead[r]) continue;
            if (w != r) {
                state.particles[w] = state.particles[r];
                state.occ.remove(state.particles[w].x, state.particles[w].y);
                state.occ.place(static_cast<std::int32_t>(w),
                                state.particles[w].x, state.particles[w].y);
            }
            ++w;
        }
        state.particles.resize(w);
    }

    if (check_halting(state, cfg)) state.halted = true;

#ifndef NDEBUG
    assert(occupancy_consistent(state));
#endif
}

bool run_until_halt(SimState& state, const SwarmConfig& cfg, Rng& rng,
                    int max_steps, const StepCallback& after_step) {
    if (max_steps <= 0) throw std::invalid_argument("max_steps must be > 0");
    while (!state.halted && state.step < max_steps) {
        step(state, cfg, rng);
        if (after_step) after_step(state);
    }
    return state.halted;
}

bool occupancy_consistent(const SimState& state) {
    if (state.occ.population() != state.population()) return false;
    for (std::size_t i = 0; i < state.particles.size(); ++i) {
        const Particle& p = state.particles[i];
        if (!state.occ.in_bounds(p.x, p.y)) return false;
        if (state.occ.at(p.x, p.y) != static_cast<std::int32_t>(i)) return false;
        if (p.heading < 0.0 || p.heading >= 360.0) return false;
    }
    return true;
}

} // namespace blobtsp::swarm
