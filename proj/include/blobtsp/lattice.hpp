#pragma once

#include <cassert>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace blobtsp::lattice {

// Scalar chemoattractant concentration per cell, double buffered so one
// diffusion step is a pure function of the previous buffer.
class ChemoField {
public:
    ChemoField(int width, int height)
        : width_(width), height_(height),
          values_(static_cast<std::size_t>(width) * height, 0.0),
          back_(static_cast<std::size_t>(width) * height, 0.0) {
        assert(width > 0 && height > 0);
    }

    int width() const { return width_; }
    int height() const { return height_; }

    bool in_bounds(int x, int y) const {
        return x >= 0 && x < width_ && y >= 0 && y < height_;
    }

    double at(int x, int y) const {
        assert(in_bounds(x, y));
        return values_[idx(x, y)];
    }

    // Out-of-bounds sensor reads see an empty lattice.
    double sample(int x, int y) const {
        return in_bounds(x, y) ? values_[idx(x, y)] : 0.0;
    }

    void deposit(int x, int y, double amount) {
        assert(in_bounds(x, y));
        assert(amount >= 0.0);
        values_[idx(x, y)] += amount;
    }

    // 3x3 mean filter damped by 0.95. Off-lattice neighbours contribute 0
    // and the divisor stays 9, so mass leaks at the boundary.
    void diffuse();

    double total_mass() const;

    std::span<const double> values() const { return values_; }
    double* raw() { return values_.data(); }

private:
    std::size_t idx(int x, int y) const {
        return static_cast<std::size_t>(y) * width_ + x;
    }

    int width_;
    int height_;
    std::vector<double> values_;
    std::vector<double> back_;
    std::vector<double> row_sums_; // scratch for the separable filter
};

// At most one particle per cell; -1 marks an empty cell. The swarm module
// keeps this bijective with its particle store.
class OccupancyGrid {
public:
    OccupancyGrid(int width, int height)
        : width_(width), height_(height),
          cells_(static_cast<std::size_t>(width) * height, -1) {}

    int width() const { return width_; }
    int height() const { return height_; }

    bool in_bounds(int x, int y) const {
        return x >= 0 && x < width_ && y >= 0 && y < height_;
    }

    bool occupied(int x, int y) const { return cells_[idx(x, y)] >= 0; }

    std::int32_t at(int x, int y) const { return cells_[idx(x, y)]; }

    void place(std::int32_t id, int x, int y) {
        assert(in_bounds(x, y) && cells_[idx(x, y)] < 0);
        cells_[idx(x, y)] = id;
    }

    void remove(int x, int y) {
        assert(cells_[idx(x, y)] >= 0);
        cells_[idx(x, y)] = -1;
    }

    void relocate(std::int32_t id, int from_x, int from_y, int to_x, int to_y) {
        assert(cells_[idx(from_x, from_y)] == id);
        assert(cells_[idx(to_x, to_y)] < 0);
        cells_[idx(from_x, from_y)] = -1;
        cells_[idx(to_x, to_y)] = id;
    }

    int population() const;

private:
    std::size_t idx(int x, int y) const {
        return static_cast<std::size_t>(y) * width_ + x;
    }

    int width_;
    int height_;
    std::vector<std::int32_t> cells_;
};

// City stimulus with its halting indicator ("traffic light").
struct CityStimulus {
    int index = 0;
    int x = 0;
    int y = 0;
    bool uncovered = false;
};

inline constexpr double kProjectionUncovered = 1.275;
inline constexpr double kProjectionCovered = 0.01275;

// Occupied cells in the (2*half_width+1)^2 window centred on (cx, cy);
// the window clips at lattice edges.
int count_particles_window(const OccupancyGrid& occ, int cx, int cy,
                           int half_width);

// Per city: 1.275 units into each cell of its 3x3 window while no particle
// sits in that window, 0.01275 once covered. Called once per scheduler step.
void project_cities(ChemoField& field, std::span<const CityStimulus> cities,
                    const OccupancyGrid& occ);

// 8-bit grayscale, min-max normalised per frame (flat fields render black).
std::vector<std::uint8_t> field_to_gray(const ChemoField& field);

// Binary P5 PGM.
void write_pgm(const std::string& path, int width, int height,
               std::span<const std::uint8_t> pixels);

} // namespace blobtsp::lattice
