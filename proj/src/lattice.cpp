#include "blobtsp/lattice.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <stdexcept>

namespace blobtsp::lattice {

void ChemoField::diffuse() {
    const int w = width_;
    const int h = height_;
    // Separable 3x3 box sum: horizontal triples per row, then vertical
    // triples over those. Missing neighbours contribute 0 either way.
    if (row_sums_.empty()) row_sums_.resize(values_.size());
    for (int y = 0; y < h; ++y) {
        const double* row = values_.data() + static_cast<std::size_t>(y) * w;
        double* out = row_sums_.data() + static_cast<std::size_t>(y) * w;
        for (int x = 0; x < w; ++x) {
            double s = row[x];
            if (x > 0) s += row[x - 1];
            if (x + 1 < w) s += row[x + 1];
            out[x] = s;
        }
    }
    constexpr double kDamp = 0.95 / 9.0;
    for (int y = 0; y < h; ++y) {
        const double* mid = row_sums_.data() + static_cast<std::size_t>(y) * w;
        const double* up = y > 0 ? mid - w : nullptr;
        const double* dn = y + 1 < h ? mid + w : nullptr;
        double* out = back_.data() + static_cast<std::size_t>(y) * w;
        for (int x = 0; x < w; ++x) {
            double s = mid[x];
            if (up) s += up[x];
            if (dn) s += dn[x];
            out[x] = s * kDamp;
        }
    }
    values_.swap(back_);
}

double ChemoField::total_mass() const {
    return std::accumulate(values_.begin(), values_.end(), 0.0);
}

int OccupancyGrid::population() const {
    int n = 0;
    for (std::int32_t c : cells_) n += (c >= 0);
    return n;
}

int count_particles_window(const OccupancyGrid& occ, int cx, int cy,
                           int half_width) {
    const int x0 = std::max(0, cx - half_width);
    const int x1 = std::min(occ.width() - 1, cx + half_width);
    const int y0 = std::max(0, cy - half_width);
    const int y1 = std::min(occ.height() - 1, cy + half_width);
    int count = 0;
    for (int y = y0; y <= y1; ++y) {
        for (int x = x0; x <= x1; ++x) {
            count += occ.occupied(x, y);
        }
    }
    return count;
}

void project_cities(ChemoField& field, std::span<const CityStimulus> cities,
                    const OccupancyGrid& occ) {
    for (const CityStimulus& c : cities) {
        const bool covered = count_particles_window(occ, c.x, c.y, 1) > 0;
        const double amount = covered ? kProjectionCovered : kProjectionUncovered;
        for (int dy = -1; dy <= 1; ++dy) {
            for (int dx = -1; dx <= 1; ++dx) {
                if (field.in_bounds(c.x + dx, c.y + dy)) {
                    field.deposit(c.x + dx, c.y + dy, amount);
                }
            }
        }
    }
}

std::vector<std::uint8_t> field_to_gray(const ChemoField& field) {
    auto vals = field.values();
    std::vector<std::uint8_t> out(vals.size(), 0);
    const auto [mn_it, mx_it] = std::minmax_element(vals.begin(), vals.end());
    const double mn = *mn_it;
    const double mx = *mx_it;
    if (mx > mn) {
        const double scale = 255.0 / (mx - mn);
        for (std::size_t i = 0; i < vals.size(); ++i) {
            out[i] = static_cast<std::uint8_t>((vals[i] - mn) * scale + 0.5);
        }
    }
    return out;
}

void write_pgm(const std::string& path, int width, int height,
               std::span<const std::uint8_t> pixels) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write frame: " + path);
    out << "P5\n" << width << " " << height << "\n255\n";
    out.write(reinterpret_cast<const char*>(pixels.data()),
              static_cast<std::streamsize>(pixels.size()));
    if (!out) throw std::runtime_error("write failed: " + path);
}

} // namespace blobtsp::lattice
