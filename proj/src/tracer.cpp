#include "blobtsp/tracer.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

namespace blobtsp::tracer {

namespace {

// Clockwise Moore neighbourhood in image coordinates, starting west.
constexpr std::array<geom::Point, 8> kRing = {{{-1, 0},
                                               {-1, -1},
                                               {0, -1},
                                               {1, -1},
                                               {1, 0},
                                               {1, 1},
                                               {0, 1},
                                               {-1, 1}}};

int ring_index(geom::Point from, geom::Point to) {
    const geom::Point d{to.x - from.x, to.y - from.y};
    for (int i = 0; i < 8; ++i) {
        if (kRing[static_cast<std::size_t>(i)] == d) return i;
    }
    throw std::logic_error("cells not adjacent");
}

// Labels 8-connected components; returns label grid and per-label sizes.
std::vector<int> label_components(const BlobMask& mask,
                                  std::vector<int>& sizes) {
    const int w = mask.width;
    const int h = mask.height;
    std::vector<int> labels(static_cast<std::size_t>(w) * h, -1);
    sizes.clear();
    std::vector<geom::Point> stack;
    for (int sy = 0; sy < h; ++sy) {
        for (int sx = 0; sx < w; ++sx) {
            const std::size_t si = static_cast<std::size_t>(sy) * w + sx;
            if (!mask.cells[si] || labels[si] >= 0) continue;
            const int label = static_cast<int>(sizes.size());
            sizes.push_back(0);
            stack.push_back({sx, sy});
            labels[si] = label;
            while (!stack.empty()) {
                const geom::Point p = stack.back();
                stack.pop_back();
                ++sizes[static_cast<std::size_t>(label)];
                for (int dy = -1; dy <= 1; ++dy) {
                    for (int dx = -1; dx <= 1; ++dx) {
                        const int nx = p.x + dx;
                        const int ny = p.y + dy;
                        if (nx < 0 || nx >= w || ny < 0 || ny >= h) continue;
                        const std::size_t ni =
                            static_cast<std::size_t>(ny) * w + nx;
                        if (!mask.cells[ni] || labels[ni] >= 0) continue;
                        labels[ni] = label;
                        stack.push_back({nx, ny});
                    }
                }
            }
        }
    }
    return labels;
}

} // namespace

int BlobMask::count() const {
    return static_cast<int>(
        std::count_if(cells.begin(), cells.end(), [](auto c) { return c != 0; }));
}

BlobMask largest_component(const BlobMask& raw) {
    std::vector<int> sizes;
    const std::vector<int> labels = label_components(raw, sizes);
    if (sizes.empty()) throw std::runtime_error("empty blob");
    const int best = static_cast<int>(std::distance(
        sizes.begin(), std::max_element(sizes.begin(), sizes.end())));

    BlobMask mask;
    mask.width = raw.width;
    mask.height = raw.height;
    mask.cells.assign(labels.size(), 0);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] == best) mask.cells[i] = 1;
    }
    mask.fragments_dropped = static_cast<int>(sizes.size()) - 1;
    mask.cells_dropped =
        std::accumulate(sizes.begin(), sizes.end(), 0) -
        sizes[static_cast<std::size_t>(best)];
    return mask;
}

BlobMask extract_mask(const swarm::SimState& state) {
    BlobMask raw;
    raw.width = state.occ.width();
    raw.height = state.occ.height();
    raw.cells.assign(static_cast<std::size_t>(raw.width) * raw.height, 0);
    for (const swarm::Particle& p : state.particles) raw.set(p.x, p.y);
    if (state.particles.empty()) throw std::runtime_error("empty blob");
    return largest_component(raw);
}

ComponentStats component_stats(const swarm::SimState& state) {
    BlobMask raw;
    raw.width = state.occ.width();
    raw.height = state.occ.height();
    raw.cells.assign(static_cast<std::size_t>(raw.width) * raw.height, 0);
    for (const swarm::Particle& p : state.particles) raw.set(p.x, p.y);
    std::vector<int> sizes;
    label_components(raw, sizes);
    ComponentStats stats;
    stats.components = static_cast<int>(sizes.size());
    stats.largest = sizes.empty() ? 0 : *std::max_element(sizes.begin(), sizes.end());
    stats.total = std::accumulate(sizes.begin(), sizes.end(), 0);
    return stats;
}

BoundaryPath trace_boundary(const BlobMask& mask) {
    // Topmost then leftmost occupied cell.
    geom::Point start{-1, -1};
    for (int y = 0; y < mask.height && start.x < 0; ++y) {
        for (int x = 0; x < mask.width; ++x) {
            if (mask.at(x, y)) {
                start = {x, y};
                break;
            }
        }
    }
    if (start.x < 0) throw std::runtime_error("empty blob");

    // The walk is a deterministic orbit over (cell, backtrack) states. The
    // seeded west-of-start state may sit on a short lead-in before the
    // orbit becomes periodic, so record states until one repeats and keep
    // exactly the cycle: that is the closed loop around the component.
    const auto state_key = [&](geom::Point c, geom::Point b) {
        return (static_cast<std::uint64_t>(c.y) * mask.width + c.x) * 8 +
               static_cast<std::uint64_t>(ring_index(c, b));
    };

    geom::Point current = start;
    geom::Point backtrack{start.x - 1, start.y}; // west of start is free
    std::vector<geom::Point> cells{current};
    std::unordered_map<std::uint64_t, std::size_t> seen{
        {state_key(current, backtrack), 0}};

    std::size_t cycle_begin = 0;
    bool found_cycle = false;
    const std::size_t safety_cap = mask.cells.size() * 8 + 16;
    while (cells.size() < safety_cap) {
        const int from = ring_index(current, backtrack);
        geom::Point next{-1, -1};
        geom::Point next_backtrack = backtrack;
        for (int k = 1; k <= 8; ++k) {
            const geom::Point d = kRing[static_cast<std::size_t>((from + k) % 8)];
            const geom::Point cand{current.x + d.x, current.y + d.y};
            if (mask.at(cand.x, cand.y)) {
                next = cand;
                break;
            }
            next_backtrack = cand;
        }
        if (next.x < 0) return {start}; // isolated cell

        const auto [it, inserted] =
            seen.try_emplace(state_key(next, next_backtrack), cells.size());
        if (!inserted) {
            cycle_begin = it->second;
            found_cycle = true;
            break;
        }
        cells.push_back(next);
        current = next;
        backtrack = next_backtrack;
    }
    if (!found_cycle) throw std::logic_error("boundary trace did not close");

    BoundaryPath cycle(cells.begin() + static_cast<std::ptrdiff_t>(cycle_begin),
                       cells.end());
    // Rotate so the loop starts at the topmost-leftmost cell; the cycle
    // visits every boundary cell, so the start cell is on it.
    const auto pivot = std::find(cycle.begin(), cycle.end(), start);
    if (pivot == cycle.end()) throw std::logic_error("start cell not on loop");
    std::rotate(cycle.begin(), pivot, cycle.end());
    return cycle;
}

geom::Tour read_tour(const BoundaryPath& path, const geom::CityDataset& ds,
                     int detect_radius) {
    const int n = ds.size();
    std::vector<char> added(static_cast<std::size_t>(n), 0);
    geom::Tour tour;
    for (const geom::Point& cell : path) {
        for (int i = 0; i < n; ++i) {
            if (added[static_cast<std::size_t>(i)]) continue;
            const geom::Point c = ds.point(i);
            if (std::abs(c.x - cell.x) <= detect_radius &&
                std::abs(c.y - cell.y) <= detect_radius) {
                added[static_cast<std::size_t>(i)] = 1;
                tour.order.push_back(i);
            }
        }
    }
    for (int i = 0; i < n; ++i) {
        if (!added[static_cast<std::size_t>(i)]) {
            throw std::runtime_error("city off perimeter: " +
                                     ds.cities[static_cast<std::size_t>(i)].label);
        }
    }
    tour.length = geom::tour_length(tour.order, ds);
    return tour;
}

void save_mask(const BlobMask& mask, const std::string& path) {
    std::vector<std::uint8_t> pixels(mask.cells.size());
    for (std::size_t i = 0; i < mask.cells.size(); ++i) {
        pixels[i] = mask.cells[i] ? 255 : 0;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write mask: " + path);
    out << "P5\n" << mask.width << " " << mask.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(pixels.data()),
              static_cast<std::streamsize>(pixels.size()));
}

BlobMask load_mask(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open mask: " + path);
    std::string magic;
    int w = 0, h = 0, maxval = 0;
    in >> magic >> w >> h >> maxval;
    if (magic != "P5" || w <= 0 || h <= 0)
        throw std::runtime_error("bad mask file: " + path);
    in.get(); // single whitespace after header
    std::vector<std::uint8_t> pixels(static_cast<std::size_t>(w) * h);
    in.read(reinterpret_cast<char*>(pixels.data()),
            static_cast<std::streamsize>(pixels.size()));
    if (!in) throw std::runtime_error("truncated mask file: " + path);
    BlobMask mask;
    mask.width = w;
    mask.height = h;
    mask.cells.assign(pixels.size(), 0);
    for (std::size_t i = 0; i < pixels.size(); ++i) {
        mask.cells[i] = pixels[i] > 0 ? 1 : 0;
    }
    return mask;
}

} // namespace blobtsp::tracer
