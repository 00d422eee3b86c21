#pragma once

#include <cstdint>
#include <vector>

#include "blobtsp/geometry.hpp"
#include "blobtsp/swarm.hpp"

namespace blobtsp::tracer {

// Occupancy snapshot at halt, reduced to the largest 8-connected component.
struct BlobMask {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> cells;
    int fragments_dropped = 0;
    int cells_dropped = 0;

    bool at(int x, int y) const {
        return x >= 0 && x < width && y >= 0 && y < height &&
               cells[static_cast<std::size_t>(y) * width + x] != 0;
    }
    void set(int x, int y) {
        cells[static_cast<std::size_t>(y) * width + x] = 1;
    }
    int count() const;
};

// Closed clockwise loop of boundary cells (image coordinates, y down;
// interior stays on the walker's right). Narrow peninsulas appear twice.
using BoundaryPath = std::vector<geom::Point>;

// Largest 8-connected component of the occupied cells; smaller fragments
// are dropped and counted. Throws "empty blob" when nothing is occupied.
BlobMask extract_mask(const swarm::SimState& state);
BlobMask largest_component(const BlobMask& raw);

// Moore-neighbour following with Jacob's stopping criterion, starting at
// the topmost (then leftmost) cell. Every boundary cell is visited at
// least once; single cells yield a path of length 1.
BoundaryPath trace_boundary(const BlobMask& mask);

// Walks the loop and appends each city at its first path cell within
// detect_radius (Chebyshev). Throws "city off perimeter: <label>" when a
// city is never encountered.
geom::Tour read_tour(const BoundaryPath& path, const geom::CityDataset& ds,
                     int detect_radius = 3);

// Number of 8-connected components and the cell count of the largest;
// used for the connectivity monitor.
struct ComponentStats {
    int components = 0;
    int largest = 0;
    int total = 0;
};
ComponentStats component_stats(const swarm::SimState& state);

// Masks round-trip through PGM (0 = empty, 255 = occupied) so tours can be
// re-read offline.
void save_mask(const BlobMask& mask, const std::string& path);
BlobMask load_mask(const std::string& path);

} // namespace blobtsp::tracer
