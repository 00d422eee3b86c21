#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "blobtsp/rng.hpp"

namespace blobtsp::geom {

struct Point {
    int x = 0;
    int y = 0;
    bool operator==(const Point&) const = default;
};

struct City {
    std::string label;
    int x = 0;
    int y = 0;
};

// Labeled integer city coordinates plus the generation protocol metadata.
struct CityDataset {
    std::vector<City> cities;
    double arena_cx = 0.0;
    double arena_cy = 0.0;
    double arena_radius = 0.0;
    int min_separation = 0;

    int size() const { return static_cast<int>(cities.size()); }
    Point point(int i) const { return {cities[i].x, cities[i].y}; }
};

struct Tour {
    std::vector<int> order; // permutation of city indices
    double length = 0.0;    // closed-loop Euclidean length
};

// A, B, ... Z, AA, AB, ... (bijective base 26), in generation order.
std::string label_for_index(int index);

double euclidean(Point a, Point b);

// n points uniform over the integer cells of the disc, rejection sampled
// until all pairwise distances reach min_sep. Deterministic per seed.
// Throws "infeasible packing" when the attempt budget (1e6) runs out.
CityDataset generate_dataset(int n, double cx, double cy, double radius,
                             int min_sep, std::uint64_t seed);

// Minimal convex polygon containing all points, counter-clockwise
// (positive-cross convention), collinear edge points dropped.
// Throws "degenerate hull" when all points are collinear.
std::vector<Point> convex_hull(std::span<const Point> points);

// Boundary counts as inside. Hull must be CCW as produced above.
bool point_in_hull(Point p, std::span<const Point> hull);

// Closed-loop length of the given visiting order.
// Throws "not a permutation" on duplicate or missing indices.
double tour_length(std::span<const int> order, const CityDataset& ds);

// Plain-text dataset files: line 1 holds n, then n lines of `label x y`.
CityDataset load_dataset(const std::string& path);
void save_dataset(const CityDataset& ds, const std::string& path);

} // namespace blobtsp::geom
