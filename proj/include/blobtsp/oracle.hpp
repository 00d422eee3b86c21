#pragma once

#include <cstdint>
#include <vector>

#include "blobtsp/geometry.hpp"

namespace blobtsp::oracle {

// Symmetric Euclidean distances with zero diagonal; the triangle
// inequality is asserted on construction.
class DistanceMatrix {
public:
    explicit DistanceMatrix(const geom::CityDataset& ds);
    DistanceMatrix(int n, std::vector<double> values); // row-major n*n

    int size() const { return n_; }
    double operator()(int i, int j) const {
        return d_[static_cast<std::size_t>(i) * n_ + j];
    }

private:
    void validate() const;

    int n_ = 0;
    std::vector<double> d_;
};

// Exact minimum closed tour via the subset dynamic program. Requires
// 3 <= n <= 24 (the state table is 2^(n-1) x (n-1)); throws "use two_opt"
// outside that range. Ties break toward the lowest city index.
geom::Tour held_karp(const DistanceMatrix& d);

// Exhaustive (n-1)!/2 search, n <= 9. Validation oracle for held_karp.
geom::Tour brute_force(const DistanceMatrix& d);

// Best tour over `restarts` starts (the first seeded by nearest-neighbour
// construction, the rest random), each improved to a first-improvement
// 2-opt local optimum. Deterministic per seed.
geom::Tour two_opt(const DistanceMatrix& d, std::uint64_t seed, int restarts);

// Greedy construction from city 0; upper bound used by two_opt and tests.
geom::Tour nearest_neighbor(const DistanceMatrix& d);

} // namespace blobtsp::oracle
