#include "blobtsp/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "blobtsp/rng.hpp"

namespace blobtsp::oracle {

namespace {

double closed_length(const std::vector<int>& order, const DistanceMatrix& d) {
    double len = 0.0;
    const int n = static_cast<int>(order.size());
    for (int i = 0; i < n; ++i) {
        len += d(order[static_cast<std::size_t>(i)],
                 order[static_cast<std::size_t>((i + 1) % n)]);
    }
    return len;
}

} // namespace

DistanceMatrix::DistanceMatrix(const geom::CityDataset& ds) : n_(ds.size()) {
    d_.resize(static_cast<std::size_t>(n_) * n_);
    for (int i = 0; i < n_; ++i) {
        for (int j = 0; j < n_; ++j) {
            d_[static_cast<std::size_t>(i) * n_ + j] =
                geom::euclidean(ds.point(i), ds.point(j));
        }
    }
    validate();
}

DistanceMatrix::DistanceMatrix(int n, std::vector<double> values)
    : n_(n), d_(std::move(values)) {
    if (d_.size() != static_cast<std::size_t>(n_) * n_)
        throw std::invalid_argument("distance matrix shape");
    validate();
}

void DistanceMatrix::validate() const {
    constexpr double kEps = 1e-9;
    for (int i = 0; i < n_; ++i) {
        if ((*this)(i, i) != 0.0)
            throw std::invalid_argument("nonzero diagonal");
        for (int j = 0; j < n_; ++j) {
            if ((*this)(i, j) < 0.0)
                throw std::invalid_argument("negative distance");
            if (std::abs((*this)(i, j) - (*this)(j, i)) > kEps)
                throw std::invalid_argument("asymmetric distances");
        }
    }
    for (int i = 0; i < n_; ++i) {
        for (int j = 0; j < n_; ++j) {
            for (int k = 0; k < n_; ++k) {
                if ((*this)(i, j) > (*this)(i, k) + (*this)(k, j) + kEps)
                    throw std::invalid_argument("triangle inequality violated");
            }
        }
    }
}

geom::Tour held_karp(const DistanceMatrix& d) {
    const int n = d.size();
    if (n < 3 || n > 24) throw std::invalid_argument("use two_opt");

    // States over subsets of {1..n-1} with city 0 as the fixed anchor:
    // cost[mask][j] = shortest 0 -> ... -> j path visiting exactly the
    // cities of mask, j in mask. Masks ascend, so dependencies are ready.
    const int m = n - 1;
    const std::size_t n_masks = std::size_t{1} << m;
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> cost(n_masks * static_cast<std::size_t>(m), inf);
    std::vector<std::uint8_t> parent(n_masks * static_cast<std::size_t>(m), 0);

    const auto at = [m](std::size_t mask, int j) {
        return mask * static_cast<std::size_t>(m) + static_cast<std::size_t>(j);
    };

    for (int j = 0; j < m; ++j) {
        cost[at(std::size_t{1} << j, j)] = d(0, j + 1);
    }
    for (std::size_t mask = 1; mask < n_masks; ++mask) {
        if ((mask & (mask - 1)) == 0) continue; // singletons are seeded
        for (int j = 0; j < m; ++j) {
            if (!(mask & (std::size_t{1} << j))) continue;
            const std::size_t prev = mask ^ (std::size_t{1} << j);
            double best = inf;
            int best_k = 0;
            for (int k = 0; k < m; ++k) {
                if (!(prev & (std::size_t{1} << k))) continue;
                const double c = cost[at(prev, k)] + d(k + 1, j + 1);
                if (c < best) {
                    best = c;
                    best_k = k;
                }
            }
            cost[at(mask, j)] = best;
            parent[at(mask, j)] = static_cast<std::uint8_t>(best_k);
        }
    }

    const std::size_t full = n_masks - 1;
    double best = inf;
    int best_j = 0;
    for (int j = 0; j < m; ++j) {
        const double c = cost[at(full, j)] + d(j + 1, 0);
        if (c < best) {
            best = c;
            best_j = j;
        }
    }

    geom::Tour tour;
    tour.length = best;
    std::vector<int> rev;
    std::size_t mask = full;
    int j = best_j;
    while (true) {
        rev.push_back(j + 1);
        const std::size_t without = mask ^ (std::size_t{1} << j);
        if (without == 0) break;
        j = parent[at(mask, j)];
        mask = without;
    }
    tour.order.push_back(0);
    tour.order.insert(tour.order.end(), rev.rbegin(), rev.rend());
    return tour;
}

geom::Tour brute_force(const DistanceMatrix& d) {
    const int n = d.size();
    if (n < 3 || n > 9) throw std::invalid_argument("brute_force needs 3 <= n <= 9");

    std::vector<int> perm(static_cast<std::size_t>(n) - 1);
    std::iota(perm.begin(), perm.end(), 1);

    geom::Tour best;
    best.length = std::numeric_limits<double>::infinity();
    std::vector<int> order(static_cast<std::size_t>(n));
    order[0] = 0;
    do {
        // Each tour and its reversal have equal length; keep one.
        if (perm.front() > perm.back()) continue;
        std::copy(perm.begin(), perm.end(), order.begin() + 1);
        const double len = closed_length(order, d);
        if (len < best.length) {
            best.length = len;
            best.order = order;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

geom::Tour nearest_neighbor(const DistanceMatrix& d) {
    const int n = d.size();
    std::vector<char> used(static_cast<std::size_t>(n), 0);
    std::vector<int> order{0};
    used[0] = 1;
    for (int s = 1; s < n; ++s) {
        const int cur = order.back();
        int pick = -1;
        double pick_d = std::numeric_limits<double>::infinity();
        for (int j = 0; j < n; ++j) {
            if (used[static_cast<std::size_t>(j)]) continue;
            if (d(cur, j) < pick_d) {
                pick_d = d(cur, j);
                pick = j;
            }
        }
        order.push_back(pick);
        used[static_cast<std::size_t>(pick)] = 1;
    }
    return {order, closed_length(order, d)};
}

namespace {

// First-improvement segment reversal until no move shortens the tour.
void improve_2opt(std::vector<int>& order, const DistanceMatrix& d) {
    const int n = static_cast<int>(order.size());
    constexpr double kEps = 1e-12;
    bool improved = true;
    while (improved) {
        improved = false;
        for (int i = 0; i < n - 1 && !improved; ++i) {
            const int a = order[static_cast<std::size_t>(i)];
            const int b = order[static_cast<std::size_t>(i + 1)];
            for (int j = i + 2; j < n; ++j) {
                if (i == 0 && j == n - 1) continue; // same edge pair
                const int c = order[static_cast<std::size_t>(j)];
                const int e = order[static_cast<std::size_t>((j + 1) % n)];
                const double delta = d(a, c) + d(b, e) - d(a, b) - d(c, e);
                if (delta < -kEps) {
                    std::reverse(order.begin() + i + 1, order.begin() + j + 1);
                    improved = true;
                    break;
                }
            }
        }
    }
}

} // namespace

geom::Tour two_opt(const DistanceMatrix& d, std::uint64_t seed, int restarts) {
    if (restarts < 1) throw std::invalid_argument("restarts must be >= 1");
    const int n = d.size();
    if (n < 4) throw std::invalid_argument("two_opt needs n >= 4");

    Rng rng(seed);
    geom::Tour best;
    best.length = std::numeric_limits<double>::infinity();
    for (int r = 0; r < restarts; ++r) {
        std::vector<int> order;
        if (r == 0) {
            order = nearest_neighbor(d).order;
        } else {
            order.resize(static_cast<std::size_t>(n));
            std::iota(order.begin(), order.end(), 0);
            rng.shuffle(order);
        }
        improve_2opt(order, d);
        const double len = closed_length(order, d);
        if (len < best.length) {
            best.length = len;
            best.order = order;
        }
    }
    return best;
}

} // namespace blobtsp::oracle
