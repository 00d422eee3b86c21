#include "blobtsp/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace blobtsp::geom {

namespace {

long long cross(Point o, Point a, Point b) {
    return static_cast<long long>(a.x - o.x) * (b.y - o.y) -
           static_cast<long long>(a.y - o.y) * (b.x - o.x);
}

long long dist2(Point a, Point b) {
    long long dx = a.x - b.x;
    long long dy = a.y - b.y;
    return dx * dx + dy * dy;
}

} // namespace

std::string label_for_index(int index) {
    std::string label;
    int n = index + 1; // bijective base 26
    while (n > 0) {
        int rem = (n - 1) % 26;
        label.push_back(static_cast<char>('A' + rem));
        n = (n - 1) / 26;
    }
    std::reverse(label.begin(), label.end());
    return label;
}

double euclidean(Point a, Point b) {
    return std::sqrt(static_cast<double>(dist2(a, b)));
}

CityDataset generate_dataset(int n, double cx, double cy, double radius,
                             int min_sep, std::uint64_t seed) {
    if (n < 3) throw std::invalid_argument("need at least 3 cities");
    CityDataset ds;
    ds.arena_cx = cx;
    ds.arena_cy = cy;
    ds.arena_radius = radius;
    ds.min_separation = min_sep;

    Rng rng(seed);
    const int lo_x = static_cast<int>(std::ceil(cx - radius));
    const int hi_x = static_cast<int>(std::floor(cx + radius));
    const int lo_y = static_cast<int>(std::ceil(cy - radius));
    const int hi_y = static_cast<int>(std::floor(cy + radius));
    const long long span_x = hi_x - lo_x + 1;
    const long long span_y = hi_y - lo_y + 1;
    const double r2 = radius * radius;
    const long long sep2 = static_cast<long long>(min_sep) * min_sep;

    std::vector<Point> pts;
    pts.reserve(static_cast<std::size_t>(n));
    long long budget = 1'000'000;
    while (static_cast<int>(pts.size()) < n) {
        if (--budget < 0) throw std::runtime_error("infeasible packing");
        Point p{lo_x + static_cast<int>(rng.below(span_x)),
                lo_y + static_cast<int>(rng.below(span_y))};
        double dx = p.x - cx;
        double dy = p.y - cy;
        if (dx * dx + dy * dy > r2) continue;
        bool ok = true;
        for (const Point& q : pts) {
            if (dist2(p, q) < sep2) {
                ok = false;
                break;
            }
        }
        if (!ok) continue;
        pts.push_back(p);
    }

    for (int i = 0; i < n; ++i) {
        ds.cities.push_back({label_for_index(i), pts[i].x, pts[i].y});
    }
    return ds;
}

std::vector<Point> convex_hull(std::span<const Point> points) {
    if (points.size() < 3) throw std::runtime_error("degenerate hull");
    std::vector<Point> pts(points.begin(), points.end());
    std::sort(pts.begin(), pts.end(), [](Point a, Point b) {
        return a.x != b.x ? a.x < b.x : a.y < b.y;
    });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    const std::size_t n = pts.size();
    if (n < 3) throw std::runtime_error("degenerate hull");

    // Andrew's monotone chain; strict turns only, so collinear points on
    // edges never become vertices.
    std::vector<Point> hull(2 * n);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) { // lower
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    for (std::size_t i = n - 1, t = k + 1; i-- > 0;) { // upper
        while (k >= t && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    if (hull.size() < 3) throw std::runtime_error("degenerate hull");
    return hull;
}

bool point_in_hull(Point p, std::span<const Point> hull) {
    const std::size_t n = hull.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (cross(hull[i], hull[(i + 1) % n], p) < 0) return false;
    }
    return true;
}

double tour_length(std::span<const int> order, const CityDataset& ds) {
    const int n = ds.size();
    if (static_cast<int>(order.size()) != n)
        throw std::invalid_argument("not a permutation");
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    for (int idx : order) {
        if (idx < 0 || idx >= n || seen[static_cast<std::size_t>(idx)])
            throw std::invalid_argument("not a permutation");
        seen[static_cast<std::size_t>(idx)] = 1;
    }
    double len = 0.0;
    for (int i = 0; i < n; ++i) {
        len += euclidean(ds.point(order[static_cast<std::size_t>(i)]),
                         ds.point(order[static_cast<std::size_t>((i + 1) % n)]));
    }
    return len;
}

CityDataset load_dataset(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open dataset: " + path);
    int n = 0;
    in >> n;
    if (!in || n <= 0) throw std::runtime_error("bad dataset header: " + path);
    CityDataset ds;
    for (int i = 0; i < n; ++i) {
        City c;
        in >> c.label >> c.x >> c.y;
        if (!in) throw std::runtime_error("truncated dataset: " + path);
        ds.cities.push_back(std::move(c));
    }
    return ds;
}

void save_dataset(const CityDataset& ds, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write dataset: " + path);
    out << ds.size() << "\n";
    for (const City& c : ds.cities) {
        out << c.label << " " << c.x << " " << c.y << "\n";
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

} // namespace blobtsp::geom
