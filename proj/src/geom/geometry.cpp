#include "trey/geom/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace trey::geom {

Polygon convex_hull(std::span<const Point> points) {
    if (points.empty()) throw std::invalid_argument("convex_hull: empty input");

    std::vector<Point> pts(points.begin(), points.end());
    std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) {
        return a.x() != b.x() ? a.x() < b.x() : a.y() < b.y();
    });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](const Point& a, const Point& b) {
                              return a.x() == b.x() && a.y() == b.y();
                          }),
              pts.end());

    if (pts.size() == 1) return Polygon{{pts[0]}};

    std::vector<Point> hull;
    hull.reserve(2 * pts.size());

    // Lower chain then upper chain; popping on cross <= eps also removes
    // collinear interior points.
    for (const Point& p : pts) {
        while (hull.size() >= 2 &&
               cross(hull[hull.size() - 2], hull[hull.size() - 1], p) <= kCollinearEps)
            hull.pop_back();
        hull.push_back(p);
    }
    const std::size_t lower = hull.size() + 1;
    for (auto it = pts.rbegin() + 1; it != pts.rend(); ++it) {
        while (hull.size() >= lower &&
               cross(hull[hull.size() - 2], hull[hull.size() - 1], *it) <= kCollinearEps)
            hull.pop_back();
        hull.push_back(*it);
    }
    hull.pop_back();  // closing point duplicates the first

    return Polygon{std::move(hull)};
}

double polygon_area(const Polygon& poly) {
    const auto& v = poly.vertices;
    if (v.size() < 3) return 0.0;
    double twice = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const Point& a = v[i];
        const Point& b = v[(i + 1) % v.size()];
        twice += a.x() * b.y() - b.x() * a.y();
    }
    return std::abs(twice) * 0.5;
}

double path_length(std::span<const Point> points) {
    if (points.empty()) throw std::invalid_argument("path_length: empty input");
    double total = 0.0;
    for (std::size_t i = 1; i < points.size(); ++i)
        total += (points[i] - points[i - 1]).norm();
    return total;
}

std::pair<int, double> nearest_opponent(const Point& target, std::span<const Point> opponents) {
    if (opponents.empty()) throw std::invalid_argument("nearest_opponent: empty input");
    int best = 0;
    double best_d2 = (opponents[0] - target).squaredNorm();
    for (std::size_t i = 1; i < opponents.size(); ++i) {
        double d2 = (opponents[i] - target).squaredNorm();
        if (d2 < best_d2) {
            best_d2 = d2;
            best = static_cast<int>(i);
        }
    }
    return {best, std::sqrt(best_d2)};
}

}  // namespace trey::geom
