#pragma once

#include <Eigen/Core>

#include <span>
#include <utility>
#include <vector>

namespace trey::geom {

using Point = Eigen::Vector2d;

// Cross-product collinearity tolerance; fixed so hull output is deterministic
// on 25 Hz tracking floats.
inline constexpr double kCollinearEps = 1e-9;

struct Polygon {
    std::vector<Point> vertices;
};

inline double cross(const Point& o, const Point& a, const Point& b) {
    return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
}

// Minimal convex polygon containing all points, by monotone chain. Vertices
// come back counter-clockwise with no three consecutive collinear; degenerate
// inputs yield a single point or a segment. Throws on empty input.
Polygon convex_hull(std::span<const Point> points);

// Shoelace area, >= 0; zero for point/segment polygons.
double polygon_area(const Polygon& poly);

// Sum of consecutive segment lengths; a single point has length zero.
// Throws on empty input.
double path_length(std::span<const Point> points);

// Index and distance of the opponent closest to target; ties go to the
// lowest index. Throws on empty input.
std::pair<int, double> nearest_opponent(const Point& target, std::span<const Point> opponents);

}  // namespace trey::geom
