#include "spindle/geom.hpp"

#include <limits>

namespace spindle {

static double point_segment_dist(const Vec2d& p, const Vec2d& a, const Vec2d& b) {
    Vec2d ab = b - a;
    double len2 = dot(ab, ab);
    if (len2 == 0.0) {
        Vec2d d = p - a;
        return std::sqrt(dot(d, d));
    }
    double t = dot(p - a, ab) / len2;
    t = std::clamp(t, 0.0, 1.0);
    Vec2d q = {a.x + ab.x * t, a.y + ab.y * t};
    Vec2d d = p - q;
    return std::sqrt(dot(d, d));
}

double distance_to_region(const ConvexRegion<double>& R, const Vec2d& p) {
    if (R.is_point()) {
        Vec2d d = p - R.vertex(0);
        return std::sqrt(dot(d, d));
    }
    if (!R.degenerate() && R.contains(p)) return 0.0;
    double best = std::numeric_limits<double>::infinity();
    std::size_t n = R.size();
    std::size_t edges = R.is_segment() ? 1 : n;
    for (std::size_t i = 0; i < edges; ++i)
        best = std::min(best, point_segment_dist(p, R.vertex(i), R.vertex(i + 1)));
    return best;
}

double hausdorff(const ConvexRegion<double>& A, const ConvexRegion<double>& B) {
    double h = 0.0;
    for (const auto& p : A.vertices()) h = std::max(h, distance_to_region(B, p));
    for (const auto& p : B.vertices()) h = std::max(h, distance_to_region(A, p));
    return h;
}

}  // namespace spindle
