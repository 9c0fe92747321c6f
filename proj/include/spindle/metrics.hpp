#pragma once

#include <stdexcept>
#include <vector>

#include "spindle/geom.hpp"
#include "spindle/spindle_hull.hpp"

namespace spindle {

// C-lengths, C-perimeters and the arc-distance rho_C.

template <class T>
struct Polyline {
    std::vector<Point2<T>> points;
    bool closed = false;
};

template <class T>
T c_length(const Polyline<T>& path, const UnitDisk<T>& C) {
    if (path.points.size() < 2) return T(0);
    T s(0);
    for (std::size_t i = 0; i + 1 < path.points.size(); ++i)
        s += C.gauge(path.points[i + 1] - path.points[i]);
    if (path.closed) s += C.gauge(path.points.front() - path.points.back());
    return s;
}

// C-perimeter of a convex region. Degenerate conventions: a segment's
// boundary is traversed both ways (2x gauge), a point has perimeter 0; these
// make rho_C = perim/2 hold verbatim in the segment case.
template <class T>
T perim_c(const ConvexRegion<T>& K, const UnitDisk<T>& C) {
    if (K.is_point()) return T(0);
    if (K.is_segment()) return T(2) * C.gauge(K.vertex(1) - K.vertex(0));
    T s(0);
    for (std::size_t i = 0; i < K.size(); ++i) s += C.gauge(K.vertex(i + 1) - K.vertex(i));
    return s;
}

// Arc-distance rho_C(x,y): half the C-perimeter of the spindle [x,y]_C
// (which is gauge(y-x) when the spindle degenerates to the segment).
// Requires ||x-y||_C <= 2.
template <class T>
T arc_distance(const Point2<T>& x, const Point2<T>& y, const UnitDisk<T>& C) {
    if (x == y) return T(0);
    auto sp = c_spindle(x, y, C);
    if (!sp.region) throw std::domain_error("arc_distance: ||x-y||_C > 2, no arc exists");
    return perim_c(*sp.region, C) / T(2);
}

}  // namespace spindle
