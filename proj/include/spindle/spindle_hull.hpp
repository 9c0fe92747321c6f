#pragma once

#include <optional>
#include <span>
#include <vector>

#include "spindle/geom.hpp"

namespace spindle {

// C-spindles, C-hulls and C-n-gons as finite exact intersections of
// translates of the unit disk. A hull comes back as nullopt when no translate
// of C contains the input (the "[p,q]_C = R^2" case); that is a distinguished
// value here, never a polygon.

// All centers x with points within x+C, i.e. the intersection of the
// translates p_i + C (C is o-symmetric, so x+C contains p iff x lies in p+C).
template <class T>
std::optional<ConvexRegion<T>> feasible_centers(std::span<const Point2<T>> points, const UnitDisk<T>& C) {
    if (points.empty()) throw std::invalid_argument("feasible_centers: no points");
    std::optional<ConvexRegion<T>> cur = C.region().translate(points[0]);
    for (std::size_t i = 1; i < points.size() && cur; ++i)
        cur = clip_by_region(std::move(cur), C.region().translate(points[i]));
    return cur;
}

// Intersection of the translates v+C over the vertices of the feasible-center
// region. By o-symmetry this equals the intersection over the whole feasible
// set, which is the C-hull.
template <class T>
std::optional<ConvexRegion<T>> c_hull(std::span<const Point2<T>> points, const UnitDisk<T>& C) {
    auto feas = feasible_centers(points, C);
    if (!feas) return std::nullopt;
    std::optional<ConvexRegion<T>> cur = C.region().translate(feas->vertex(0));
    for (std::size_t i = 1; i < feas->size() && cur; ++i)
        cur = clip_by_region(std::move(cur), C.region().translate(feas->vertex(i)));
    if (!cur) throw std::logic_error("c_hull: translate intersection vanished");
    return cur;
}

template <class T>
std::optional<ConvexRegion<T>> c_hull(const std::vector<Point2<T>>& points, const UnitDisk<T>& C) {
    return c_hull(std::span<const Point2<T>>(points.data(), points.size()), C);
}

// Support point; when the support set is an edge, the lexicographically
// smallest of its vertices (deterministic two-translate representation).
template <class T>
Point2<T> pick_extreme(const ConvexRegion<T>& F, const Vec2<T>& u) {
    T best = F.support_value(u);
    std::optional<Point2<T>> pick;
    for (const auto& v : F.vertices()) {
        bool on;
        T d = best - dot(v, u);
        if constexpr (std::is_same_v<T, double>)
            on = std::abs(d) <= 1e-12 * (std::abs(best) + 1.0);
        else
            on = sgn(d) == 0;
        if (!on) continue;
        if (!pick || sign_of(v.x - pick->x) < 0 ||
            (sign_of(v.x - pick->x) == 0 && sign_of(v.y - pick->y) < 0))
            pick = v;
    }
    return *pick;
}

template <class T>
struct SpindleResult {
    std::optional<ConvexRegion<T>> region;  // nullopt: no containing translate
    // Extreme feasible centers in directions +-(q-p) rotated by 90 degrees,
    // present when 0 < ||q-p||_C < 2. The intersection of these two
    // translates equals the spindle.
    std::optional<std::pair<Point2<T>, Point2<T>>> centers;
};

template <class T>
SpindleResult<T> c_spindle(const Point2<T>& p, const Point2<T>& q, const UnitDisk<T>& C) {
    SpindleResult<T> res;
    std::vector<Point2<T>> pts{p, q};
    res.region = c_hull(std::span<const Point2<T>>(pts.data(), pts.size()), C);
    if (!res.region) return res;
    if (!(p == q)) {
        T g = C.gauge(q - p);
        bool strict_inside;
        if constexpr (std::is_same_v<T, double>)
            strict_inside = g < 2.0 - 1e-12;
        else
            strict_inside = g < 2;
        if (strict_inside) {
            auto feas = feasible_centers(std::span<const Point2<T>>(pts.data(), pts.size()), C);
            Vec2<T> u = perp(q - p);
            res.centers = {pick_extreme(*feas, u), pick_extreme(*feas, Vec2<T>{-u.x, -u.y})};
        }
    }
    return res;
}

// Max pairwise gauge distance over a point set.
template <class T>
T c_diameter(std::span<const Point2<T>> points, const UnitDisk<T>& C) {
    if (points.empty()) throw std::invalid_argument("c_diameter: no points");
    T best(0);
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = i + 1; j < points.size(); ++j) {
            T g = C.gauge(points[j] - points[i]);
            if (sign_of(g - best) > 0) best = g;
        }
    return best;
}

template <class T>
T c_diameter(const ConvexRegion<T>& K, const UnitDisk<T>& C) {
    return c_diameter(std::span<const Point2<T>>(K.vertices().data(), K.size()), C);
}

// K is C-convex iff it equals the C-hull of its vertices. Exact equality on
// the rational backend; Hausdorff tolerance on doubles.
template <class T>
bool is_c_convex(const ConvexRegion<T>& K, const UnitDisk<T>& C, double tol = 1e-7) {
    auto hull = c_hull(std::span<const Point2<T>>(K.vertices().data(), K.size()), C);
    if (!hull) return false;
    if constexpr (std::is_same_v<T, double>)
        return hausdorff(K, *hull) <= tol;
    else
        return K.same_region(*hull);
}

// A C-n-gon: n translate centers plus the realized intersection.
template <class T>
struct CnGon {
    std::vector<Point2<T>> centers;
    ConvexRegion<T> realized;
    const UnitDisk<T>* disk = nullptr;

    bool coherent() const {
        std::optional<ConvexRegion<T>> r = disk->region().translate(centers.at(0));
        for (std::size_t i = 1; i < centers.size() && r; ++i)
            r = clip_by_region(std::move(r), disk->region().translate(centers[i]));
        return r && r->same_region(realized);
    }
};

template <class T>
std::optional<CnGon<T>> make_cngon(std::vector<Point2<T>> centers, const UnitDisk<T>& C) {
    if (centers.empty()) throw std::invalid_argument("make_cngon: no centers");
    std::optional<ConvexRegion<T>> r = C.region().translate(centers[0]);
    for (std::size_t i = 1; i < centers.size() && r; ++i)
        r = clip_by_region(std::move(r), C.region().translate(centers[i]));
    if (!r) return std::nullopt;
    return CnGon<T>{std::move(centers), std::move(*r), &C};
}

}  // namespace spindle
