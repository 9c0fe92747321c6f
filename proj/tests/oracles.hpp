#pragma once

// Test-only oracles, independent of the library implementation paths they
// check: a vertex-collection polygon intersector, a ray-edge gauge solver and
// an exhaustive tiling enumerator.

#include <optional>
#include <random>
#include <vector>

#include "spindle/geom.hpp"
#include "spindle/tiling.hpp"

namespace oracle {

using spindle::ArcTable;
using spindle::ConvexRegion;
using spindle::Point2;
using spindle::Rat;
using spindle::Tiling;
using spindle::UnitDisk;
using spindle::Vec2;

// Intersection via candidate-vertex collection + convex hull; different
// algorithm than the library's half-plane clipper.
template <class T>
std::optional<ConvexRegion<T>> intersect_by_points(const ConvexRegion<T>& P, const ConvexRegion<T>& Q) {
    std::vector<Point2<T>> cand;
    for (const auto& v : P.vertices())
        if (Q.contains(v)) cand.push_back(v);
    for (const auto& v : Q.vertices())
        if (P.contains(v)) cand.push_back(v);
    auto edges = [](const ConvexRegion<T>& R) {
        std::vector<std::pair<Point2<T>, Point2<T>>> es;
        if (R.size() < 2) return es;
        std::size_t cnt = R.is_segment() ? 1 : R.size();
        for (std::size_t i = 0; i < cnt; ++i) es.push_back({R.vertex(i), R.vertex(i + 1)});
        return es;
    };
    for (const auto& [a, b] : edges(P))
        for (const auto& [c, d] : edges(Q)) {
            Vec2<T> r = b - a, s = d - c;
            T den = cross(r, s);
            if (spindle::sign_of(den) == 0) continue;
            T t = cross(c - a, s) / den;
            T u = cross(c - a, r) / den;
            if (spindle::sign_of(t) < 0 || spindle::sign_of(T(1) - t) < 0) continue;
            if (spindle::sign_of(u) < 0 || spindle::sign_of(T(1) - u) < 0) continue;
            cand.push_back({a.x + r.x * t, a.y + r.y * t});
        }
    if (cand.empty()) return std::nullopt;
    return ConvexRegion<T>::hull_of(cand);
}

// Gauge by walking every edge of C and solving the ray-edge crossing, keeping
// the smallest positive scale that lands on the boundary.
template <class T>
T gauge_by_ray(const UnitDisk<T>& C, const Vec2<T>& v) {
    if (spindle::sign_of(v.x) == 0 && spindle::sign_of(v.y) == 0) return T(0);
    std::optional<T> best;
    std::size_t n = C.size();
    for (std::size_t i = 0; i < n; ++i) {
        Point2<T> a = C.vertex(i), b = C.vertex(i + 1);
        // Solve s*v = a + u*(b-a), 0 <= u <= 1, s > 0; gauge = 1/s.
        Vec2<T> e = b - a;
        T den = cross(v, e);
        if (spindle::sign_of(den) == 0) continue;
        T s = cross(a, e) / den;
        if (spindle::sign_of(s) <= 0) continue;
        T u = cross(a, v) / den;
        if (spindle::sign_of(u) < 0 || spindle::sign_of(T(1) - u) < 0) continue;
        T g = T(1) / s;
        if (!best || spindle::sign_of(g - *best) > 0) best = g;
    }
    return best ? *best : T(0);
}

// Exhaustive optimum over n-subsets in lexicographic order, right-fold
// values, strict improvement (keeps the lex-smallest optimal witness).
inline std::optional<spindle::TilingOpt> brute_force_tiling(const ArcTable& table, int n,
                                                            spindle::Sense sense) {
    int m = table.m();
    std::vector<int> idx(n);
    for (int i = 0; i < n; ++i) idx[i] = i;
    std::optional<spindle::TilingOpt> best;
    while (true) {
        Tiling t{idx};
        double v = tiling_value(t, table);
        if (std::isfinite(v)) {
            bool take = !best;
            if (best) take = sense == spindle::Sense::Max ? v > best->value : v < best->value;
            if (take) best = spindle::TilingOpt{t, v};
        }
        int i = n - 1;
        while (i >= 0 && idx[i] == m - n + i) --i;
        if (i < 0) break;
        ++idx[i];
        for (int j = i + 1; j < n; ++j) idx[j] = idx[j - 1] + 1;
    }
    return best;
}

// Deterministic random helpers.

inline Rat random_rat(std::mt19937_64& rng, int denom_max = 8, int num_max = 12) {
    std::uniform_int_distribution<int> num(-num_max, num_max);
    std::uniform_int_distribution<int> den(1, denom_max);
    return spindle::rat(num(rng), den(rng));
}

// Random o-symmetric convex polygon with rational vertices and origin inside.
inline UnitDisk<Rat> random_disk(std::mt19937_64& rng, int points = 5) {
    while (true) {
        std::vector<Point2<Rat>> pts;
        for (int i = 0; i < points; ++i) {
            Rat x = random_rat(rng), y = random_rat(rng);
            if (spindle::sign_of(x) == 0 && spindle::sign_of(y) == 0) continue;
            pts.push_back({x, y});
            pts.push_back({-x, -y});
        }
        if (pts.size() < 6) continue;
        auto hull = ConvexRegion<Rat>::hull_of(pts);
        if (!hull.is_polygon()) continue;
        try {
            return UnitDisk<Rat>(hull);
        } catch (const std::invalid_argument&) {
            continue;
        }
    }
}

inline ConvexRegion<Rat> random_convex_polygon(std::mt19937_64& rng, int points = 6) {
    while (true) {
        std::vector<Point2<Rat>> pts;
        for (int i = 0; i < points; ++i) pts.push_back({random_rat(rng), random_rat(rng)});
        auto hull = ConvexRegion<Rat>::hull_of(pts);
        if (hull.is_polygon()) return hull;
    }
}

}  // namespace oracle
