#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <type_traits>
#include <utility>
#include <vector>

#include "spindle/rational.hpp"

namespace spindle {

// ---------------------------------------------------------------------------
// Scalar policy. Geometry is templated over the scalar: Rat for the exact
// certification paths (counterexample module), double for the sampling/DP
// paths (dowker module). Predicates on doubles use a relative epsilon of
// 1e-12 on normalized cross products; the exact backend uses the sign of the
// rational determinant.
// ---------------------------------------------------------------------------

template <class T>
struct Vec2 {
    T x{}, y{};

    Vec2() = default;
    Vec2(T xx, T yy) : x(std::move(xx)), y(std::move(yy)) {}

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator-() const { return {-x, -y}; }
    Vec2 operator*(const T& s) const { return {x * s, y * s}; }
    bool operator==(const Vec2& o) const { return x == o.x && y == o.y; }
    bool operator!=(const Vec2& o) const { return !(*this == o); }
};

template <class T>
using Point2 = Vec2<T>;

template <class T>
inline T dot(const Vec2<T>& a, const Vec2<T>& b) {
    return a.x * b.x + a.y * b.y;
}

template <class T>
inline T cross(const Vec2<T>& a, const Vec2<T>& b) {
    return a.x * b.y - a.y * b.x;
}

// Rotate by +90 degrees (CCW).
template <class T>
inline Vec2<T> perp(const Vec2<T>& v) {
    return {-v.y, v.x};
}

inline int sign_of(const Rat& v) { return sgn(v); }
inline int sign_of(double v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }

// Orientation of the triple (a,b,c): sign of cross(b-a, c-a).
inline int orient_sign(const Rat& c, const Rat&) { return sgn(c); }
inline int orient_sign(double c, double scale) {
    double eps = 1e-12 * scale;
    if (c > eps) return 1;
    if (c < -eps) return -1;
    return 0;
}

template <class T>
inline int orientation(const Point2<T>& a, const Point2<T>& b, const Point2<T>& c) {
    Vec2<T> u = b - a, v = c - a;
    T cr = cross(u, v);
    if constexpr (std::is_same_v<T, double>) {
        double scale = (std::abs(u.x) + std::abs(u.y)) * (std::abs(v.x) + std::abs(v.y));
        return orient_sign(cr, scale);
    } else {
        return sgn(cr);
    }
}

template <class T>
inline bool nearly_equal(const Point2<T>& a, const Point2<T>& b) {
    if constexpr (std::is_same_v<T, double>) {
        double scale = std::abs(a.x) + std::abs(a.y) + std::abs(b.x) + std::abs(b.y) + 1.0;
        return std::abs(a.x - b.x) + std::abs(a.y - b.y) <= 1e-12 * scale;
    } else {
        return a == b;
    }
}

using Vec2d = Vec2<double>;
using Vec2q = Vec2<Rat>;

inline Vec2d to_double(const Vec2q& v) { return {rat_to_double(v.x), rat_to_double(v.y)}; }

// ---------------------------------------------------------------------------
// ConvexRegion: a convex set given by its CCW vertex ring. Degenerate regions
// (single point, segment) are first-class values with 1 or 2 vertices;
// spindles can legitimately be segments.
// ---------------------------------------------------------------------------

template <class T>
class ConvexRegion {
  public:
    ConvexRegion() = default;

    // Vertices must already be strictly convex CCW (validated).
    static ConvexRegion from_ccw(std::vector<Point2<T>> vs) {
        ConvexRegion r;
        r.vs_ = std::move(vs);
        r.validate();
        return r;
    }

    // Canonicalizes a convex CCW ring that may carry duplicate or collinear
    // vertices (e.g. raw clipper output). Collinear input collapses to a
    // segment or point.
    static ConvexRegion from_ccw_loose(const std::vector<Point2<T>>& vs) {
        ConvexRegion r;
        r.vs_ = canonicalize(vs);
        r.validate();
        return r;
    }

    static ConvexRegion point(Point2<T> p) { return from_ccw({std::move(p)}); }
    static ConvexRegion segment(Point2<T> a, Point2<T> b) { return from_ccw({std::move(a), std::move(b)}); }

    // Convex hull of an arbitrary point set (monotone chain).
    static ConvexRegion hull_of(std::vector<Point2<T>> pts);

    std::size_t size() const { return vs_.size(); }
    const Point2<T>& vertex(std::size_t i) const { return vs_[i % vs_.size()]; }
    const std::vector<Point2<T>>& vertices() const { return vs_; }

    bool is_point() const { return vs_.size() == 1; }
    bool is_segment() const { return vs_.size() == 2; }
    bool is_polygon() const { return vs_.size() >= 3; }
    bool degenerate() const { return vs_.size() < 3; }

    T area() const {
        if (degenerate()) return T(0);
        T s(0);
        for (std::size_t i = 0; i < vs_.size(); ++i) {
            const auto& p = vs_[i];
            const auto& q = vs_[(i + 1) % vs_.size()];
            s += cross(p, q);
        }
        return s / T(2);
    }

    bool contains(const Point2<T>& p) const {
        if (is_point()) return nearly_equal(vs_[0], p);
        if (is_segment()) {
            if (orientation(vs_[0], vs_[1], p) != 0) return false;
            T d = dot(p - vs_[0], vs_[1] - vs_[0]);
            return sign_of(d) >= 0 && sign_of(dot(vs_[1] - vs_[0], vs_[1] - vs_[0]) - d) >= 0;
        }
        for (std::size_t i = 0; i < vs_.size(); ++i)
            if (orientation(vs_[i], vs_[(i + 1) % vs_.size()], p) < 0) return false;
        return true;
    }

    // A vertex maximizing <.,u>; ties broken by smallest vertex index.
    const Point2<T>& support_point(const Vec2<T>& u) const {
        std::size_t best = 0;
        T best_val = dot(vs_[0], u);
        for (std::size_t i = 1; i < vs_.size(); ++i) {
            T v = dot(vs_[i], u);
            if (sign_of(v - best_val) > 0) {
                best = i;
                best_val = v;
            }
        }
        return vs_[best];
    }

    T support_value(const Vec2<T>& u) const { return dot(support_point(u), u); }

    ConvexRegion translate(const Vec2<T>& v) const {
        std::vector<Point2<T>> out;
        out.reserve(vs_.size());
        for (const auto& p : vs_) out.push_back(p + v);
        ConvexRegion r;
        r.vs_ = std::move(out);
        return r;
    }

    // Point reflection through the origin (a rotation by pi, so still CCW).
    ConvexRegion negate() const {
        std::vector<Point2<T>> out;
        out.reserve(vs_.size());
        for (const auto& p : vs_) out.push_back(-p);
        ConvexRegion r;
        r.vs_ = std::move(out);
        return r;
    }

    // Diagonal linear map (x,y) -> (sx*x, sy*y); sx,sy > 0.
    ConvexRegion scale(const T& sx, const T& sy) const {
        std::vector<Point2<T>> out;
        out.reserve(vs_.size());
        for (const auto& p : vs_) out.push_back({p.x * sx, p.y * sy});
        ConvexRegion r;
        r.vs_ = std::move(out);
        return r;
    }

    // Same vertex ring up to rotation.
    bool same_region(const ConvexRegion& o) const {
        if (vs_.size() != o.vs_.size()) return false;
        if (vs_.empty()) return true;
        for (std::size_t off = 0; off < o.vs_.size(); ++off) {
            bool ok = true;
            for (std::size_t i = 0; i < vs_.size() && ok; ++i)
                ok = nearly_equal(vs_[i], o.vs_[(i + off) % o.vs_.size()]);
            if (ok) return true;
        }
        return false;
    }

  private:
    std::vector<Point2<T>> vs_;

    void validate() const {
        if (vs_.empty()) throw std::invalid_argument("ConvexRegion: empty vertex list");
        for (std::size_t i = 0; i < vs_.size(); ++i)
            if (vs_.size() > 1 && nearly_equal(vs_[i], vs_[(i + 1) % vs_.size()]))
                throw std::invalid_argument("ConvexRegion: duplicate consecutive vertices");
        if (vs_.size() >= 3) {
            for (std::size_t i = 0; i < vs_.size(); ++i)
                if (orientation(vs_[i], vs_[(i + 1) % vs_.size()], vs_[(i + 2) % vs_.size()]) <= 0)
                    throw std::invalid_argument("ConvexRegion: not strictly convex CCW");
        }
    }

    static std::vector<Point2<T>> canonicalize(const std::vector<Point2<T>>& in) {
        // Drop consecutive duplicates.
        std::vector<Point2<T>> ring;
        for (const auto& p : in) {
            if (ring.empty() || !nearly_equal(ring.back(), p)) ring.push_back(p);
        }
        while (ring.size() > 1 && nearly_equal(ring.front(), ring.back())) ring.pop_back();
        if (ring.size() <= 2) return collapse(ring);

        // Drop collinear middles.
        std::vector<Point2<T>> out;
        std::size_t n = ring.size();
        for (std::size_t i = 0; i < n; ++i) {
            const auto& prev = ring[(i + n - 1) % n];
            const auto& cur = ring[i];
            const auto& next = ring[(i + 1) % n];
            if (orientation(prev, cur, next) != 0) out.push_back(cur);
        }
        if (out.size() <= 2) return collapse(ring);
        return out;
    }

    // All points collinear (or fewer than 3 distinct): keep the extremes.
    static std::vector<Point2<T>> collapse(const std::vector<Point2<T>>& pts) {
        if (pts.empty()) return {};
        if (pts.size() == 1) return pts;
        std::size_t a = 0, b = 0;
        T best(-1);
        for (std::size_t i = 0; i < pts.size(); ++i)
            for (std::size_t j = i + 1; j < pts.size(); ++j) {
                Vec2<T> d = pts[i] - pts[j];
                T l = dot(d, d);
                if (sign_of(l - best) > 0) {
                    best = l;
                    a = i;
                    b = j;
                }
            }
        if (nearly_equal(pts[a], pts[b])) return {pts[a]};
        return {pts[a], pts[b]};
    }
};

template <class T>
ConvexRegion<T> ConvexRegion<T>::hull_of(std::vector<Point2<T>> pts) {
    if (pts.empty()) throw std::invalid_argument("hull_of: empty");
    std::sort(pts.begin(), pts.end(), [](const Point2<T>& a, const Point2<T>& b) {
        int sx = sign_of(a.x - b.x);
        if (sx != 0) return sx < 0;
        return sign_of(a.y - b.y) < 0;
    });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](const Point2<T>& a, const Point2<T>& b) { return nearly_equal(a, b); }),
              pts.end());
    if (pts.size() <= 2) {
        ConvexRegion<T> r;
        r.vs_ = pts;
        return r;
    }
    std::vector<Point2<T>> h(2 * pts.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        while (k >= 2 && orientation(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
        h[k++] = pts[i];
    }
    std::size_t lower = k + 1;
    for (std::size_t i = pts.size() - 1; i-- > 0;) {
        while (k >= lower && orientation(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
        h[k++] = pts[i];
    }
    h.resize(k - 1);
    return from_ccw_loose(h);
}

// ---------------------------------------------------------------------------
// Half-plane clipping. clip_halfplane keeps {x : n.x <= c}; intersect chains
// clips of Q's edges over P. Empty intersections are values (nullopt), not
// errors; point/segment intersections come back as degenerate regions.
// ---------------------------------------------------------------------------

inline int side_sign(const Rat& d, const Vec2<Rat>&, const Rat&) { return sgn(d); }
inline int side_sign(double d, const Vec2<double>& n, double c) {
    double scale = std::abs(n.x) + std::abs(n.y) + std::abs(c) + 1.0;
    if (d > 1e-12 * scale) return 1;
    if (d < -1e-12 * scale) return -1;
    return 0;
}

template <class T>
std::optional<ConvexRegion<T>> clip_halfplane(const ConvexRegion<T>& P, const Vec2<T>& n, const T& c) {
    const auto& vs = P.vertices();
    if (vs.size() == 1) {
        if (side_sign(c - dot(n, vs[0]), n, c) >= 0) return P;
        return std::nullopt;
    }
    if (vs.size() == 2) {
        const Point2<T>&a = vs[0], &b = vs[1];
        T da = c - dot(n, a), db = c - dot(n, b);
        int sa = side_sign(da, n, c), sb = side_sign(db, n, c);
        if (sa >= 0 && sb >= 0) return P;
        if (sa < 0 && sb < 0) return std::nullopt;
        T t = da / (da - db);
        Point2<T> x{a.x + (b.x - a.x) * t, a.y + (b.y - a.y) * t};
        const Point2<T>& keep = sa >= 0 ? a : b;
        if (nearly_equal(keep, x)) return ConvexRegion<T>::point(keep);
        return ConvexRegion<T>::segment(keep, x);
    }
    std::size_t m = vs.size();
    std::vector<Point2<T>> out;
    out.reserve(m + 1);
    for (std::size_t i = 0; i < m; ++i) {
        const Point2<T>& a = vs[i];
        const Point2<T>& b = vs[(i + 1) % m];
        T da = c - dot(n, a);
        T db = c - dot(n, b);
        int sa = side_sign(da, n, c), sb = side_sign(db, n, c);
        if (sa >= 0) out.push_back(a);
        if ((sa > 0 && sb < 0) || (sa < 0 && sb > 0)) {
            T t = da / (da - db);
            out.push_back({a.x + (b.x - a.x) * t, a.y + (b.y - a.y) * t});
        }
    }
    if (out.empty()) return std::nullopt;
    return ConvexRegion<T>::from_ccw_loose(out);
}

template <class T>
std::optional<ConvexRegion<T>> clip_by_region(std::optional<ConvexRegion<T>> cur, const ConvexRegion<T>& Q) {
    if (!cur) return std::nullopt;
    if (Q.is_point()) {
        return cur->contains(Q.vertex(0)) ? std::optional<ConvexRegion<T>>(ConvexRegion<T>::point(Q.vertex(0)))
                                          : std::nullopt;
    }
    if (Q.is_segment()) {
        Vec2<T> e = Q.vertex(1) - Q.vertex(0);
        Vec2<T> nrm{e.y, T(-e.x)};
        Vec2<T> nrm2{T(-nrm.x), T(-nrm.y)};
        Vec2<T> eneg{T(-e.x), T(-e.y)};
        cur = clip_halfplane(*cur, nrm, dot(nrm, Q.vertex(0)));
        if (cur) cur = clip_halfplane(*cur, nrm2, dot(nrm2, Q.vertex(0)));
        if (cur) cur = clip_halfplane(*cur, eneg, dot(eneg, Q.vertex(0)));
        if (cur) cur = clip_halfplane(*cur, e, dot(e, Q.vertex(1)));
        return cur;
    }
    for (std::size_t i = 0; i < Q.size() && cur; ++i) {
        const Point2<T>& a = Q.vertex(i);
        const Point2<T>& b = Q.vertex(i + 1);
        Vec2<T> e = b - a;
        Vec2<T> nrm = {e.y, -e.x};  // outward for CCW: keep n.x <= c
        cur = clip_halfplane(*cur, nrm, dot(nrm, a));
    }
    return cur;
}

template <class T>
std::optional<ConvexRegion<T>> intersect(const ConvexRegion<T>& P, const ConvexRegion<T>& Q) {
    if (P.degenerate() && !Q.degenerate()) return clip_by_region(std::optional<ConvexRegion<T>>(P), Q);
    return clip_by_region(std::optional<ConvexRegion<T>>(Q), P);
}

// ---------------------------------------------------------------------------
// UnitDisk: an o-symmetric convex polygon C acting as the norm's unit disk.
// Keeps the H-representation (outward edge normals and offsets) for gauge
// queries: ||v||_C = max_i <n_i, v> / c_i.
// ---------------------------------------------------------------------------

template <class T>
class UnitDisk {
  public:
    UnitDisk() = default;

    explicit UnitDisk(ConvexRegion<T> region) : region_(std::move(region)) {
        if (!region_.is_polygon()) throw std::invalid_argument("UnitDisk: needs a nondegenerate polygon");
        if (!origin_symmetric(region_)) throw std::invalid_argument("UnitDisk: not origin-symmetric");
        std::size_t n = region_.size();
        normals_.reserve(n);
        offsets_.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            Vec2<T> e = region_.vertex(i + 1) - region_.vertex(i);
            Vec2<T> nrm = {e.y, -e.x};
            T c = dot(nrm, region_.vertex(i));
            if (sign_of(c) <= 0) throw std::invalid_argument("UnitDisk: origin not strictly interior");
            normals_.push_back(nrm);
            offsets_.push_back(c);
        }
    }

    const ConvexRegion<T>& region() const { return region_; }
    std::size_t size() const { return region_.size(); }
    const Point2<T>& vertex(std::size_t i) const { return region_.vertex(i); }
    const std::vector<Vec2<T>>& edge_normals() const { return normals_; }
    const std::vector<T>& edge_offsets() const { return offsets_; }

    // Minkowski functional of C; gauge(0) = 0.
    T gauge(const Vec2<T>& v) const {
        T best(0);
        for (std::size_t i = 0; i < normals_.size(); ++i) {
            T g = dot(normals_[i], v) / offsets_[i];
            if (sign_of(g - best) > 0) best = g;
        }
        return best;
    }

    const Point2<T>& support_point(const Vec2<T>& u) const { return region_.support_point(u); }

    UnitDisk scaled(const T& s) const {
        ConvexRegion<T> r = region_.scale(s, s);
        return UnitDisk(std::move(r));
    }

    UnitDisk mapped(const T& sx, const T& sy) const { return UnitDisk(region_.scale(sx, sy)); }

    static bool origin_symmetric(const ConvexRegion<T>& r) {
        return r.same_region(r.negate());
    }

  private:
    ConvexRegion<T> region_;
    std::vector<Vec2<T>> normals_;
    std::vector<T> offsets_;
};

// Regular n-gon with vertex 0 at angle `phase`, circumradius `radius`.
inline ConvexRegion<double> regular_polygon(int n, double radius = 1.0, double phase = 0.0) {
    std::vector<Point2<double>> vs;
    vs.reserve(n);
    for (int i = 0; i < n; ++i) {
        double a = phase + 2.0 * M_PI * i / n;
        vs.push_back({radius * std::cos(a), radius * std::sin(a)});
    }
    return ConvexRegion<double>::from_ccw(std::move(vs));
}

// Euclidean distance from a point to a convex region (0 if inside).
double distance_to_region(const ConvexRegion<double>& R, const Vec2d& p);

// Symmetric Hausdorff distance between convex regions (Euclidean).
double hausdorff(const ConvexRegion<double>& A, const ConvexRegion<double>& B);

inline ConvexRegion<double> to_double(const ConvexRegion<Rat>& r) {
    std::vector<Point2<double>> vs;
    vs.reserve(r.size());
    for (const auto& p : r.vertices()) vs.push_back(to_double(p));
    return ConvexRegion<double>::from_ccw_loose(vs);
}

}  // namespace spindle
