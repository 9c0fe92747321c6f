#include "spindle/disk_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "spindle/metrics.hpp"
#include "spindle/spindle_hull.hpp"

namespace spindle {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

double norm_angle(double a) {
    a = std::fmod(a, kTwoPi);
    if (a < 0) a += kTwoPi;
    return a;
}

// Index of the last entry <= a in the cyclically ascending angle list.
int cyclic_floor(const std::vector<double>& angles, int start, double a) {
    int n = static_cast<int>(angles.size());
    double base = angles[start];
    double q = norm_angle(a - base);
    // unrolled values angles[(start+i) % n] - base are ascending in i
    int lo = 0, hi = n - 1;
    while (lo < hi) {
        int mid = (lo + hi + 1) / 2;
        double v = norm_angle(angles[(start + mid) % n] - base);
        if (v <= q)
            lo = mid;
        else
            hi = mid - 1;
    }
    return (start + lo) % n;
}

}  // namespace

PolyBoundary::PolyBoundary(ConvexRegion<double> poly, Vec2d star) : poly_(std::move(poly)), star_(star) {
    if (!poly_.is_polygon()) throw std::invalid_argument("PolyBoundary: degenerate polygon");
    n_ = static_cast<int>(poly_.size());
    theta_.resize(n_);
    dir_angle_.resize(n_);
    for (int i = 0; i < n_; ++i) {
        Vec2d e = poly_.vertex(i + 1) - poly_.vertex(i);
        theta_[i] = norm_angle(std::atan2(-e.x, e.y));
        Vec2d d = poly_.vertex(i) - star_;
        dir_angle_[i] = norm_angle(std::atan2(d.y, d.x));
    }
}

Vec2d PolyBoundary::point(const BPoint& bp) const {
    Vec2d a = poly_.vertex(bp.edge);
    Vec2d b = poly_.vertex(bp.edge + 1);
    return {a.x + (b.x - a.x) * bp.t, a.y + (b.y - a.y) * bp.t};
}

double PolyBoundary::vertex_cone_mid(int i) const {
    double lo = theta_[mod(i - 1)];
    double hi = theta_[mod(i)];
    double width = norm_angle(hi - lo);
    return norm_angle(lo + width / 2.0);
}

PolyBoundary::Support PolyBoundary::support(double phi, double eps) const {
    phi = norm_angle(phi);
    int e = cyclic_floor(theta_, 0, phi);
    double d0 = norm_angle(phi - theta_[e]);
    double d1 = norm_angle(theta_[mod(e + 1)] - phi);
    Support s;
    if (d0 <= eps || d0 >= kTwoPi - eps) {  // exactly the edge normal: midpoint convention
        s.on_edge = true;
        s.bp = {e, 0.5};
        s.point = point(s.bp);
        return s;
    }
    if (d1 <= eps) {
        s.on_edge = true;
        s.bp = {mod(e + 1), 0.5};
        s.point = point(s.bp);
        return s;
    }
    // phi strictly inside the cone of the vertex shared by edges e, e+1
    s.on_edge = false;
    s.bp = {mod(e + 1), 0.0};
    s.point = poly_.vertex(mod(e + 1));
    return s;
}

int PolyBoundary::sector_of(const Vec2d& d) const {
    double a = norm_angle(std::atan2(d.y, d.x));
    return cyclic_floor(dir_angle_, 0, a);
}

BPoint PolyBoundary::locate(const Vec2d& p) const {
    Vec2d d = p - star_;
    int e = sector_of(d);
    // project p onto edge e; tiny off-boundary deviations are tolerated
    Vec2d a = poly_.vertex(e), b = poly_.vertex(e + 1);
    Vec2d ab = b - a;
    double t = dot(p - a, ab) / dot(ab, ab);
    return {e, std::clamp(t, 0.0, 1.0)};
}

void PolyBoundary::chain_between(const BPoint& a, const BPoint& b, std::vector<Vec2d>& out) const {
    int first = mod(a.edge + 1);  // first vertex CCW after a
    int steps = mod(b.edge - a.edge);
    if (steps == 0 && b.t >= a.t) return;  // same edge, no vertex in between
    if (steps == 0) steps = n_;            // wraps all the way around
    for (int k = 0; k < steps; ++k) out.push_back(poly_.vertex(mod(first + k)));
}

DiskBoundary::DiskBoundary(const UnitDisk<double>& C) : C_(&C), fan_(C.region(), Vec2d{0.0, 0.0}) {
    int n = fan_.size();
    edge_clen_.resize(n);
    prefix_.resize(n + 1, 0.0);
    for (int i = 0; i < n; ++i) {
        Vec2d e = C.region().vertex(i + 1) - C.region().vertex(i);
        edge_clen_[i] = C.gauge(e);
        prefix_[i + 1] = prefix_[i] + edge_clen_[i];
    }
    total_ = prefix_[n];
}

double DiskBoundary::gauge(const Vec2d& v) const {
    if (v.x == 0.0 && v.y == 0.0) return 0.0;
    int e = fan_.sector_of(v);
    const auto& n = C_->edge_normals()[e];
    return dot(n, v) / C_->edge_offsets()[e];
}

double DiskBoundary::param_clen(const BPoint& bp) const { return prefix_[bp.edge] + bp.t * edge_clen_[bp.edge]; }

double DiskBoundary::clen_ccw(const BPoint& a, const BPoint& b) const {
    double d = param_clen(b) - param_clen(a);
    if (d < 0) d += total_;
    return d;
}

std::optional<DiskBoundary::Crossing> DiskBoundary::translate_crossing(const Vec2d& v) const {
    double g = gauge(v);
    if (g < 1e-12 || g > 2.0 - 1e-9) return std::nullopt;
    Vec2d b_in{v.x / g, v.y / g};    // on bd(C), strictly inside v+C
    Vec2d b_out{-b_in.x, -b_in.y};   // strictly outside v+C
    auto h = [&](const Vec2d& p) { return gauge(p - v) - 1.0; };

    // Nodes along the CCW path from b_in to b_out: fractional ends plus the
    // vertices strictly between. The inside arc is contiguous, so exactly one
    // adjacent node pair flips sign.
    BPoint p_in = fan_.locate(b_in), p_out = fan_.locate(b_out);
    std::vector<Vec2d> nodes{b_in};
    fan_.chain_between(p_in, p_out, nodes);
    nodes.push_back(b_out);

    int lo = 0, hi = static_cast<int>(nodes.size()) - 1;
    // h(nodes[lo]) < 0 <= h(nodes[hi]); bisect to an adjacent pair
    while (hi - lo > 1) {
        int mid = (lo + hi) / 2;
        if (h(nodes[mid]) < 0)
            lo = mid;
        else
            hi = mid;
    }
    // Root on the sub-segment [nodes[lo], nodes[hi]] (lies on one edge of C).
    Vec2d A = nodes[lo], B = nodes[hi];
    double ta = 0.0, tb = 1.0;
    auto at = [&](double t) { return Vec2d{A.x + (B.x - A.x) * t, A.y + (B.y - A.y) * t}; };
    for (int it = 0; it < 80 && tb - ta > 1e-15; ++it) {
        double tm = 0.5 * (ta + tb);
        if (h(at(tm)) < 0)
            ta = tm;
        else
            tb = tm;
    }
    // Sharpen with one exact linear solve in the stabilized sector.
    double tm = 0.5 * (ta + tb);
    int sec = fan_.sector_of(at(tm) - v);
    const auto& nn = C_->edge_normals()[sec];
    double off = C_->edge_offsets()[sec];
    double fa = dot(nn, at(0.0) - v) - off, fb = dot(nn, at(1.0) - v) - off;
    double t = (fb - fa) != 0.0 ? fa / (fa - fb) : tm;
    if (!(t >= ta - 1e-9 && t <= tb + 1e-9)) t = tm;
    Crossing cr;
    cr.w = at(t);
    cr.on_c = fan_.locate(cr.w);
    return cr;
}

std::optional<DiskBoundary::SpindleArc> DiskBoundary::spindle_arc(const Vec2d& x, const Vec2d& y,
                                                                  bool right_of_chord) const {
    Vec2d v = y - x;
    double g = gauge(v);
    if (g > 2.0 + 1e-9) return std::nullopt;
    if (g < 1e-12) return SpindleArc{{x, y}, 0.0};
    if (g > 2.0 - 1e-6) return spindle_arc_slow(x, y, right_of_chord);

    auto cr = translate_crossing(v);
    if (!cr) return spindle_arc_slow(x, y, right_of_chord);
    Vec2d w = cr->w;
    Vec2d z1 = x + w;
    Vec2d z2 = x + (v - w);

    // Candidate arc on z1+C: the CCW boundary path of C between -w and v-w
    // (or its complement) translated by z1; the spindle arc is the one inside
    // z2+C.
    BPoint a = fan_.locate(Vec2d{-w.x, -w.y});
    BPoint b = fan_.locate(v - w);

    auto build = [&](const BPoint& from, const BPoint& to, bool reversed) {
        std::vector<Vec2d> pts{fan_.point(from)};
        fan_.chain_between(from, to, pts);
        pts.push_back(fan_.point(to));
        if (reversed) std::reverse(pts.begin(), pts.end());
        return pts;
    };
    auto mid_of = [&](const std::vector<Vec2d>& pts) {
        std::size_t k = pts.size() / 2;
        if (pts.size() % 2 == 0)
            return Vec2d{0.5 * (pts[k - 1].x + pts[k].x), 0.5 * (pts[k - 1].y + pts[k].y)};
        return pts[k];
    };

    std::vector<Vec2d> path = build(a, b, false);  // traversed -w .. v-w, i.e. x -> y after translating
    double len = clen_ccw(a, b);
    Vec2d q1 = mid_of(path) + z1;
    if (gauge(q1 - z2) > 1.0 + 1e-9) {
        path = build(b, a, true);
        len = clen_ccw(b, a);
        q1 = mid_of(path) + z1;
    }

    // Arc on z1, from x to y.
    std::vector<Vec2d> arc1;
    arc1.reserve(path.size() + 2);
    arc1.push_back(x);
    for (const auto& p : path) arc1.push_back(p + z1);
    arc1.push_back(y);

    bool arc1_right = cross(v, q1 - x) < 0.0;
    if (arc1_right == right_of_chord) return SpindleArc{std::move(arc1), len};

    // The other arc is the point reflection of arc1 through (x+y)/2.
    std::vector<Vec2d> arc2;
    arc2.reserve(arc1.size());
    for (auto it = arc1.rbegin(); it != arc1.rend(); ++it) arc2.push_back({x.x + y.x - it->x, x.y + y.y - it->y});
    return SpindleArc{std::move(arc2), len};
}

std::optional<DiskBoundary::SpindleArc> DiskBoundary::spindle_arc_slow(const Vec2d& x, const Vec2d& y,
                                                                       bool right_of_chord) const {
    auto sp = c_spindle(x, y, *C_);
    if (!sp.region) return std::nullopt;
    const auto& R = *sp.region;
    if (R.degenerate()) {
        return SpindleArc{{x, y}, C_->gauge(y - x)};
    }
    // Split the spindle boundary ring at the vertices nearest to x and y.
    std::size_t n = R.size();
    std::size_t ix = 0, iy = 0;
    double bx = 1e300, by = 1e300;
    for (std::size_t i = 0; i < n; ++i) {
        Vec2d dxv = R.vertex(i) - x, dyv = R.vertex(i) - y;
        if (dot(dxv, dxv) < bx) {
            bx = dot(dxv, dxv);
            ix = i;
        }
        if (dot(dyv, dyv) < by) {
            by = dot(dyv, dyv);
            iy = i;
        }
    }
    auto walk = [&](std::size_t from, std::size_t to) {
        std::vector<Vec2d> pts;
        for (std::size_t i = from;; i = (i + 1) % n) {
            pts.push_back(R.vertex(i));
            if (i == to) break;
        }
        return pts;
    };
    std::vector<Vec2d> side1 = walk(ix, iy);                   // x -> y CCW along the spindle
    std::vector<Vec2d> side2 = walk(iy, ix);                   // y -> x CCW
    std::reverse(side2.begin(), side2.end());                  // now x -> y
    Vec2d v = y - x;
    auto pick_side = [&](const std::vector<Vec2d>& pts) {
        for (const auto& p : pts) {
            double c = cross(v, p - x);
            if (std::abs(c) > 1e-12 * (std::abs(v.x) + std::abs(v.y) + 1.0)) return c < 0.0;
        }
        return false;  // collinear: treat as left
    };
    const std::vector<Vec2d>& chosen = (pick_side(side1) == right_of_chord) ? side1 : side2;
    Polyline<double> pl{chosen, false};
    SpindleArc arc;
    arc.pts = chosen;
    if (arc.pts.empty() || dot(arc.pts.front() - x, arc.pts.front() - x) > 1e-18) arc.pts.insert(arc.pts.begin(), x);
    if (dot(arc.pts.back() - y, arc.pts.back() - y) > 1e-18) arc.pts.push_back(y);
    Polyline<double> full{arc.pts, false};
    arc.clen = c_length(full, *C_);
    return arc;
}

std::optional<double> DiskBoundary::rho(const Vec2d& x, const Vec2d& y) const {
    Vec2d v = y - x;
    double g = gauge(v);
    if (g > 2.0 + 1e-9) return std::nullopt;
    if (g < 1e-12) return 0.0;
    auto arc = spindle_arc(x, y, true);
    if (!arc) return std::nullopt;
    return arc->clen;
}

std::optional<double> DiskBoundary::bulge(const Vec2d& x, const Vec2d& y) const {
    auto arc = spindle_arc(x, y, true);
    if (!arc) return std::nullopt;
    return chord_arc_area(x, y, arc->pts);
}

// Area enclosed between the chord x->y and the arc polyline (x ... y): the
// ring x -> arc -> y -> x is clockwise when the arc lies right of the chord,
// so the negated shoelace is the enclosed area.
double chord_arc_area(const Vec2d& x, const Vec2d& y, const std::vector<Vec2d>& arc_pts) {
    (void)x;
    (void)y;
    double s = 0.0;
    std::size_t n = arc_pts.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2d& p = arc_pts[i];
        const Vec2d& q = arc_pts[(i + 1) % n];
        s += cross(p, q);
    }
    return -0.5 * s;
}

}  // namespace spindle
