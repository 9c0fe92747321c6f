#include "spindle/counterexample.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <sstream>

#include "spindle/metrics.hpp"
#include "spindle/spindle_hull.hpp"

namespace spindle {

namespace {

PointQ mirror_x(const PointQ& p) { return {p.x, -p.y}; }

RegionQ mirror_x(const RegionQ& r) {
    // Reflection reverses orientation; rebuild CCW.
    std::vector<PointQ> vs;
    for (auto it = r.vertices().rbegin(); it != r.vertices().rend(); ++it) vs.push_back(mirror_x(*it));
    return RegionQ::from_ccw_loose(vs);
}

Rat sq_dist(const PointQ& a, const PointQ& b) {
    Vec2q d = a - b;
    return dot(d, d);
}

Rat max_pair_sq_dist(const std::vector<PointQ>& vs) {
    Rat best(0);
    for (std::size_t i = 0; i < vs.size(); ++i)
        for (std::size_t j = i + 1; j < vs.size(); ++j) {
            Rat d = sq_dist(vs[i], vs[j]);
            if (d > best) best = d;
        }
    return best;
}

RegionQ require_hull(const std::vector<PointQ>& pts, const DiskQ& C, const char* what) {
    auto h = c_hull(pts, C);
    if (!h) throw std::logic_error(std::string("unbounded hull: ") + what);
    return *h;
}

}  // namespace

// ---------------------------------------------------------------------------
// Step 1
// ---------------------------------------------------------------------------

Rat default_chain_multiplier(const Rat& t) {
    // D1^2 = (2t+2)^2 + 4, binding chain edge has squared length 2 L^2.
    Rat d1sq = (Rat(2) * t + 2) * (Rat(2) * t + 2) + 4;
    Int L = ceil_isqrt(d1sq / 2);
    Rat Lr(L);
    if (Rat(2) * Lr * Lr <= d1sq) Lr += 1;
    return Lr;
}

Step1Instance build_step1(const Rat& t, const Rat& L_in) {
    if (t < 4) throw std::invalid_argument("build_step1: t must be >= 4");
    Rat L = L_in;
    if (sgn(L) == 0) L = default_chain_multiplier(t);

    Step1Instance inst;
    inst.t = t;
    inst.L = L;
    Rat d21 = rat_parse("2.1"), d09 = rat_parse("0.9"), d01 = rat_parse("0.1");

    inst.p = {PointQ{Rat(0), -1 - t},      PointQ{d21, -d09 - t}, PointQ{t + 2, Rat(-1)},
              PointQ{t + 2, Rat(1)},       PointQ{d21, d09 + t},  PointQ{Rat(0), 1 + t}};
    inst.q = {PointQ{t, Rat(-1)}, PointQ{t, Rat(1)}, PointQ{-t, Rat(1)}, PointQ{-t, Rat(-1)}};

    inst.H = RegionQ::from_ccw({inst.p[0], inst.q[0], inst.q[1], inst.p[5], inst.q[2], inst.q[3]});
    inst.K1 = RegionQ::from_ccw({inst.p[0], inst.p[1], inst.p[2], inst.p[3], inst.p[4], inst.p[5],
                                 inst.q[2], inst.q[3]});
    inst.areaH = inst.H.area();
    inst.areaK1 = inst.K1.area();
    inst.D1_sq = max_pair_sq_dist(inst.K1.vertices());

    // Each chain edge must be Euclid-longer than the diameter of K1
    // (squared-rational comparisons).
    auto need = [&](const Rat& factor_sq, const char* name) {
        if (L * L * factor_sq <= inst.D1_sq)
            throw std::invalid_argument(std::string("build_step1: chain edge too short: ") + name);
    };
    need(d21 * d21 + d01 * d01, "|x2-x1| along p1p2");
    need((t + 2) * (t + 2) + t * t, "|x3-x2| along p1p3");
    need(Rat(2), "|x4-x3| along p2p3");

    // Right chain backwards from x4 = (a,-1); x1 must land on the y-axis.
    Rat a = L * (t + rat_parse("5.1"));
    PointQ x4{a, Rat(-1)};
    PointQ x3 = x4 - Vec2q{L, L};
    PointQ x2 = x3 - Vec2q{L * (t + 2), L * t};
    PointQ x1 = x2 - Vec2q{L * d21, L * d01};
    if (sgn(x1.x) != 0) throw std::logic_error("build_step1: x1 not on the y-axis");

    PointQ x5{a, Rat(1)};
    PointQ x6 = mirror_x(x3);
    PointQ x7 = mirror_x(x2);
    std::vector<PointQ> ring{x1, x2, x3, x4, x5, x6, x7};
    std::size_t half = ring.size();
    for (std::size_t i = 0; i < half; ++i) ring.push_back(-ring[i]);
    inst.C1 = DiskQ(RegionQ::from_ccw(ring));  // validates convexity + o-symmetry

    inst.G = {{inst.p[0], inst.p[1]},
              {inst.p[1], inst.p[2]},
              {inst.p[2], inst.p[3]},
              {inst.p[3], inst.p[4]},
              {inst.p[4], inst.p[5]}};
    return inst;
}

// ---------------------------------------------------------------------------
// Parametric hull sweep: for q(s) = A + s(B-A) on an edge, the feasible
// region F(s) and the hull H(s) = intersection of translates of C over F's
// vertices have active-line structures that are constant on cells of [0,1];
// within a cell every vertex is an affine function of s, so the hull area is
// an exact quadratic. Cell boundaries are rational roots of affine
// feasibility conditions.
// ---------------------------------------------------------------------------

namespace {

struct PRat {  // a + b*s
    Rat a, b;
    Rat eval(const Rat& s) const { return a + b * s; }
};

PRat operator+(const PRat& x, const PRat& y) { return {x.a + y.a, x.b + y.b}; }
PRat operator-(const PRat& x, const PRat& y) { return {x.a - y.a, x.b - y.b}; }
PRat operator*(const Rat& c, const PRat& x) { return {c * x.a, c * x.b}; }

struct PPoint {
    PRat x, y;
    PointQ eval(const Rat& s) const { return {x.eval(s), y.eval(s)}; }
};

struct PLine {
    Vec2q n;
    PRat c;  // halfplane n . x <= c(s)
};

struct LVert {
    PointQ pt;
    int lout;  // line tag of the outgoing edge
};

// Exact labeled halfplane intersection at a fixed parameter value. Starts
// from a bounding box with synthetic tags -1..-4.
std::vector<LVert> labeled_intersection(const std::vector<Vec2q>& normals, const std::vector<Rat>& offsets,
                                        const Rat& big) {
    std::vector<LVert> ring{{{big, -big}, -1}, {{big, big}, -2}, {{-big, big}, -3}, {{-big, -big}, -4}};
    // synthetic box lines: tag -1: x <= big? edges: v0->v1 is x = big ... tags
    // chosen per edge; only their absence from the final ring matters.
    for (std::size_t li = 0; li < normals.size(); ++li) {
        const Vec2q& n = normals[li];
        const Rat& c = offsets[li];
        std::vector<LVert> out;
        std::size_t m = ring.size();
        for (std::size_t i = 0; i < m; ++i) {
            const LVert& aV = ring[i];
            const LVert& bV = ring[(i + 1) % m];
            Rat da = c - dot(n, aV.pt);
            Rat db = c - dot(n, bV.pt);
            int sa = sgn(da), sb = sgn(db);
            if (sa > 0 || (sa == 0 && sb >= 0)) {
                out.push_back(aV);
            } else if (sa == 0 && sb < 0) {
                out.push_back({aV.pt, static_cast<int>(li)});  // edge turns onto the new line at a
            }
            if ((sa > 0 && sb < 0) || (sa < 0 && sb > 0)) {
                Rat tt = da / (da - db);
                PointQ X{aV.pt.x + (bV.pt.x - aV.pt.x) * tt, aV.pt.y + (bV.pt.y - aV.pt.y) * tt};
                if (sa > 0)  // exiting: new edge runs along the clip line
                    out.push_back({X, static_cast<int>(li)});
                else  // entering: continue on the crossed edge's line
                    out.push_back({X, aV.lout});
            }
        }
        ring = std::move(out);
        if (ring.size() < 3) throw std::logic_error("labeled_intersection: degenerate feasible region");
    }
    return ring;
}

PPoint solve_lines(const Vec2q& n1, const PRat& c1, const Vec2q& n2, const PRat& c2) {
    Rat det = cross(n1, n2);
    if (sgn(det) == 0) throw std::logic_error("solve_lines: parallel active lines");
    Rat inv = Rat(1) / det;
    PPoint p;
    p.x = inv * (n2.y * c1 - (n1.y * c2));
    p.y = inv * (n1.x * c2 - (n2.x * c1));
    return p;
}

struct CellResult {
    Rat max_value;
    Rat arg_s;
    int cells = 0;
};

struct SweepContext {
    const DiskQ* C;
    PointQ p1, p6;  // fixed hull generators
    PointQ A, B;    // moving generator q(s) = A + s(B-A)
    Rat big;        // bounding box half-width for labeled clipping
};

// Quadratic q0 + q1 s + q2 s^2 maximized exactly over [sa, sb].
void quad_max(const Rat& q0, const Rat& q1, const Rat& q2, const Rat& sa, const Rat& sb, Rat& best,
              Rat& arg) {
    auto consider = [&](const Rat& s) {
        Rat v = q0 + q1 * s + q2 * s * s;
        if (v > best) {
            best = v;
            arg = s;
        }
    };
    consider(sa);
    consider(sb);
    if (sgn(q2) < 0) {
        Rat sc = -q1 / (2 * q2);
        if (sc > sa && sc < sb) consider(sc);
    }
}

void certify_cell(const SweepContext& ctx, const Rat& sa, const Rat& sb, CellResult& res, int depth) {
    if (depth > 64) throw std::logic_error("certify_cell: recursion too deep");
    Rat smid = (sa + sb) / 2;

    const auto& Cr = ctx.C->region();
    std::size_t ne = Cr.size();
    const auto& cn = ctx.C->edge_normals();
    const auto& cc = ctx.C->edge_offsets();

    // Level 1: F(s) = (p1+C) n (q(s)+C) n (p6+C).
    Vec2q qdir = ctx.B - ctx.A;
    std::vector<PLine> l1;
    std::vector<Vec2q> n1v;
    std::vector<Rat> c1v;
    auto add_center = [&](const PRat& cx, const PRat& cy) {
        for (std::size_t e = 0; e < ne; ++e) {
            PRat off = {cc[e] + cn[e].x * cx.a + cn[e].y * cy.a, cn[e].x * cx.b + cn[e].y * cy.b};
            l1.push_back({cn[e], off});
        }
    };
    add_center({ctx.p1.x, Rat(0)}, {ctx.p1.y, Rat(0)});
    add_center({ctx.A.x, qdir.x}, {ctx.A.y, qdir.y});
    add_center({ctx.p6.x, Rat(0)}, {ctx.p6.y, Rat(0)});
    for (const auto& l : l1) {
        n1v.push_back(l.n);
        c1v.push_back(l.c.eval(smid));
    }
    auto ring1 = labeled_intersection(n1v, c1v, ctx.big);

    std::size_t k1 = ring1.size();
    std::vector<PPoint> fverts(k1);
    for (std::size_t i = 0; i < k1; ++i) {
        int la = ring1[(i + k1 - 1) % k1].lout;
        int lb = ring1[i].lout;
        if (la < 0 || lb < 0) throw std::logic_error("certify_cell: bounding box too small");
        fverts[i] = solve_lines(l1[la].n, l1[la].c, l1[lb].n, l1[lb].c);
    }

    // Level 2: hull(s) = intersection of translates of C over F's vertices.
    std::vector<PLine> l2;
    std::vector<Vec2q> n2v;
    std::vector<Rat> c2v;
    for (std::size_t k = 0; k < k1; ++k)
        for (std::size_t e = 0; e < ne; ++e) {
            PRat off = {cc[e] + cn[e].x * fverts[k].x.a + cn[e].y * fverts[k].y.a,
                        cn[e].x * fverts[k].x.b + cn[e].y * fverts[k].y.b};
            l2.push_back({cn[e], off});
        }
    for (const auto& l : l2) {
        n2v.push_back(l.n);
        c2v.push_back(l.c.eval(smid));
    }
    auto ring2 = labeled_intersection(n2v, c2v, ctx.big);

    std::size_t k2 = ring2.size();
    std::vector<PPoint> hverts(k2);
    for (std::size_t i = 0; i < k2; ++i) {
        int la = ring2[(i + k2 - 1) % k2].lout;
        int lb = ring2[i].lout;
        if (la < 0 || lb < 0) throw std::logic_error("certify_cell: bounding box too small (hull)");
        hverts[i] = solve_lines(l2[la].n, l2[la].c, l2[lb].n, l2[lb].c);
    }

    // Structure-validity conditions, affine in s: every symbolic vertex obeys
    // every line of its level. Collect roots of any condition violated at the
    // cell ends; the cell certifies when none are.
    std::vector<Rat> roots;
    auto check_all = [&](const std::vector<PPoint>& verts, const std::vector<PLine>& lines) {
        for (const auto& v : verts)
            for (const auto& l : lines) {
                PRat cond = l.c - PRat{l.n.x * v.x.a + l.n.y * v.y.a, l.n.x * v.x.b + l.n.y * v.y.b};
                Rat ca = cond.eval(sa), cb = cond.eval(sb);
                if (sgn(ca) >= 0 && sgn(cb) >= 0) continue;
                if (sgn(cond.b) == 0) throw std::logic_error("certify_cell: constant negative condition");
                Rat r = -cond.a / cond.b;
                if (r > sa && r < sb) roots.push_back(r);
            }
    };
    check_all(fverts, l1);
    check_all(hverts, l2);

    if (!roots.empty()) {
        Rat r = *std::min_element(roots.begin(), roots.end());
        certify_cell(ctx, sa, r, res, depth + 1);
        certify_cell(ctx, r, sb, res, depth + 1);
        return;
    }

    // Exact quadratic area over the certified cell.
    Rat q0(0), q1(0), q2(0);
    for (std::size_t i = 0; i < k2; ++i) {
        const PPoint& u = hverts[i];
        const PPoint& w = hverts[(i + 1) % k2];
        // cross(u, w) = ux*wy - uy*wx, each product of two affine terms
        q0 += u.x.a * w.y.a - u.y.a * w.x.a;
        q1 += u.x.a * w.y.b + u.x.b * w.y.a - (u.y.a * w.x.b + u.y.b * w.x.a);
        q2 += u.x.b * w.y.b - u.y.b * w.x.b;
    }
    q0 /= 2;
    q1 /= 2;
    q2 /= 2;
    quad_max(q0, q1, q2, sa, sb, res.max_value, res.arg_s);
    res.cells += 1;
}

Rat hull_area_of(const std::vector<PointQ>& pts, const DiskQ& C) {
    return require_hull(pts, C, "hull_area_of").area();
}

}  // namespace

Step1Certificate certify_step1(const Step1Instance& inst) {
    Step1Certificate cert;
    const DiskQ& C1 = inst.C1;

    // Mirror-symmetry premises: C1 and {p1,p6} are invariant under y-mirror,
    // so g(q) = g(mirror(q)) and the sweep may restrict to y >= 0.
    if (!mirror_x(C1.region()).same_region(C1.region()))
        throw std::logic_error("certify_step1: C1 not x-axis symmetric");
    if (!(mirror_x(inst.p[0]) == inst.p[5]))
        throw std::logic_error("certify_step1: p1/p6 not mirror images");

    auto hullH = c_hull(std::vector<PointQ>{inst.p[0], inst.p[5]}, C1);
    cert.hull_H_ok = hullH && hullH->same_region(inst.H);
    auto hullK1 = c_hull(std::vector<PointQ>{inst.p[0], inst.p[1], inst.p[4], inst.p[5]}, C1);
    cert.hull_K1_ok = hullK1 && hullK1->same_region(inst.K1);

    // Bounding box for the labeled clipper: everything lives well inside.
    Rat radius(0);
    for (const auto& v : C1.region().vertices()) {
        Rat r = abs(v.x) + abs(v.y);
        if (r > radius) radius = r;
    }
    Rat big = 4 * (radius + inst.t + 10);

    PointQ pbar{inst.t + 2, Rat(0)};
    SweepContext ctx{&C1, inst.p[0], inst.p[5], pbar, inst.p[3], big};

    CellResult res;
    res.max_value = Rat(-1);
    res.arg_s = Rat(0);

    struct EdgeSpan {
        PointQ A, B;
    };
    std::vector<EdgeSpan> spans{{pbar, inst.p[3]}, {inst.p[3], inst.p[4]}, {inst.p[4], inst.p[5]}};
    PointQ best_q = pbar;
    for (const auto& sp : spans) {
        SweepContext c = ctx;
        c.A = sp.A;
        c.B = sp.B;
        CellResult r;
        r.max_value = Rat(-1);
        r.arg_s = Rat(0);
        certify_cell(c, Rat(0), Rat(1), r, 0);
        res.cells += r.cells;
        if (r.max_value > res.max_value) {
            res.max_value = r.max_value;
            Vec2q d = sp.B - sp.A;
            best_q = sp.A + Vec2q{d.x * r.arg_s, d.y * r.arg_s};
        }
    }
    cert.max_g = res.max_value;
    cert.argmax_q = best_q;
    cert.cells = res.cells;

    cert.case1_value = hull_area_of({inst.p[0], pbar, inst.p[5]}, C1);
    cert.case1_formula = inst.areaH + Rat(3) * inst.t / 2 + 3;
    cert.case1_ok = cert.case1_value == cert.case1_formula;

    cert.corner_value = hull_area_of({inst.p[0], inst.p[4], inst.p[5]}, C1);
    cert.corner_formula_sharp = (inst.areaH + inst.areaK1) / 2 - 1;
    cert.corner_formula_quoted = (inst.areaH + inst.areaK1) / 2 - 2;
    cert.corner_sharp_ok = cert.corner_value == cert.corner_formula_sharp;
    cert.corner_quoted_ok = cert.corner_value == cert.corner_formula_quoted;

    cert.sum_bound_sharp = inst.areaH + inst.areaK1 - 2;
    cert.sum_bound_quoted = inst.areaH + inst.areaK1 - 4;
    cert.sharp_ok = 2 * cert.max_g <= cert.sum_bound_sharp;
    cert.quoted_ok = 2 * cert.max_g <= cert.sum_bound_quoted;
    cert.holds = cert.hull_H_ok && cert.hull_K1_ok && cert.case1_ok && cert.corner_sharp_ok &&
                 cert.sharp_ok;
    return cert;
}

// ---------------------------------------------------------------------------
// Step 2
// ---------------------------------------------------------------------------

Step2Instance build_step2(const Rat& t, const Rat& s, const Rat& L, const Rat& mu_a_in,
                          const Rat& mu_b_in) {
    Step2Instance inst;
    inst.step1 = build_step1(t, L);
    inst.s = s;
    inst.p7 = {-s, Rat(0)};

    // Long-edge directions: d_a along p5-p7 (adjacent to the poles), d_b
    // along p6-p7 (adjacent to the chain). Convexity needs slope(d_a) <
    // slope(d_b) < slope of the chain's first edge, i.e. s > 21(1+t).
    Rat d21 = rat_parse("2.1");
    Vec2q d_a{s + d21, rat_parse("0.9") + t};
    Vec2q d_b{s, 1 + t};
    if (!(Rat(21) * (1 + t) < s))
        throw std::invalid_argument("build_step2: infeasible, need s > 21(1+t) for convex long edges");

    std::vector<PointQ> k2pts = inst.step1.K1.vertices();
    k2pts.push_back(inst.p7);
    inst.K2 = RegionQ::hull_of(k2pts);
    inst.D2_sq = max_pair_sq_dist(inst.K2.vertices());

    auto pick_mu = [&](const Vec2q& d, const Rat& given) {
        if (sgn(given) > 0) return given;
        Rat len_sq = dot(d, d);
        Int m = ceil_isqrt(inst.D2_sq / len_sq);
        Rat mr(m);
        if (mr * mr * len_sq <= inst.D2_sq) mr += 1;
        return mr;
    };
    inst.mu_a = pick_mu(d_a, mu_a_in);
    inst.mu_b = pick_mu(d_b, mu_b_in);

    const auto& x1 = inst.step1.C1.vertex(0);
    Rat Y1 = -x1.y;
    Rat h = Y1 + inst.mu_a * d_a.y + inst.mu_b * d_b.y;
    Rat ux = inst.mu_a * d_a.x + inst.mu_b * d_b.x;
    inst.u = {ux, Rat(0)};
    PointQ w1{Rat(0), -h};
    PointQ w2 = w1 + Vec2q{inst.mu_a * d_a.x, inst.mu_a * d_a.y};

    std::vector<PointQ> half{w1, w2};
    for (std::size_t i = 0; i < 8; ++i) half.push_back(inst.step1.C1.vertex(i) + inst.u);  // x1..x8
    half.push_back(mirror_x(w2));
    std::size_t hn = half.size();
    std::vector<PointQ> ring = half;
    for (std::size_t i = 0; i < hn; ++i) ring.push_back(-half[i]);
    try {
        inst.C2 = DiskQ(RegionQ::from_ccw(ring));
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(std::string("build_step2: C2 construction failed: ") + e.what());
    }

    if (!is_c_convex(inst.K2, inst.C2))
        throw std::invalid_argument("build_step2: K2 is not C2-convex");

    const auto& p = inst.step1.p;
    inst.Hprime = require_hull({p[0], p[5], inst.p7}, inst.C2, "[p1,p6,p7]_C2");
    inst.areaHprime = inst.Hprime.area();
    inst.areaK2 = inst.K2.area();

    std::vector<PointQ> hp = inst.step1.H.vertices();
    hp.push_back(inst.p7);
    inst.hull_Hprime_matches_conv = inst.Hprime.same_region(RegionQ::hull_of(hp));

    auto k2hull = c_hull(std::vector<PointQ>{p[0], p[1], p[4], p[5], inst.p7}, inst.C2);
    inst.hull_K2_ok = k2hull && k2hull->same_region(inst.K2);
    return inst;
}

// ---------------------------------------------------------------------------
// Exclusion cuts: T = K n {n.x <= c} is a corner triangle whose chord lies
// inside a parallel edge of a translate of the disk containing K \ T; any
// inscribed C-n-gon avoiding T then has area at most area(K) - area(T).
// ---------------------------------------------------------------------------

namespace {

struct ExclusionCut {
    RegionQ triangle;
    Rat area;
    Vec2q n;  // K \ T side: n.x >= c
    Rat c;
    std::size_t apex;  // ring index in K
};

std::optional<ExclusionCut> build_cut(const RegionQ& K, const DiskQ& D, std::size_t apex, const Rat& r) {
    std::size_t nk = K.size();
    const PointQ& pv = K.vertex(apex);
    const PointQ& prev = K.vertex((apex + nk - 1) % nk);
    const PointQ& next = K.vertex(apex + 1);
    PointQ va = pv + Vec2q{(prev.x - pv.x) * r, (prev.y - pv.y) * r};
    PointQ vb = pv + Vec2q{(next.x - pv.x) * r, (next.y - pv.y) * r};

    Vec2q chord = vb - va;
    Vec2q n = perp(chord);
    Rat c = dot(n, va);
    if (sgn(dot(n, pv) - c) > 0) {
        n = -n;
        c = -c;
    }
    // T = K n {n.x <= c}; should be the triangle [apex, va, vb].
    auto Tclip = clip_halfplane(K, n, c);
    if (!Tclip || !Tclip->is_polygon()) return std::nullopt;
    RegionQ tri = RegionQ::hull_of({pv, va, vb});
    if (!tri.is_polygon() || !Tclip->same_region(tri)) return std::nullopt;

    // Find the disk edge parallel to the chord whose outward normal points
    // toward the apex side (-n direction).
    std::size_t nd = D.size();
    std::optional<std::size_t> edge;
    for (std::size_t e = 0; e < nd; ++e) {
        Vec2q ev = D.vertex(e + 1) - D.vertex(e);
        if (sgn(cross(ev, chord)) != 0) continue;
        const Vec2q& en = D.edge_normals()[e];
        if (sgn(dot(en, n)) < 0) {
            edge = e;
            break;
        }
    }
    if (!edge) return std::nullopt;
    PointQ e0 = D.vertex(*edge), e1 = D.vertex(*edge + 1);
    PointQ chord_mid{(va.x + vb.x) / 2, (va.y + vb.y) / 2};
    PointQ edge_mid{(e0.x + e1.x) / 2, (e0.y + e1.y) / 2};
    Vec2q z = chord_mid - edge_mid;

    // chord endpoints must lie inside the translated edge segment
    Vec2q ev = e1 - e0;
    Rat evlen = dot(ev, ev);
    for (const PointQ& q : {va, vb}) {
        Vec2q rel = q - (e0 + z);
        if (sgn(cross(rel, ev)) != 0) return std::nullopt;
        Rat tpar = dot(rel, ev) / evlen;
        if (sgn(tpar) < 0 || sgn(Rat(1) - tpar) < 0) return std::nullopt;
    }
    // translate lies in the n.x >= c halfplane
    for (const auto& v : D.region().vertices())
        if (sgn(dot(n, v + z) - c) < 0) return std::nullopt;
    // translate contains K \ T
    auto rest = clip_halfplane(K, Vec2q{-n.x, -n.y}, Rat(-c));
    if (!rest) return std::nullopt;
    for (const auto& v : rest->vertices())
        if (sgn(D.gauge(v - z) - 1) > 0) return std::nullopt;

    ExclusionCut cut;
    cut.triangle = tri;
    cut.area = tri.area();
    cut.n = n;
    cut.c = c;
    cut.apex = apex;
    return cut;
}

// ---------------------------------------------------------------------------
// Branch and bound for the inscribed 4-gon area upper bound.
// ---------------------------------------------------------------------------

struct BoundaryPiece {
    std::size_t edge;
    Rat lo, hi;  // edge parameter range
};

struct GapInput {
    const DiskQ* disk;
    const RegionQ* body;
    std::array<PointQ, 7> pts;  // p1..p7 (images)
    Rat areaH2, areaK2;
    Rat r7;
    std::vector<Rat> r_candidates;
};

PointQ edge_point(const RegionQ& K, std::size_t e, const Rat& t) {
    const PointQ& a = K.vertex(e);
    const PointQ& b = K.vertex(e + 1);
    return {a.x + (b.x - a.x) * t, a.y + (b.y - a.y) * t};
}

std::size_t ring_index_of(const RegionQ& K, const PointQ& p, const char* what) {
    for (std::size_t i = 0; i < K.size(); ++i)
        if (K.vertex(i) == p) return i;
    throw std::logic_error(std::string("ring_index_of: point is not a vertex: ") + what);
}

struct BnBCell {
    std::array<BoundaryPiece, 3> pieces;
    Rat ub;
    long id = 0;
};

struct CellOrder {
    bool operator()(const BnBCell& a, const BnBCell& b) const {
        if (a.ub != b.ub) return a.ub < b.ub;  // max-heap on ub
        return a.id > b.id;
    }
};

Step2Certificate certify_gap(const GapInput& in, long node_budget) {
    Step2Certificate cert;
    const RegionQ& K = *in.body;
    const DiskQ& D = *in.disk;

    cert.a3_lb = in.areaH2;
    cert.a5_lb = in.areaK2;
    Rat target = (in.areaH2 + in.areaK2) / 2;  // need a4_ub < target

    std::size_t i7 = ring_index_of(K, in.pts[6], "p7");
    std::size_t i6 = ring_index_of(K, in.pts[5], "p6");
    std::size_t i1 = ring_index_of(K, in.pts[0], "p1");

    // Case A: no inscribed vertex in the p7 triangle.
    auto cut7 = build_cut(K, D, i7, in.r7);
    if (!cut7) {
        cert.note = "p7 exclusion cut failed to verify";
        return cert;
    }
    Rat ub_caseA = in.areaK2 - cut7->area;
    if (!(ub_caseA < target)) {
        cert.note = "p7 exclusion too weak at this (t,s)";
        cert.a4_ub = ub_caseA;
        cert.margin = in.areaH2 + in.areaK2 - 2 * ub_caseA;
        return cert;
    }

    // Optional corner cuts at p6 and p1 used as structural prunes.
    std::optional<ExclusionCut> cut6, cut1;
    for (const Rat& r : in.r_candidates) {
        if (!cut6) {
            auto c = build_cut(K, D, i6, r);
            if (c && in.areaK2 - c->area < target) cut6 = c;
        }
        if (!cut1) {
            auto c = build_cut(K, D, i1, r);
            if (c && in.areaK2 - c->area < target) cut1 = c;
        }
    }

    // Triangle vertices for the case-B bound: hull(cell corners u T7) covers
    // every configuration with one vertex inside the triangle.
    PointQ v1 = cut7->triangle.vertex(0), v6 = v1, apex7 = in.pts[6];
    {
        const auto& tv = cut7->triangle.vertices();
        std::vector<PointQ> others;
        for (const auto& v : tv)
            if (!(v == apex7)) others.push_back(v);
        v1 = others.at(0);
        v6 = others.at(1);
    }
    std::vector<PointQ> triple{v1, apex7, v6};

    // Boundary pieces: ring edges split at the cut triangles' chord feet.
    std::vector<BoundaryPiece> pieces;
    std::size_t nk = K.size();
    std::map<std::size_t, std::vector<Rat>> splits;
    auto add_split = [&](const PointQ& q) {
        for (std::size_t e = 0; e < nk; ++e) {
            const PointQ& a = K.vertex(e);
            const PointQ& b = K.vertex(e + 1);
            Vec2q ab = b - a;
            if (sgn(cross(ab, q - a)) != 0) continue;
            Rat tt = dot(q - a, ab) / dot(ab, ab);
            if (sgn(tt) > 0 && sgn(Rat(1) - tt) > 0) splits[e].push_back(tt);
        }
    };
    for (const auto& cut : {cut7, cut6, cut1})
        if (cut)
            for (const auto& v : cut->triangle.vertices()) add_split(v);
    for (std::size_t e = 0; e < nk; ++e) {
        std::vector<Rat> ts{Rat(0)};
        if (auto it = splits.find(e); it != splits.end()) {
            std::sort(it->second.begin(), it->second.end());
            for (const auto& tt : it->second) ts.push_back(tt);
        }
        ts.push_back(Rat(1));
        for (std::size_t k = 0; k + 1 < ts.size(); ++k)
            if (ts[k] < ts[k + 1]) pieces.push_back({e, ts[k], ts[k + 1]});
    }

    auto piece_in_triangle = [&](const BoundaryPiece& pc, const ExclusionCut& cut) {
        // pieces never straddle chord feet, so midpoint membership decides
        PointQ mid = edge_point(K, pc.edge, (pc.lo + pc.hi) / 2);
        return sgn(dot(cut.n, mid) - cut.c) <= 0;
    };

    auto hull_ub = [&](const BnBCell& cell) {
        std::vector<PointQ> pts = triple;
        for (const auto& pc : cell.pieces) {
            pts.push_back(edge_point(K, pc.edge, pc.lo));
            pts.push_back(edge_point(K, pc.edge, pc.hi));
        }
        return hull_area_of(pts, D);
    };

    auto lb_eval = [&](const BnBCell& cell) {
        std::vector<PointQ> pts{in.pts[6]};
        for (const auto& pc : cell.pieces) pts.push_back(edge_point(K, pc.edge, (pc.lo + pc.hi) / 2));
        return hull_area_of(pts, D);
    };

    // Incumbent lower bound from the structural witnesses.
    cert.a4_lb = hull_area_of({in.pts[0], in.pts[4], in.pts[5], in.pts[6]}, D);
    Rat other = hull_area_of({in.pts[0], in.pts[1], in.pts[5], in.pts[6]}, D);
    if (other > cert.a4_lb) cert.a4_lb = other;

    // dropped_ub: the largest certified bound among discarded branches (all
    // below target); the final a4_ub is the max over every covered branch.
    Rat dropped_ub = ub_caseA;
    auto drop = [&](const Rat& ub) {
        if (ub > dropped_ub) dropped_ub = ub;
    };
    for (const auto& cutq : {cut6, cut1})
        if (cutq) drop(in.areaK2 - cutq->area);

    std::priority_queue<BnBCell, std::vector<BnBCell>, CellOrder> heap;
    long counter = 0;
    std::size_t P = pieces.size();
    for (std::size_t a = 0; a < P; ++a)
        for (std::size_t b = a; b < P; ++b)
            for (std::size_t c2 = b; c2 < P; ++c2) {
                BnBCell cell{{pieces[a], pieces[b], pieces[c2]}, Rat(0), counter++};
                bool pruned = false;
                for (const auto& cutq : {cut6, cut1}) {
                    if (!cutq) continue;
                    bool touches = false;
                    for (const auto& pc : cell.pieces)
                        if (piece_in_triangle(pc, *cutq)) touches = true;
                    for (const auto& tp : triple)
                        if (sgn(dot(cutq->n, tp) - cutq->c) < 0) touches = true;
                    if (!touches) {
                        pruned = true;  // bounded by areaK2 - cut area, < target by construction
                        break;
                    }
                }
                if (pruned) continue;
                cell.ub = hull_ub(cell);
                if (cell.ub < target) {
                    drop(cell.ub);
                    continue;
                }
                heap.push(cell);
            }

    long nodes = 0;
    bool budget_hit = false;
    while (!heap.empty()) {
        if (nodes >= node_budget) {
            budget_hit = true;
            break;
        }
        BnBCell cell = heap.top();
        heap.pop();
        ++nodes;

        Rat lb = lb_eval(cell);
        if (lb > cert.a4_lb) cert.a4_lb = lb;
        if (cert.a4_lb >= target) {
            cert.status = Step2Certificate::Status::Fails;
            cert.a4_ub = cert.a4_lb;
            cert.margin = in.areaH2 + in.areaK2 - 2 * cert.a4_lb;
            cert.nodes = nodes;
            cert.note = "witness reaches the midpoint target: gap fails at this (t,s)";
            return cert;
        }

        // Split the Euclid-longest piece of the cell.
        int which = 0;
        Rat best_len(-1);
        for (int i = 0; i < 3; ++i) {
            const auto& pc = cell.pieces[i];
            PointQ a = edge_point(K, pc.edge, pc.lo), b = edge_point(K, pc.edge, pc.hi);
            Rat len = sq_dist(a, b);
            if (len > best_len) {
                best_len = len;
                which = i;
            }
        }
        Rat mid = (cell.pieces[which].lo + cell.pieces[which].hi) / 2;
        for (int side = 0; side < 2; ++side) {
            BnBCell child = cell;
            child.id = counter++;
            if (side == 0)
                child.pieces[which].hi = mid;
            else
                child.pieces[which].lo = mid;
            child.ub = hull_ub(child);
            if (child.ub < target) {
                drop(child.ub);
                continue;
            }
            heap.push(child);
        }
    }

    cert.nodes = nodes;
    if (!budget_hit) {
        // Every branch is certified below target.
        cert.a4_ub = dropped_ub;
        cert.status = Step2Certificate::Status::Holds;
        cert.margin = in.areaH2 + in.areaK2 - 2 * cert.a4_ub;
        return cert;
    }
    cert.a4_ub = heap.top().ub;
    if (cert.a4_ub < dropped_ub) cert.a4_ub = dropped_ub;
    cert.margin = in.areaH2 + in.areaK2 - 2 * cert.a4_ub;
    cert.status = Step2Certificate::Status::Inconclusive;
    cert.note = "node budget exhausted";
    return cert;
}

GapInput gap_input_of(const Step2Instance& inst) {
    GapInput in;
    in.disk = &inst.C2;
    in.body = &inst.K2;
    const auto& p = inst.step1.p;
    in.pts = {p[0], p[1], p[2], p[3], p[4], p[5], inst.p7};
    in.areaH2 = inst.areaHprime;
    in.areaK2 = inst.areaK2;
    in.r7 = Rat(1) / (1 + inst.step1.t);
    in.r_candidates = {rat(9, 10), rat(4, 5), rat(3, 4), rat(2, 3), rat(1, 2), rat(1, 3)};
    return in;
}

}  // namespace

Step2Certificate certify_step2(const Step2Instance& inst, long node_budget) {
    return certify_gap(gap_input_of(inst), node_budget);
}

SearchResult search_step2(const Rat& t0, const Rat& s0, int max_doublings, long node_budget) {
    SearchResult res;
    Rat t = t0, s = s0;
    for (int i = 0; i <= max_doublings; ++i) {
        SearchAttempt at;
        at.t = t;
        at.s = s;
        try {
            Step2Instance inst = build_step2(t, s);
            Step2Certificate cert = certify_step2(inst, node_budget);
            at.margin = rat_to_double(cert.margin);
            switch (cert.status) {
                case Step2Certificate::Status::Holds: at.outcome = "holds"; break;
                case Step2Certificate::Status::Fails: at.outcome = "fails"; break;
                default: at.outcome = "inconclusive: " + cert.note; break;
            }
            res.log.push_back(at);
            if (cert.status == Step2Certificate::Status::Holds) {
                res.found = true;
                res.t = t;
                res.s = s;
                res.instance = std::move(inst);
                res.certificate = std::move(cert);
                return res;
            }
        } catch (const std::invalid_argument& e) {
            at.outcome = std::string("infeasible: ") + e.what();
            res.log.push_back(at);
        }
        s *= 2;
    }
    return res;
}

// ---------------------------------------------------------------------------
// Inscribed-area estimator (floating refinement, exact final value).
// ---------------------------------------------------------------------------

InscribedAreaEstimate estimate_inscribed_area(const Step2Instance& inst, int n, int grid,
                                              int golden_iters) {
    if (n < 3 || n > 5) throw std::invalid_argument("estimate_inscribed_area: n must be in {3,4,5}");
    const RegionQ& K = inst.K2;
    std::size_t nk = K.size();

    // Boundary parameterized by cumulative Euclidean length (double).
    std::vector<double> cum{0.0};
    std::vector<Vec2d> kv;
    for (std::size_t i = 0; i < nk; ++i) kv.push_back(to_double(K.vertex(i)));
    for (std::size_t i = 0; i < nk; ++i) {
        Vec2d d = kv[(i + 1) % nk] - kv[i];
        cum.push_back(cum.back() + std::hypot(d.x, d.y));
    }
    double total = cum.back();
    UnitDisk<double> Cd(to_double(inst.C2.region()));

    auto point_at = [&](double arc) {
        arc = std::fmod(arc, total);
        if (arc < 0) arc += total;
        std::size_t e =
            std::upper_bound(cum.begin(), cum.end(), arc) - cum.begin() - 1;
        if (e >= nk) e = nk - 1;
        double seg = cum[e + 1] - cum[e];
        double tt = seg > 0 ? (arc - cum[e]) / seg : 0.0;
        Vec2d a = kv[e], b = kv[(e + 1) % nk];
        return Vec2d{a.x + (b.x - a.x) * tt, a.y + (b.y - a.y) * tt};
    };
    auto value_of = [&](const std::vector<double>& arcs) {
        std::vector<Vec2d> pts;
        for (double a : arcs) pts.push_back(point_at(a));
        auto h = c_hull(pts, Cd);
        return h ? h->area() : -1.0;
    };

    // Seeds: the structural witnesses plus evenly rotated grid subsets.
    std::vector<std::vector<double>> seeds;
    auto arc_of_vertex = [&](const PointQ& p) {
        Vec2d q = to_double(p);
        for (std::size_t i = 0; i < nk; ++i) {
            Vec2d d = q - kv[i];
            if (std::abs(d.x) + std::abs(d.y) < 1e-9) return cum[i];
        }
        return 0.0;
    };
    const auto& p = inst.step1.p;
    if (n == 3) seeds.push_back({arc_of_vertex(p[0]), arc_of_vertex(p[5]), arc_of_vertex(inst.p7)});
    if (n == 4)
        seeds.push_back(
            {arc_of_vertex(p[0]), arc_of_vertex(p[4]), arc_of_vertex(p[5]), arc_of_vertex(inst.p7)});
    if (n == 5)
        seeds.push_back({arc_of_vertex(p[0]), arc_of_vertex(p[1]), arc_of_vertex(p[4]),
                         arc_of_vertex(p[5]), arc_of_vertex(inst.p7)});
    for (int off = 0; off < 8; ++off) {
        std::vector<double> s;
        for (int k = 0; k < n; ++k) s.push_back(total * (off / 8.0 + static_cast<double>(k) / n) );
        seeds.push_back(s);
    }

    double golden = (std::sqrt(5.0) - 1.0) / 2.0;
    std::vector<double> best_arcs;
    double best_val = -1.0;
    double window0 = total / grid * 4.0;
    for (auto arcs : seeds) {
        double cur = value_of(arcs);
        for (int round = 0; round < 4; ++round) {
            for (std::size_t i = 0; i < arcs.size(); ++i) {
                double w = window0 / (round + 1);
                double lo = arcs[i] - w, hi = arcs[i] + w;
                double x1 = hi - golden * (hi - lo), x2 = lo + golden * (hi - lo);
                auto eval_at = [&](double a) {
                    std::vector<double> probe = arcs;
                    probe[i] = a;
                    return value_of(probe);
                };
                double f1 = eval_at(x1), f2 = eval_at(x2);
                for (int it = 0; it < golden_iters; ++it) {
                    if (f1 < f2) {
                        lo = x1;
                        x1 = x2;
                        f1 = f2;
                        x2 = lo + golden * (hi - lo);
                        f2 = eval_at(x2);
                    } else {
                        hi = x2;
                        x2 = x1;
                        f2 = f1;
                        x1 = hi - golden * (hi - lo);
                        f1 = eval_at(x1);
                    }
                }
                double cand = 0.5 * (lo + hi);
                double fc = eval_at(cand);
                if (fc > cur) {
                    arcs[i] = cand;
                    cur = fc;
                }
            }
        }
        if (cur > best_val) {
            best_val = cur;
            best_arcs = arcs;
        }
    }

    // Snap the winner to rational boundary points and evaluate exactly.
    InscribedAreaEstimate est;
    for (double a : best_arcs) {
        double arc = std::fmod(a, total);
        if (arc < 0) arc += total;
        std::size_t e = std::upper_bound(cum.begin(), cum.end(), arc) - cum.begin() - 1;
        if (e >= nk) e = nk - 1;
        double seg = cum[e + 1] - cum[e];
        double tt = seg > 0 ? (arc - cum[e]) / seg : 0.0;
        Rat tq(static_cast<long>(std::llround(tt * 1048576.0)), 1048576L);
        if (tq < 0) tq = 0;
        if (tq > 1) tq = 1;
        const PointQ& A = K.vertex(e);
        const PointQ& B = K.vertex(e + 1);
        est.witness.push_back({A.x + (B.x - A.x) * tq, A.y + (B.y - A.y) * tq});
    }
    est.value = hull_area_of(est.witness, inst.C2);

    if (n == 4) {
        GapInput in = gap_input_of(inst);
        std::size_t i7 = ring_index_of(K, inst.p7, "p7");
        if (auto cut = build_cut(K, inst.C2, i7, in.r7)) est.outside_triangle_upper = inst.areaK2 - cut->area;
    }
    return est;
}

// ---------------------------------------------------------------------------
// Diagonal scaling and the gluing probe.
// ---------------------------------------------------------------------------

PointQ scale_map(const Rat& lx, const Rat& ly, const PointQ& p) { return {lx * p.x, ly * p.y}; }

RegionQ scale_map(const Rat& lx, const Rat& ly, const RegionQ& r) {
    if (sgn(lx) == 0 || sgn(ly) == 0) throw std::invalid_argument("scale_map: degenerate map");
    if (sgn(lx) > 0 && sgn(ly) > 0) return r.scale(lx, ly);
    std::vector<PointQ> vs;
    for (const auto& v : r.vertices()) vs.push_back(scale_map(lx, ly, v));
    return RegionQ::hull_of(vs);
}

DiskQ scale_map(const Rat& lx, const Rat& ly, const DiskQ& d) {
    return DiskQ(scale_map(lx, ly, d.region()));
}

ScaleCheck scale_map_check(const Step2Instance& inst, const Rat& lx, const Rat& ly) {
    ScaleCheck chk;
    chk.det = lx * ly;
    if (sgn(chk.det) == 0) throw std::invalid_argument("scale_map_check: lambda*mu = 0");
    DiskQ C2h = scale_map(lx, ly, inst.C2);
    const auto& p = inst.step1.p;
    auto scaled = [&](std::vector<PointQ> pts) {
        for (auto& q : pts) q = scale_map(lx, ly, q);
        return pts;
    };
    Rat adet = abs(chk.det);
    Rat h3 = hull_area_of(scaled({p[0], p[5], inst.p7}), C2h);
    Rat h5 = hull_area_of(scaled({p[0], p[1], p[4], p[5], inst.p7}), C2h);
    chk.area_identity_ok = (h3 == adet * inst.areaHprime) && (h5 == adet * inst.areaK2);
    return chk;
}

GlueResult glue_probe(const DiskQ& host, const Step2Instance& base, const Rat& eps, long node_budget) {
    if (sgn(eps) <= 0) throw std::invalid_argument("glue_probe: eps must be positive");

    // Host must have a vertical supporting line touching the x-axis point
    // (R, 0) so the glued half-chain can attach pole-to-pole.
    Rat R(0);
    for (const auto& v : host.region().vertices())
        if (v.x > R) R = v.x;
    bool axis_touch = false;
    for (std::size_t e = 0; e < host.size(); ++e) {
        const PointQ& a = host.vertex(e);
        const PointQ& b = host.vertex(e + 1);
        if (a.x == R && b.x == R && sgn(a.y) * sgn(b.y) <= 0) axis_touch = true;
    }
    if (!axis_touch)
        throw std::invalid_argument("glue_probe: host needs a vertical edge crossing the x-axis");

    Rat W2(0), H2(0);
    for (const auto& v : base.C2.region().vertices()) {
        if (abs(v.x) > W2) W2 = abs(v.x);
        if (abs(v.y) > H2) H2 = abs(v.y);
    }
    // Vertical host extent at the right edge.
    Rat ytop(0);
    for (std::size_t e = 0; e < host.size(); ++e)
        if (host.vertex(e).x == R && abs(host.vertex(e).y) > ytop) ytop = abs(host.vertex(e).y);
    if (sgn(ytop) == 0) throw std::invalid_argument("glue_probe: degenerate vertical host edge");

    // The right half-boundary of C2 in ring order: x1 .. x8 live at indices
    // recovered as the ring walk from the bottom pole to the top pole.
    std::vector<PointQ> chain;
    {
        const auto& ring = base.C2.region().vertices();
        std::size_t n = ring.size();
        // poles are the unique vertices on the y-axis
        std::size_t bottom = 0;
        for (std::size_t i = 0; i < n; ++i)
            if (sgn(ring[i].x) == 0 && sgn(ring[i].y) < 0) bottom = i;
        for (std::size_t i = bottom;; i = (i + 1) % n) {
            chain.push_back(ring[i]);
            if (sgn(ring[i].x) == 0 && sgn(ring[i].y) > 0) break;
        }
    }

    GlueResult out;
    auto try_build = [&](const Rat& lam, const Rat& mu, const Rat& delta0) -> bool {
        // Glued bodies: scaled C2 translated so the poles sit just right of
        // the host's vertical edge.
        Vec2q shift{R + delta0, Rat(0)};
        std::vector<PointQ> pts = host.region().vertices();
        std::vector<PointQ> bump;
        for (const auto& v : base.C2.region().vertices()) bump.push_back(scale_map(lam, mu, v) + shift);
        for (const auto& v : bump) {
            pts.push_back(v);
            pts.push_back(-v);
        }
        RegionQ cand = RegionQ::hull_of(pts);

        // the scaled right half-chain must be exposed, in consecutive order
        std::vector<PointQ> want;
        for (const auto& v : chain) want.push_back(scale_map(lam, mu, v) + shift);
        const auto& cv = cand.vertices();
        std::size_t n = cv.size();
        std::size_t start = n;
        for (std::size_t i = 0; i < n; ++i)
            if (cv[i] == want.front()) start = i;
        if (start == n) return false;
        for (std::size_t k = 0; k < want.size(); ++k)
            if (!(cv[(start + k) % n] == want[k])) return false;

        // Hausdorff certificate: host inside cand, cand within eps of host.
        Rat eps_sq = eps * eps;
        Rat worst(0);
        for (const auto& v : cv) {
            // squared distance from v to the host polygon
            Rat best = sq_dist(v, host.vertex(0));
            for (std::size_t e = 0; e < host.size(); ++e) {
                const PointQ& a = host.vertex(e);
                const PointQ& b = host.vertex(e + 1);
                Vec2q ab = b - a;
                Rat tt = dot(v - a, ab) / dot(ab, ab);
                if (tt < 0) tt = 0;
                if (tt > 1) tt = 1;
                PointQ proj{a.x + ab.x * tt, a.y + ab.y * tt};
                Rat d = sq_dist(v, proj);
                if (d < best) best = d;
            }
            if (host.region().contains(v)) best = Rat(0);
            if (best > worst) worst = best;
        }
        if (worst > eps_sq) return false;
        for (const auto& v : host.region().vertices())
            if (!cand.contains(v)) return false;

        out.glued = DiskQ(cand);
        out.lambda = lam;
        out.mu = mu;
        out.hausdorff_sq = worst;
        out.chain_exposed = true;
        return true;
    };

    // lambda shrinks the chain horizontally into the collar; mu stretches it
    // to nearly the host's vertical extent so the conv bridges attach at the
    // poles.
    bool built = false;
    for (int k = 0; k < 40 && !built; ++k) {
        Rat lam = eps / (4 * (W2 + 1));
        for (int j = 0; j < k; ++j) lam /= 2;
        Rat eta = eps / 8;
        for (int j = 0; j < k / 4; ++j) eta /= 2;
        if (eta > ytop / 2) eta = ytop / 2;
        Rat mu = (ytop - eta) / H2;
        Rat delta0 = eps / 4;
        built = try_build(lam, mu, delta0);
    }
    if (!built) throw std::invalid_argument("glue_probe: eps too small for a rational fit");

    // Re-certify the inscribed-area gap for the scaled body under the glued
    // disk; only the embedded half-chain arcs of C' are used by the bounds.
    out.body = scale_map(out.lambda, out.mu, base.K2);
    GapInput in;
    in.disk = &out.glued;
    in.body = &out.body;
    const auto& p = base.step1.p;
    std::array<PointQ, 7> raw{p[0], p[1], p[2], p[3], p[4], p[5], base.p7};
    for (std::size_t i = 0; i < 7; ++i) in.pts[i] = scale_map(out.lambda, out.mu, raw[i]);
    in.areaH2 = hull_area_of({in.pts[0], in.pts[5], in.pts[6]}, out.glued);
    auto k5 = c_hull(std::vector<PointQ>{in.pts[0], in.pts[1], in.pts[4], in.pts[5], in.pts[6]}, out.glued);
    if (!k5 || !k5->same_region(out.body))
        throw std::logic_error("glue_probe: K' is not recovered as a C'-hull of its generators");
    in.areaK2 = out.body.area();
    in.r7 = Rat(1) / (1 + base.step1.t);
    in.r_candidates = {rat(9, 10), rat(4, 5), rat(3, 4), rat(2, 3), rat(1, 2), rat(1, 3)};
    out.recert = certify_gap(in, node_budget);
    return out;
}

}  // namespace spindle
