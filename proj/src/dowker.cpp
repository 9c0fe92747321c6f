#include "spindle/dowker.hpp"

#include <algorithm>
#include <cmath>
#include <random>
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

Vec2d unit_dir(double phi) { return {std::cos(phi), std::sin(phi)}; }

double ring_area(const std::vector<Vec2d>& ring) {
    double s = 0.0;
    std::size_t n = ring.size();
    for (std::size_t i = 0; i < n; ++i) s += cross(ring[i], ring[(i + 1) % n]);
    return 0.5 * s;
}

}  // namespace

bool polygon_c_convex(const ConvexRegion<double>& K, const UnitDisk<double>& C, const DiskBoundary& db,
                      double tol) {
    if (!K.is_polygon()) return false;
    double scale = 1.0;
    for (const auto& v : K.vertices()) scale = std::max(scale, std::abs(v.x) + std::abs(v.y));
    std::size_t n = K.size();
    for (std::size_t e = 0; e < n; ++e) {
        Vec2d a = K.vertex(e), b = K.vertex(e + 1);
        Vec2d ev = b - a;
        double phi = norm_angle(std::atan2(-ev.x, ev.y));
        auto sup = db.fan().support(phi, 1e-9);
        if (!sup.on_edge) return false;  // C has no side parallel to this edge
        // Supporting translate with its parallel side through this edge.
        Vec2d mid{0.5 * (a.x + b.x), 0.5 * (a.y + b.y)};
        Vec2d x = mid - sup.point;
        if (std::abs(db.gauge(a - x) - 1.0) > tol * scale) return false;
        if (std::abs(db.gauge(b - x) - 1.0) > tol * scale) return false;
        for (const auto& v : K.vertices())
            if (db.gauge(v - x) > 1.0 + tol * scale) return false;
    }
    return true;
}

DowkerEngine::DowkerEngine(ConvexRegion<double> K, UnitDisk<double> C, int m, double length_multiplier)
    : K_(std::move(K)),
      C_(std::make_unique<UnitDisk<double>>(std::move(C))),
      db_(*C_),
      kfan_(),
      len_mult_(length_multiplier) {
    if (!K_.is_polygon()) throw std::invalid_argument("DowkerEngine: K must be a polygon");
    if (m < 8) throw std::invalid_argument("DowkerEngine: m must be >= 8");
    if (!polygon_c_convex(K_, *C_, db_, 1e-7)) throw std::invalid_argument("DowkerEngine: K is not C-convex");
    Vec2d centroid{0, 0};
    for (const auto& v : K_.vertices()) centroid = centroid + v;
    centroid = centroid * (1.0 / static_cast<double>(K_.size()));
    kfan_ = PolyBoundary(K_, centroid);
    areaK_ = K_.area();
    build_samples(m);
    build_disks();
}

void DowkerEngine::build_samples(int m) {
    // Equal subdivision of the outer-normal circle, merged with all vertices
    // of K (cone-midpoint normals), deduplicated by normal angle.
    std::vector<BoundarySample> raw;
    for (int i = 0; i < m; ++i) {
        double phi = kTwoPi * i / m;
        auto sup = kfan_.support(phi, 1e-12);
        raw.push_back({sup.point, phi, sup.bp});
    }
    int nk = kfan_.size();
    for (int i = 0; i < nk; ++i) {
        double phi = kfan_.vertex_cone_mid(i);
        raw.push_back({K_.vertex(i), phi, BPoint{i, 0.0}});
    }
    std::sort(raw.begin(), raw.end(), [](const BoundarySample& a, const BoundarySample& b) { return a.phi < b.phi; });
    for (const auto& s : raw) {
        if (!bp_.samples.empty() && s.phi - bp_.samples.back().phi <= 1e-12) continue;
        bp_.samples.push_back(s);
    }
    // cyclic wrap dedupe
    while (bp_.samples.size() > 1 &&
           kTwoPi - (bp_.samples.back().phi - bp_.samples.front().phi) <= 1e-12)
        bp_.samples.pop_back();
}

void DowkerEngine::build_disks() {
    double diam = 0.0;
    for (const auto& a : K_.vertices())
        for (const auto& b : K_.vertices()) diam = std::max(diam, std::hypot(a.x - b.x, a.y - b.y));
    double tol = 1e-9 * (1.0 + diam);

    disks_.reserve(bp_.samples.size());
    for (const auto& s : bp_.samples) {
        auto theta = db_.fan().support(s.phi, 1e-12);
        Vec2d x = s.point - theta.point;
        Vec2d nhat = unit_dir(s.phi);
        auto worst_gauge = [&](double delta) {
            Vec2d c{x.x + delta * nhat.x, x.y + delta * nhat.y};
            double g = 0.0;
            for (const auto& v : K_.vertices()) g = std::max(g, db_.gauge(v - c));
            return g;
        };
        double g0 = worst_gauge(0.0);
        double delta = 0.0;
        if (g0 > 1.0 + tol) {
            // Convex in delta: ternary-search the minimum, then bisect back
            // toward 0 for the minimal restoring shift.
            double lo = -(diam + 2.0), hi = diam + 2.0;
            for (int it = 0; it < 200; ++it) {
                double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
                if (worst_gauge(m1) <= worst_gauge(m2))
                    hi = m2;
                else
                    lo = m1;
            }
            double dmin = 0.5 * (lo + hi);
            if (worst_gauge(dmin) > 1.0 + tol)
                throw std::domain_error("supporting_disk: no containing translate near Gamma(phi)");
            double bad = 0.0, good = dmin;
            for (int it = 0; it < 100; ++it) {
                double mid = 0.5 * (bad + good);
                if (worst_gauge(mid) <= 1.0 + tol)
                    good = mid;
                else
                    bad = mid;
            }
            delta = good;
            x = {x.x + delta * nhat.x, x.y + delta * nhat.y};
        }
        SupportingDisk d;
        d.phi = s.phi;
        d.center = x;
        d.correction = std::abs(delta);
        d.touch = db_.fan().locate(s.point - x);
        max_correction_ = std::max(max_correction_, d.correction);
        disks_.push_back(d);
    }
}

const ArcTable& DowkerEngine::inscribed_perimeter_table() {
    if (insc_perim_) return *insc_perim_;
    int m = bp_.m();
    ArcTable t(m, -kForbidden);
    for (int i = 0; i < m; ++i) {
        for (int j = i + 1; j < m; ++j) {
            auto r = db_.rho(bp_.samples[i].point, bp_.samples[j].point);
            double v = r ? *r * len_mult_ : -kForbidden;
            t.set(i, j, v);
            t.set(j, i, v);
        }
    }
    insc_perim_ = std::move(t);
    return *insc_perim_;
}

const ArcTable& DowkerEngine::inscribed_area_table() {
    if (insc_area_) return *insc_area_;
    int m = bp_.m();
    ArcTable t(m, -kForbidden);
    for (int i = 0; i < m; ++i) {
        const Vec2d& a = bp_.samples[i].point;
        for (int j = i + 1; j < m; ++j) {
            const Vec2d& b = bp_.samples[j].point;
            auto bl = db_.bulge(a, b);  // equal for both chord directions
            if (!bl) continue;
            double base = 0.5 * cross(a, b);
            t.set(i, j, base + *bl);
            t.set(j, i, -base + *bl);
        }
    }
    insc_area_ = std::move(t);
    return *insc_area_;
}

namespace {

// Ring Gamma_i -> (arc of D_i) -> z -> (arc of D_j) -> Gamma_j -> (bd K
// walked backwards) -> Gamma_i; its area is the lens piece A(phi_i, phi_j).
struct CircumPiece {
    double area = 0.0;
    double perim = 0.0;
    bool ok = false;
};

}  // namespace

const ArcTable& DowkerEngine::circumscribed_area_table() {
    if (!circ_area_) circumscribed_perimeter_table();  // builds both tables
    return *circ_area_;
}

const ArcTable& DowkerEngine::circumscribed_perimeter_table() {
    if (circ_perim_) return *circ_perim_;
    int m = bp_.m();
    ArcTable ta(m, kForbidden);
    ArcTable tp(m, kForbidden);
    double scale = 1.0;
    for (const auto& s : bp_.samples) scale = std::max(scale, std::abs(s.point.x) + std::abs(s.point.y));

    for (int i = 0; i < m; ++i) {
        const auto& si = bp_.samples[i];
        const auto& di = disks_[i];
        for (int j = 0; j < m; ++j) {
            if (i == j) continue;
            const auto& sj = bp_.samples[j];
            const auto& dj = disks_[j];
            double dphi = norm_angle(sj.phi - si.phi);
            if (dphi <= 1e-9 || dphi >= M_PI - 1e-9) continue;  // sentinel stays

            Vec2d v = dj.center - di.center;
            std::vector<Vec2d> ring;
            double perim = 0.0;
            if (std::abs(v.x) + std::abs(v.y) <= 1e-12 * scale) {
                // Same supporting disk: the outer boundary is a single arc.
                perim = db_.clen_ccw(di.touch, dj.touch);
                ring.push_back(si.point);
                std::vector<Vec2d> chain;
                db_.fan().chain_between(di.touch, dj.touch, chain);
                for (const auto& p : chain) ring.push_back(p + di.center);
                ring.push_back(sj.point);
            } else {
                if (db_.gauge(v) >= 2.0 - 1e-9) continue;  // disks no longer overlap near the arc
                auto cr = db_.translate_crossing(v);
                if (!cr) continue;
                Vec2d z1 = di.center + cr->w;
                Vec2d z2 = di.center + (v - cr->w);
                Vec2d nmid = unit_dir(si.phi + 0.5 * dphi);
                Vec2d z = dot(z1, nmid) >= dot(z2, nmid) ? z1 : z2;
                BPoint z_on_i = db_.fan().locate(z - di.center);
                BPoint z_on_j = db_.fan().locate(z - dj.center);
                perim = db_.clen_ccw(di.touch, z_on_i) + db_.clen_ccw(z_on_j, dj.touch);

                ring.push_back(si.point);
                std::vector<Vec2d> chain;
                db_.fan().chain_between(di.touch, z_on_i, chain);
                for (const auto& p : chain) ring.push_back(p + di.center);
                ring.push_back(z);
                chain.clear();
                db_.fan().chain_between(z_on_j, dj.touch, chain);
                for (const auto& p : chain) ring.push_back(p + dj.center);
                ring.push_back(sj.point);
            }
            // back along bd(K) from sample j to sample i
            std::vector<Vec2d> kchain;
            kfan_.chain_between(si.on_k, sj.on_k, kchain);
            for (auto it = kchain.rbegin(); it != kchain.rend(); ++it) ring.push_back(*it);
            double area = ring_area(ring);
            if (area < -1e-6 * (1.0 + scale * scale)) continue;  // inconsistent walk: forbid the pair
            ta.set(i, j, std::max(area, 0.0));
            tp.set(i, j, perim * len_mult_);
        }
    }
    circ_area_ = std::move(ta);
    circ_perim_ = std::move(tp);
    return *circ_perim_;
}

const ArcTable& DowkerEngine::chord_table() {
    if (chord_) return *chord_;
    int m = bp_.m();
    ArcTable t(m, 0.0);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            if (i != j)
                t.set(i, j, C_->gauge(bp_.samples[j].point - bp_.samples[i].point) * len_mult_);
    chord_ = std::move(t);
    return *chord_;
}

const ArcTable& DowkerEngine::tangent_perimeter_table() {
    if (tangent_) return *tangent_;
    int m = bp_.m();
    ArcTable t(m, kForbidden);
    for (int i = 0; i < m; ++i) {
        const auto& si = bp_.samples[i];
        Vec2d ni = unit_dir(si.phi);
        for (int j = 0; j < m; ++j) {
            if (i == j) continue;
            const auto& sj = bp_.samples[j];
            double dphi = norm_angle(sj.phi - si.phi);
            if (dphi <= 1e-9 || dphi >= M_PI - 1e-9) continue;
            Vec2d nj = unit_dir(sj.phi);
            double det = cross(ni, nj);
            if (std::abs(det) < 1e-12) continue;
            double ci = dot(ni, si.point), cj = dot(nj, sj.point);
            Vec2d corner{(ci * nj.y - cj * ni.y) / det, (cj * ni.x - ci * nj.x) / det};
            double f = C_->gauge(corner - si.point) + C_->gauge(sj.point - corner);
            t.set(i, j, f * len_mult_);
        }
    }
    tangent_ = std::move(t);
    return *tangent_;
}

double DowkerEngine::direct_circumscribed_area(const Tiling& t) const {
    std::optional<ConvexRegion<double>> cur =
        C_->region().translate(disks_[t.endpoints.at(0)].center);
    for (std::size_t k = 1; k < t.endpoints.size() && cur; ++k)
        cur = clip_by_region(std::move(cur), C_->region().translate(disks_[t.endpoints[k]].center));
    if (!cur) return 0.0;
    return cur->area();
}

std::optional<double> DowkerEngine::direct_inscribed_hull_area(const Tiling& t) const {
    std::vector<Vec2d> pts;
    for (int e : t.endpoints) pts.push_back(bp_.samples[e].point);
    auto hull = c_hull(pts, *C_);
    if (!hull) return std::nullopt;
    return hull->area();
}

std::optional<double> DowkerEngine::A_hat(int n) {
    auto r = min_tiling(circumscribed_area_table(), n);
    if (!r) return std::nullopt;
    return areaK_ + r->value;
}

std::optional<double> DowkerEngine::a_hat(int n) {
    auto r = max_tiling(inscribed_area_table(), n);
    if (!r) return std::nullopt;
    return r->value;
}

std::optional<double> DowkerEngine::P_hat(int n) {
    auto r = min_tiling(circumscribed_perimeter_table(), n);
    if (!r) return std::nullopt;
    return r->value;
}

std::optional<double> DowkerEngine::p_hat(int n) {
    auto r = max_tiling(inscribed_perimeter_table(), n);
    if (!r) return std::nullopt;
    return r->value;
}

DowkerReport dowker_sequences(const ConvexRegion<double>& K, const UnitDisk<double>& C, int n_min,
                              int n_max, int m) {
    if (n_min < 3 || n_max < n_min) throw std::invalid_argument("dowker_sequences: bad n range");
    DowkerEngine eng(K, C, m);
    DowkerReport rep;
    rep.n_min = n_min;
    rep.n_max = n_max;
    rep.m = eng.boundary().m();
    rep.area_K = eng.area_of_body();
    rep.max_correction = eng.max_correction();
    for (int n = n_min; n <= n_max; ++n) {
        DowkerRow row;
        row.n = n;
        row.A_hat = eng.A_hat(n);
        row.a_hat = eng.a_hat(n);
        row.P_hat = eng.P_hat(n);
        row.p_hat = eng.p_hat(n);
        rep.rows.push_back(row);
    }
    auto second = [&](auto get, int idx) -> std::optional<double> {
        auto a = get(rep.rows[idx - 1]), b = get(rep.rows[idx]), c = get(rep.rows[idx + 1]);
        if (!a || !b || !c) return std::nullopt;
        return *a + *c - 2.0 * *b;
    };
    for (int idx = 1; idx + 1 < static_cast<int>(rep.rows.size()); ++idx) {
        DowkerMargins mg;
        mg.n = rep.rows[idx].n;
        mg.A2 = second([](const DowkerRow& r) { return r.A_hat; }, idx);
        mg.a2 = second([](const DowkerRow& r) { return r.a_hat; }, idx);
        mg.P2 = second([](const DowkerRow& r) { return r.P_hat; }, idx);
        mg.p2 = second([](const DowkerRow& r) { return r.p_hat; }, idx);
        // a^ is the sup-side sequence: concavity asks a2 <= 0.
        if (mg.a2 && rep.rows[idx].a_hat && *mg.a2 > 1e-6 * (1.0 + std::abs(*rep.rows[idx].a_hat)))
            rep.a_hat_concavity_violated = true;
        rep.margins.push_back(mg);
    }
    return rep;
}

SymmetricDowkerResult symmetric_dowker(const ConvexRegion<double>& K, const UnitDisk<double>& C, int n,
                                       int k, DowkerQuantity which, int m) {
    if (k < 1) throw std::invalid_argument("symmetric_dowker: k must be >= 1");
    if (n % k != 0) throw std::invalid_argument("symmetric_dowker: k must divide n");
    DowkerEngine eng(K, C, m);

    Sense sense = (which == DowkerQuantity::InscribedPerim || which == DowkerQuantity::InscribedArea)
                      ? Sense::Max
                      : Sense::Min;
    const ArcTable* table = nullptr;
    switch (which) {
        case DowkerQuantity::CircumArea: table = &eng.circumscribed_area_table(); break;
        case DowkerQuantity::CircumPerim: table = &eng.circumscribed_perimeter_table(); break;
        case DowkerQuantity::InscribedPerim: table = &eng.inscribed_perimeter_table(); break;
        case DowkerQuantity::InscribedArea: table = &eng.inscribed_area_table(); break;
    }
    auto offset = [&](double v) {
        return which == DowkerQuantity::CircumArea ? v + eng.area_of_body() : v;
    };

    auto unrestricted = optimize_tiling(*table, n, sense);
    if (!unrestricted) throw std::domain_error("symmetric_dowker: infeasible");
    SymmetricDowkerResult res;
    res.unrestricted = offset(unrestricted->value);
    if (k == 1) {
        res.symmetric_value = res.unrestricted;
        res.tiling = unrestricted->tiling;
        return res;
    }
    int mm = eng.boundary().m();
    if (mm % k != 0)
        throw std::invalid_argument("symmetric_dowker: sample count not divisible by k");
    auto sym = symmetrize(*table, n, k, sense);
    res.symmetric_value = offset(sym.value);
    res.tiling = sym.tiling;
    return res;
}

ScalingProbe scaling_limit_probe(const ConvexRegion<double>& K, const UnitDisk<double>& C, int n,
                                 const std::vector<double>& lambdas, int m) {
    ScalingProbe probe;
    {
        DowkerEngine base(K, C, m);
        auto pb = max_tiling(base.chord_table(), n);
        auto Pb = min_tiling(base.tangent_perimeter_table(), n);
        if (!pb || !Pb) throw std::domain_error("scaling_limit_probe: straight DP infeasible");
        probe.p_bar = pb->value;
        probe.P_bar = Pb->value;
    }
    for (double lam : lambdas) {
        if (lam < 1.0) throw std::invalid_argument("scaling_limit_probe: lambda must be >= 1");
        DowkerEngine eng(K, C.scaled(lam), m, lam);
        ScalingProbeRow row;
        row.lambda = lam;
        auto ph = eng.p_hat(n);
        auto Ph = eng.P_hat(n);
        if (!ph || !Ph) throw std::domain_error("scaling_limit_probe: scaled pipeline infeasible");
        row.p_hat = *ph;
        row.P_hat = *Ph;
        probe.rows.push_back(row);
    }
    return probe;
}

ConvexRegion<double> random_translate_intersection(const UnitDisk<double>& C, int count,
                                                   double shift_radius, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(-shift_radius, shift_radius);
    while (true) {
        std::optional<ConvexRegion<double>> cur;
        for (int i = 0; i < count; ++i) {
            Vec2d s{U(rng), U(rng)};
            if (s.x * s.x + s.y * s.y > shift_radius * shift_radius) {
                --i;
                continue;
            }
            auto t = C.region().translate(s);
            cur = cur ? clip_by_region(std::move(cur), t) : std::optional<ConvexRegion<double>>(t);
            if (!cur) break;
        }
        if (cur && cur->is_polygon() && cur->area() > 0.2 * C.region().area()) return *cur;
    }
}

}  // namespace spindle
