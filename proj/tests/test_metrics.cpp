#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "spindle/metrics.hpp"

using namespace spindle;

namespace {

UnitDisk<Rat> unit_square() {
    return UnitDisk<Rat>(ConvexRegion<Rat>::from_ccw(
        {{rat(1), rat(-1)}, {rat(1), rat(1)}, {rat(-1), rat(1)}, {rat(-1), rat(-1)}}));
}

UnitDisk<double> smooth_proxy(int n = 64) { return UnitDisk<double>(regular_polygon(n)); }

Vec2d on_circle(double r, double a) { return {r * std::cos(a), r * std::sin(a)}; }

}  // namespace

TEST_CASE("c_length basics") {
    auto sq = unit_square();
    Polyline<Rat> seg{{{rat(0), rat(0)}, {rat(1), rat(0)}}, false};
    CHECK(c_length(seg, sq) == rat(1));

    Polyline<Rat> boundary{{{rat(0), rat(0)}, {rat(1), rat(0)}, {rat(1), rat(1)}, {rat(0), rat(1)}}, true};
    CHECK(c_length(boundary, sq) == rat(4));

    // Euclidean 64-gon proxy: the unit square boundary has C-length ~ 4.
    auto C = smooth_proxy();
    Polyline<double> bd{{{0, 0}, {1, 0}, {1, 1}, {0, 1}}, true};
    CHECK(c_length(bd, C) == doctest::Approx(4.0).epsilon(0.005));
}

TEST_CASE("perim_c conventions") {
    auto sq = unit_square();
    CHECK(perim_c(sq.region(), sq) == rat(8));
    CHECK(perim_c(ConvexRegion<Rat>::point({rat(2), rat(2)}), sq) == rat(0));
    CHECK(perim_c(ConvexRegion<Rat>::segment({rat(0), rat(0)}, {rat(1), rat(0)}), sq) == rat(2));
}

TEST_CASE("perim_c is monotone under inclusion") {
    std::mt19937_64 rng(4242);
    auto sq = unit_square();
    for (int it = 0; it < 40; ++it) {
        auto P = oracle::random_convex_polygon(rng);
        auto Q = oracle::random_convex_polygon(rng);
        auto I = intersect(P, Q);
        if (!I || !I->is_polygon()) continue;
        CHECK(sgn(perim_c(P, sq) - perim_c(*I, sq)) >= 0);
    }
}

TEST_CASE("arc distance on the square") {
    auto sq = unit_square();
    CHECK(arc_distance<Rat>({rat(0), rat(0)}, {rat(1), rat(0)}, sq) == rat(1));
    CHECK(arc_distance<Rat>({rat(0), rat(0)}, {rat(1), rat(1)}, sq) == rat(2));
    CHECK(arc_distance<Rat>({rat(3), rat(7)}, {rat(3), rat(7)}, sq) == rat(0));
    CHECK_THROWS_AS(arc_distance<Rat>({rat(0), rat(0)}, {rat(5), rat(0)}, sq), std::domain_error);
}

TEST_CASE("arc distance is symmetric") {
    std::mt19937_64 rng(99);
    int done = 0;
    while (done < 40) {
        auto C = oracle::random_disk(rng);
        Point2<Rat> x{oracle::random_rat(rng, 4, 3), oracle::random_rat(rng, 4, 3)};
        Vec2q d{oracle::random_rat(rng, 8, 6), oracle::random_rat(rng, 8, 6)};
        Point2<Rat> y = x + d;
        if (sgn(C.gauge(d) - rat(2)) >= 0 || sgn(C.gauge(d)) == 0) continue;
        CHECK(arc_distance(x, y, C) == arc_distance(y, x, C));
        ++done;
    }
}

TEST_CASE("triangle inequality, interior and boundary cases (exact)") {
    std::mt19937_64 rng(71);
    int interior = 0, boundary = 0;
    while (interior < 30 || boundary < 30) {
        auto C = oracle::random_disk(rng);
        Point2<Rat> x{oracle::random_rat(rng, 4, 3), oracle::random_rat(rng, 4, 3)};
        Vec2q d{oracle::random_rat(rng, 8, 6), oracle::random_rat(rng, 8, 6)};
        Point2<Rat> z = x + d;
        Rat g = C.gauge(d);
        if (sgn(g) == 0 || sgn(g - rat(2)) >= 0) continue;
        auto sp = c_spindle(x, z, C);
        REQUIRE(sp.region);
        Rat rho_xz = arc_distance(x, z, C);

        if (interior < 30 && sp.region->is_polygon()) {
            // Centroid of the spindle lies in its interior.
            Rat cx(0), cy(0);
            for (const auto& v : sp.region->vertices()) {
                cx += v.x;
                cy += v.y;
            }
            Point2<Rat> y{cx / rat(static_cast<long>(sp.region->size())),
                          cy / rat(static_cast<long>(sp.region->size()))};
            // rho_C(x,y) + rho_C(y,z) <= rho_C(x,z) for y inside the spindle
            CHECK(sgn(rho_xz - arc_distance(x, y, C) - arc_distance(y, z, C)) >= 0);
            ++interior;
        }
        if (boundary < 30) {
            // A spindle vertex is on the boundary: equality.
            Point2<Rat> y = sp.region->vertex(sp.region->size() / 2);
            CHECK(arc_distance(x, y, C) + arc_distance(y, z, C) == rho_xz);
            ++boundary;
        }
    }
}

TEST_CASE("triangle inequality outside the spindle on a smooth proxy") {
    auto C = smooth_proxy();
    std::mt19937_64 rng(123);
    std::uniform_real_distribution<double> ang(0.0, 2 * M_PI), rad(0.4, 0.95);
    int done = 0;
    while (done < 60) {
        Vec2d x = on_circle(rad(rng), ang(rng));
        Vec2d z = on_circle(rad(rng), ang(rng));
        Vec2d y = on_circle(rad(rng), ang(rng));
        if (C.gauge(z - x) >= 1.9 || C.gauge(z - x) < 1e-6) continue;
        if (C.gauge(y - x) >= 1.9 || C.gauge(y - z) >= 1.9) continue;
        auto sp = c_spindle(x, z, C);
        REQUIRE(sp.region);
        if (sp.region->contains(y)) continue;  // want the exterior case
        double lhs = arc_distance(x, y, C) + arc_distance(y, z, C);
        double rhs = arc_distance(x, z, C);
        CHECK(lhs >= rhs * (1.0 - 1e-7));
        ++done;
    }
}

TEST_CASE("quadrangle inequality on a smooth proxy") {
    auto C = smooth_proxy();
    std::mt19937_64 rng(321);
    std::uniform_real_distribution<double> ang(0.0, 2 * M_PI);
    int done = 0;
    while (done < 60) {
        double a[4] = {ang(rng), ang(rng), ang(rng), ang(rng)};
        std::sort(a, a + 4);
        if (a[1] - a[0] < 0.05 || a[2] - a[1] < 0.05 || a[3] - a[2] < 0.05 || 2 * M_PI - (a[3] - a[0]) < 0.05)
            continue;
        // Boundary points of C itself are in C-convex position.
        Vec2d p = C.support_point(on_circle(1.0, a[0]));
        Vec2d q = C.support_point(on_circle(1.0, a[1]));
        Vec2d r = C.support_point(on_circle(1.0, a[2]));
        Vec2d s = C.support_point(on_circle(1.0, a[3]));
        double lhs = arc_distance(p, q, C) + arc_distance(r, s, C);
        double rhs = arc_distance(p, r, C) + arc_distance(q, s, C);
        CHECK(lhs <= rhs * (1.0 + 1e-7) + 1e-12);
        ++done;
    }
}
