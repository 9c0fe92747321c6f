#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "spindle/tiling.hpp"

using namespace spindle;

namespace {

// f = Euclidean chord length between equally spaced points on the unit circle.
ArcTable chord_table(int m) {
    ArcTable t(m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            if (i == j) continue;
            double ai = 2 * M_PI * i / m, aj = 2 * M_PI * j / m;
            t.set(i, j, std::hypot(std::cos(aj) - std::cos(ai), std::sin(aj) - std::sin(ai)));
        }
    return t;
}

// f = CCW angular length; every n-tiling sums to 2*pi.
ArcTable angle_table(int m) {
    ArcTable t(m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            if (i == j) continue;
            int d = ((j - i) % m + m) % m;
            t.set(i, j, 2 * M_PI * d / m);
        }
    return t;
}

// Random table with dyadic values so double sums of <= m terms are exact.
ArcTable random_dyadic_table(std::mt19937_64& rng, int m) {
    std::uniform_int_distribution<int> v(-2048, 2048);
    ArcTable t(m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            if (i != j) t.set(i, j, v(rng) / 1024.0);
    return t;
}

// Monge family: concave function of arc length plus an additive potential
// a(i) + b(j), which cancels in every quadrangle difference.
ArcTable random_monge_table(std::mt19937_64& rng, int m) {
    std::uniform_int_distribution<int> inc(1, 64);
    std::vector<double> phi(m + 1, 0.0);
    std::vector<int> incs(m);
    for (int d = 0; d < m; ++d) incs[d] = inc(rng);
    std::sort(incs.begin(), incs.end(), std::greater<int>());
    for (int d = 1; d <= m; ++d) phi[d] = phi[d - 1] + incs[d - 1] / 1024.0;
    std::uniform_int_distribution<int> pot(-512, 512);
    std::vector<double> a(m), b(m);
    for (int i = 0; i < m; ++i) a[i] = pot(rng) / 1024.0;
    for (int j = 0; j < m; ++j) b[j] = pot(rng) / 1024.0;
    ArcTable t(m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            if (i == j) continue;
            int d = ((j - i) % m + m) % m;
            t.set(i, j, phi[d] + a[i] + b[j]);
        }
    return t;
}

}  // namespace

TEST_CASE("chord table optima on the 4-point grid") {
    auto t = chord_table(4);
    auto m3 = max_tiling(t, 3);
    REQUIRE(m3);
    CHECK(m3->value == doctest::Approx(2 + 2 * std::sqrt(2.0)).epsilon(1e-12));
    CHECK(m3->tiling.endpoints == std::vector<int>{0, 1, 2});

    auto m4 = max_tiling(t, 4);
    REQUIRE(m4);
    CHECK(m4->value == doctest::Approx(4 * std::sqrt(2.0)).epsilon(1e-12));
    CHECK(m4->tiling.endpoints == std::vector<int>{0, 1, 2, 3});

    // All 3-subsets of the square grid tie; min picks the same lex witness.
    auto n3 = min_tiling(t, 3);
    REQUIRE(n3);
    CHECK(n3->value == doctest::Approx(2 + 2 * std::sqrt(2.0)).epsilon(1e-12));
    CHECK(n3->tiling.endpoints == std::vector<int>{0, 1, 2});
}

TEST_CASE("angle table: every tiling closes the circle") {
    auto t = angle_table(12);
    for (int n : {3, 5, 12}) {
        auto r = max_tiling(t, n);
        REQUIRE(r);
        CHECK(r->value == doctest::Approx(2 * M_PI).epsilon(1e-12));
    }
    auto zero = ArcTable(9, 0.0);
    auto r = min_tiling(zero, 4);
    REQUIRE(r);
    CHECK(r->value == 0.0);
}

TEST_CASE("parameter validation") {
    auto t = chord_table(6);
    CHECK_THROWS_AS(max_tiling(t, 2), std::invalid_argument);
    CHECK_THROWS_AS(max_tiling(t, 7), std::invalid_argument);
}

TEST_CASE("DP equals brute force exactly on random tables") {
    std::mt19937_64 rng(1234);
    std::uniform_int_distribution<int> md(5, 12), nd(3, 5);
    for (int it = 0; it < 60; ++it) {
        int m = md(rng);
        int n = std::min(nd(rng), m);
        auto t = random_dyadic_table(rng, m);
        for (auto sense : {Sense::Max, Sense::Min}) {
            auto dp = optimize_tiling(t, n, sense);
            auto bf = oracle::brute_force_tiling(t, n, sense);
            REQUIRE(dp.has_value() == bf.has_value());
            if (dp) {
                CHECK(dp->value == bf->value);  // bitwise, same fold order
                CHECK(dp->tiling.endpoints == bf->tiling.endpoints);
            }
        }
    }
}

TEST_CASE("sentinel arcs are respected") {
    // Arcs longer than half the circle forbidden: n=3 on m=6 still feasible.
    int m = 6;
    auto t = chord_table(m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            int d = ((j - i) % m + m) % m;
            if (d > m / 2) t.set(i, j, kForbidden);
        }
    auto dp = min_tiling(t, 3);
    auto bf = oracle::brute_force_tiling(t, 3, Sense::Min);
    REQUIRE(dp);
    REQUIRE(bf);
    CHECK(dp->value == bf->value);
    CHECK(dp->tiling.endpoints == bf->tiling.endpoints);

    // Everything forbidden: infeasible.
    ArcTable dead(5, kForbidden);
    CHECK(!max_tiling(dead, 3));
}

TEST_CASE("monge_check on structured tables") {
    SUBCASE("chord length is max-sense Monge") {
        auto rep = monge_check(chord_table(24), Sense::Max);
        CHECK(rep.exhaustive);
        CHECK(rep.worst_margin >= -1e-12);
    }
    SUBCASE("single-arc indicator violates") {
        ArcTable t(8, 0.0);
        t.set(2, 5, 1.0);
        auto rep = monge_check(t, Sense::Max);
        CHECK(rep.worst_margin < 0);
    }
    SUBCASE("angle table is Monge with equality in both senses") {
        auto ta = angle_table(16);
        CHECK(std::abs(monge_check(ta, Sense::Max).worst_margin) <= 1e-12);
        CHECK(std::abs(monge_check(ta, Sense::Min).worst_margin) <= 1e-12);
    }
    SUBCASE("mixed difference field is populated") {
        auto rep = monge_check(chord_table(12), Sense::Max);
        int defined = 0;
        for (double v : rep.mixed_diff)
            if (!std::isnan(v)) {
                ++defined;
                CHECK(v >= -1e-12);
            }
        CHECK(defined > 0);
    }
}

TEST_CASE("Monge tables give concave max / convex min sequences, exactly") {
    std::mt19937_64 rng(777);
    for (int it = 0; it < 50; ++it) {
        int m = 8 + static_cast<int>(rng() % 5);
        auto t = random_monge_table(rng, m);
        REQUIRE(monge_check(t, Sense::Max).passes(0.0));
        std::vector<double> M;
        for (int n = 3; n <= m; ++n) {
            auto r = max_tiling(t, n);
            REQUIRE(r);
            M.push_back(r->value);
        }
        for (std::size_t i = 1; i + 1 < M.size(); ++i) CHECK(M[i - 1] + M[i + 1] <= 2 * M[i]);

        // Negated table is min-sense Monge with convex m_n.
        ArcTable neg(m);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
                if (i != j) neg.set(i, j, -t.at(i, j));
        REQUIRE(monge_check(neg, Sense::Min).passes(0.0));
        std::vector<double> mn;
        for (int n = 3; n <= m; ++n) mn.push_back(min_tiling(neg, n)->value);
        for (std::size_t i = 1; i + 1 < mn.size(); ++i) CHECK(mn[i - 1] + mn[i + 1] >= 2 * mn[i]);
    }
}

TEST_CASE("uncross basics") {
    auto t = chord_table(8);
    SUBCASE("interleaved tilings come back unchanged") {
        Tiling a{{0, 2, 4, 6}};
        Tiling b{{1, 3, 5, 7}};
        auto r = uncross(a, b, t);
        CHECK(r.steps == 0);
        CHECK(r.sum_after == r.sum_before);
        CHECK(r.first.endpoints == a.endpoints);
        CHECK(r.second.endpoints == b.endpoints);
    }
    SUBCASE("evenly spread 3 and 5 arcs on the chord table") {
        Tiling a{{0, 3, 5}};
        Tiling b{{0, 1, 2, 4, 6}};
        auto r = uncross(a, b, t);
        CHECK(r.first.valid(8));
        CHECK(r.second.valid(8));
        CHECK(r.monge_ok);
        CHECK(r.sum_after >= r.sum_before - 1e-12);
    }
    SUBCASE("nested endpoint sets (A subset of B)") {
        auto t6 = chord_table(6);
        Tiling a{{0, 2, 4}};
        Tiling b{{0, 1, 2, 3, 4}};
        auto r = uncross(a, b, t6);
        CHECK(r.first.valid(6));
        CHECK(r.second.valid(6));
        CHECK(r.sum_after >= r.sum_before - 1e-12);
    }
}

TEST_CASE("uncross never decreases the sum on Monge tables") {
    std::mt19937_64 rng(2718);
    for (int it = 0; it < 50; ++it) {
        int m = 8 + static_cast<int>(rng() % 5);
        auto t = random_monge_table(rng, m);
        std::uniform_int_distribution<int> nd(4, std::min(6, m - 1));
        int n = nd(rng);
        if (n + 1 > m) continue;
        auto pick = [&](int count) {
            std::vector<int> all(m);
            for (int i = 0; i < m; ++i) all[i] = i;
            std::shuffle(all.begin(), all.end(), rng);
            all.resize(count);
            std::sort(all.begin(), all.end());
            return Tiling{all};
        };
        Tiling a = pick(n - 1), b = pick(n + 1);
        auto r = uncross(a, b, t);
        CHECK(r.first.n() == n);
        CHECK(r.second.n() == n);
        CHECK(r.steps <= 4 * n * n);
        CHECK(r.sum_after >= r.sum_before - 1e-12);
    }
}

TEST_CASE("symmetrize") {
    SUBCASE("rotation-invariant chord table, k = n = m/2") {
        auto t = chord_table(8);
        auto r = symmetrize(t, 4, 4, Sense::Max);
        CHECK(r.value == doctest::Approx(r.unrestricted).epsilon(1e-12));
        // k-fold symmetric witness
        for (int e : r.tiling.endpoints) CHECK(std::count(r.tiling.endpoints.begin(), r.tiling.endpoints.end(), (e + 2) % 8) == 1);
    }
    SUBCASE("k=2, n=4, m=8 chord table") {
        auto t = chord_table(8);
        auto r = symmetrize(t, 4, 2, Sense::Max);
        CHECK(r.value == doctest::Approx(r.unrestricted).epsilon(1e-12));
    }
    SUBCASE("angle table: any symmetric tiling closes to 2*pi") {
        auto t = angle_table(12);
        auto r = symmetrize(t, 6, 3, Sense::Min);
        CHECK(r.value == doctest::Approx(2 * M_PI).epsilon(1e-12));
    }
    SUBCASE("precondition violations") {
        auto t = chord_table(8);
        CHECK_THROWS_AS(symmetrize(t, 4, 3, Sense::Max), std::invalid_argument);  // k does not divide n
        CHECK_THROWS_AS(symmetrize(chord_table(10), 4, 4, Sense::Max), std::invalid_argument);  // m % k
        auto skew = chord_table(8);
        skew.set(0, 1, 17.0);  // break rotation invariance
        CHECK_THROWS_AS(symmetrize(skew, 4, 2, Sense::Max), std::invalid_argument);
    }
}

TEST_CASE("csv round trip") {
    auto t = chord_table(5);
    t.set(1, 3, kForbidden);
    std::stringstream ss;
    t.write_csv(ss);
    auto u = ArcTable::read_csv(ss);
    REQUIRE(u.m() == 5);
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) {
            if (std::isinf(t.at(i, j)))
                CHECK(std::isinf(u.at(i, j)));
            else
                CHECK(t.at(i, j) == u.at(i, j));
        }
}
