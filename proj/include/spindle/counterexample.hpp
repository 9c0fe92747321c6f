#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "spindle/geom.hpp"
#include "spindle/rational.hpp"

namespace spindle {

// Exact construction and certification of the inscribed-area counterexample:
// the 14-gon disk C1 with the hexagon H and octagon K1, the widened disk C2
// with K2 = conv(K1 u {p7}), the inscribed-area gap certificate
// a3 + a5 > 2*a4, the diagonal scaling map and the boundary-gluing probe.
// Everything here runs on exact rationals.

using PointQ = Point2<Rat>;
using RegionQ = ConvexRegion<Rat>;
using DiskQ = UnitDisk<Rat>;

struct Step1Instance {
    Rat t;
    Rat L;                        // chain edge multiplier (lambda1 = lambda2 = lambda3 = L)
    std::array<PointQ, 6> p;      // p1..p6
    std::array<PointQ, 4> q;      // q1..q4
    RegionQ H;                    // hexagon [p1,q1,q2,p6,q3,q4]
    RegionQ K1;                   // octagon [p1,p2,...,p6,q3,q4]
    DiskQ C1;                     // o-symmetric 14-gon
    std::vector<std::pair<PointQ, PointQ>> G;  // edges of bd(K1) not on bd(H)
    Rat areaH, areaK1;
    Rat D1_sq;                    // squared Euclidean diameter of K1
};

// Smallest integer multiplier L with 2*L^2 > D1(t)^2 (the binding edge is the
// diagonal chain edge of length L*sqrt(2)).
Rat default_chain_multiplier(const Rat& t);

// Builds the Step-1 instance; throws std::invalid_argument naming the
// violated condition when t or L are out of range.
Step1Instance build_step1(const Rat& t, const Rat& L = Rat(0));

// The corner hull [p1,p5,p6]_C1 carries a forced vertical boundary strip (a
// full translate of [p3,p4] with corners (t+1,0) and (t+1,2)), so its exact
// area is (areaH+areaK1)/2 - 1; the -2 constant sometimes quoted for this
// corner value omits that strip. Both constants are evaluated and reported;
// the certificate's `holds` uses the sharp bound 2*max_g <= areaH+areaK1-2,
// which is tight at q = p5.
struct Step1Certificate {
    bool holds = false;
    Rat max_g;  // exact max over q in G of area([p1,q,p6]_C1)
    PointQ argmax_q;
    Rat case1_value;    // g(pbar), pbar = midpoint of [p3,p4]
    Rat case1_formula;  // areaH + (3/2)t + 3
    bool case1_ok = false;
    Rat corner_value;            // g(p5)
    Rat corner_formula_sharp;    // (areaH + areaK1)/2 - 1
    Rat corner_formula_quoted;   // (areaH + areaK1)/2 - 2
    bool corner_sharp_ok = false;
    bool corner_quoted_ok = false;  // expected false: the strip is missing from that count
    Rat sum_bound_sharp;    // areaH + areaK1 - 2;  2*max_g <= this holds with equality
    Rat sum_bound_quoted;   // areaH + areaK1 - 4;  recorded for comparison
    bool sharp_ok = false;
    bool quoted_ok = false;
    bool hull_H_ok = false;   // [p1,p6]_C1 == H
    bool hull_K1_ok = false;  // [p1,p2,p5,p6]_C1 == K1
    int cells = 0;            // parametric cells certified across the swept edges
};

// Exact certification of the Step-1 inequality: sweeps q over the three
// boundary edges of G with nonnegative y (the rest follows by the verified
// mirror symmetry), cell by cell with exact breakpoints, maximizing the
// per-cell quadratic area exactly.
Step1Certificate certify_step1(const Step1Instance& inst);

struct Step2Instance {
    Step1Instance step1;
    Rat s;
    Rat mu_a, mu_b;  // long-edge multipliers ([w1,w2] along p5-p7, [w2,w3] along p6-p7)
    PointQ p7;
    RegionQ K2;      // conv(K1 u {p7})
    DiskQ C2;
    PointQ u;        // offset of the embedded right half-chain of C1
    RegionQ Hprime;  // [p1,p6,p7]_C2
    Rat areaK2, areaHprime;
    Rat D2_sq;
    bool hull_Hprime_matches_conv = false;  // Hprime == conv(H u {p7})
    bool hull_K2_ok = false;                // [p1,p2,p5,p6,p7]_C2 == K2
};

// Builds the Step-2 instance. Feasibility requires s > 21(1+t) (the long-edge
// slopes must slot below the chain's first edge); violations throw with the
// binding constraint. mu_a/mu_b default to the smallest integers making the
// long edges longer than the Euclidean diameter of K2.
Step2Instance build_step2(const Rat& t, const Rat& s, const Rat& L = Rat(0), const Rat& mu_a = Rat(0),
                          const Rat& mu_b = Rat(0));

struct Step2Certificate {
    enum class Status { Holds, Fails, Inconclusive };
    Status status = Status::Inconclusive;
    Rat a3_lb, a5_lb;   // exact witness hull areas
    Rat a4_ub;          // certified upper bound (branch and bound + exclusion cuts)
    Rat a4_lb;          // incumbent witness value (consistency: a4_ub >= a4_lb)
    Rat margin;         // a3_lb + a5_lb - 2*a4_ub  (> 0 certifies the gap)
    long nodes = 0;
    std::string note;
};

Step2Certificate certify_step2(const Step2Instance& inst, long node_budget = 60000);

struct SearchAttempt {
    Rat t, s;
    std::string outcome;  // "infeasible: ...", "holds", "inconclusive", "fails"
    double margin = 0.0;
};

struct SearchResult {
    bool found = false;
    Rat t, s;
    std::optional<Step2Instance> instance;
    std::optional<Step2Certificate> certificate;
    std::vector<SearchAttempt> log;
};

// Doubles s from (t0, s0) until certify_step2 holds or the doubling budget is
// exhausted. Deterministic.
SearchResult search_step2(const Rat& t0 = Rat(10), const Rat& s0 = Rat(20), int max_doublings = 12,
                          long node_budget = 60000);

// Inscribed-area estimator for n in {3,4,5}: seeded boundary configurations
// plus per-vertex golden-section refinement in floating point, with the final
// witness snapped to rationals and re-evaluated exactly.
struct InscribedAreaEstimate {
    Rat value;  // exact hull area of the returned witness (a certified lower bound)
    std::vector<PointQ> witness;
    std::optional<Rat> outside_triangle_upper;  // n=4: bound when no vertex enters the p7 triangle
};

InscribedAreaEstimate estimate_inscribed_area(const Step2Instance& inst, int n, int grid = 256,
                                              int golden_iters = 64);

// Diagonal map h_{lx,ly}(x,y) = (lx*x, ly*y); lx*ly != 0.
PointQ scale_map(const Rat& lx, const Rat& ly, const PointQ& p);
RegionQ scale_map(const Rat& lx, const Rat& ly, const RegionQ& r);
DiskQ scale_map(const Rat& lx, const Rat& ly, const DiskQ& d);

struct ScaleCheck {
    Rat det;                 // lx*ly
    bool area_identity_ok = false;  // hull areas scale by |det| on the step-2 witnesses
};

ScaleCheck scale_map_check(const Step2Instance& inst, const Rat& lx, const Rat& ly);

struct GlueResult {
    DiskQ glued;            // C' : host with two scaled half-chains exposed in its boundary
    RegionQ body;           // K' = h(K2)
    Rat lambda, mu;         // applied diagonal scales
    Rat hausdorff_sq;       // certified max squared distance from C' to the host (<= eps^2)
    bool chain_exposed = false;
    Step2Certificate recert;
};

// Scales the certified counterexample until a translate of its right
// half-boundary fits in the eps-collar of the host disk, glues it into the
// host, and re-certifies the inscribed-area gap for the scaled body under the
// glued disk. Throws when eps is nonpositive or too small for a rational fit.
GlueResult glue_probe(const DiskQ& host, const Step2Instance& base, const Rat& eps,
                      long node_budget = 60000);

}  // namespace spindle
