#pragma once

#include <array>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace spindle {

// Generic optimizer over n-element tilings of a discretized circle.
// Geometry enters only through the ArcTable; everything here works on index
// grids. Values are doubles; the DP recursion order is fixed (suffix sums,
// smallest anchor first, ascending scans with strict improvement) so results
// are bit-reproducible and the lexicographically smallest optimal endpoint
// sequence is returned.

constexpr double kForbidden = std::numeric_limits<double>::infinity();

// Values on directed CCW arcs (i,j), i != j, of an m-point cyclic grid.
// f(i,i) = 0 by convention. +inf / -inf mark arcs the geometry forbids; the
// DP skips them (+inf in min sense, -inf in max sense).
class ArcTable {
  public:
    ArcTable() = default;
    explicit ArcTable(int m, double init = 0.0);

    int m() const { return m_; }
    double at(int i, int j) const { return f_[static_cast<std::size_t>(mod(i)) * m_ + mod(j)]; }
    void set(int i, int j, double v);

    // True when f(i+s, j+s) == f(i,j) for all arcs, within tol.
    bool rotation_invariant(int s, double tol) const;

    static ArcTable read_csv(std::istream& in);
    void write_csv(std::ostream& out) const;

  private:
    int mod(int i) const { return ((i % m_) + m_) % m_; }
    int m_ = 0;
    std::vector<double> f_;
};

// Endpoints of an n-arc tiling, strictly increasing in [0, m).
struct Tiling {
    std::vector<int> endpoints;

    int n() const { return static_cast<int>(endpoints.size()); }
    bool valid(int m) const;
};

enum class Sense { Max, Min };

struct TilingOpt {
    Tiling tiling;
    double value = 0.0;
};

// Canonical value of a tiling: right-fold f(e0,e1) + (f(e1,e2) + (... +
// f(e_{n-1}, e0))). The DP and any oracle comparing against it must use the
// same association for bitwise equality.
double tiling_value(const Tiling& t, const ArcTable& table);

// Optimal n-tiling. Throws std::invalid_argument unless 3 <= n <= m. Returns
// nullopt when every n-tiling hits a forbidden arc.
std::optional<TilingOpt> optimize_tiling(const ArcTable& table, int n, Sense sense);

inline std::optional<TilingOpt> max_tiling(const ArcTable& t, int n) { return optimize_tiling(t, n, Sense::Max); }
inline std::optional<TilingOpt> min_tiling(const ArcTable& t, int n) { return optimize_tiling(t, n, Sense::Min); }

// Monge (quadrangle) condition check. Max sense: for cyclically ordered
// x1,x2,x3,x4, f(x1x3)+f(x2x4) >= f(x1x4)+f(x2x3); min sense reversed.
// Exhaustive for m <= 64, random-sampled above. Also emits the discrete
// second mixed difference field D(i,j) = f(i,j)+f(i+1,j+1)-f(i+1,j)-f(i,j+1),
// the finite-difference analogue of (d_p d_q f); max sense needs D >= 0.
struct MongeReport {
    Sense sense = Sense::Max;
    double worst_margin = 0.0;            // min over checked quadruples (>= 0 iff condition holds)
    std::array<int, 4> worst_quad{};      // cyclic witness
    long long checked = 0;
    bool exhaustive = true;
    std::vector<double> mixed_diff;       // m*m, NaN where undefined
    int m = 0;

    bool passes(double tol = 0.0) const { return worst_margin >= -tol; }
};

MongeReport monge_check(const ArcTable& table, Sense sense, unsigned sample_seed = 12345);

// Covering-pair uncrossing: merges an (n-1)- and an (n+1)-tiling into a
// 2-tiling, replaces covering pairs until none remain, and splits the result
// into two n-tilings. Under the max-sense Monge condition the value sum never
// decreases; on non-Monge tables the procedure still terminates but the
// inequality is not guaranteed (monge_ok reports which happened).
struct UncrossResult {
    Tiling first, second;
    double sum_before = 0.0;
    double sum_after = 0.0;
    int steps = 0;
    bool monge_ok = true;  // sum_after >= sum_before - tiny
};

UncrossResult uncross(const Tiling& a, const Tiling& b, const ArcTable& table);

// k-fold symmetrization: rotates the unrestricted optimum into a k-fold
// k-tiling, uncrosses it, and reads off a k-fold symmetric tiling with the
// same optimal value. Requires k >= 2, k | n, k | m and a table invariant
// under rotation by m/k.
struct SymmetrizeResult {
    Tiling tiling;
    double value = 0.0;
    double unrestricted = 0.0;
    int uncross_steps = 0;
};

SymmetrizeResult symmetrize(const ArcTable& table, int n, int k, Sense sense);

}  // namespace spindle
