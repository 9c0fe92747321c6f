#pragma once

#include <optional>
#include <vector>

#include "spindle/geom.hpp"

namespace spindle {

// Floating-point boundary machinery shared by the Dowker pipeline: boundary
// parameterization by (edge, t), normal-fan queries, prefix C-lengths and the
// boundary crossing of a disk with its own translate. Everything here is
// O(log n) or O(chain length) per query so m x m table construction stays
// cheap for dense polygonal disks.

struct BPoint {
    int edge = 0;    // index of the edge v[edge] -> v[edge+1]
    double t = 0.0;  // position along the edge in [0,1]
};

class PolyBoundary {
  public:
    PolyBoundary() = default;
    explicit PolyBoundary(ConvexRegion<double> poly, Vec2d star);

    const ConvexRegion<double>& poly() const { return poly_; }
    int size() const { return n_; }

    Vec2d point(const BPoint& bp) const;
    double edge_normal_angle(int e) const { return theta_[mod(e)]; }

    // Vertex i's outer-normal cone (theta[i-1], theta[i]) and its midpoint.
    double vertex_cone_mid(int i) const;

    // Support point in normal direction phi. When phi hits an edge normal
    // within eps the support set is that edge and its midpoint is returned.
    struct Support {
        Vec2d point;
        BPoint bp;
        bool on_edge = false;
    };
    Support support(double phi, double eps = 1e-12) const;

    // Boundary parameter of a point (assumed on or near the boundary),
    // located by the ray from the interior star point.
    BPoint locate(const Vec2d& p) const;

    // CCW vertex chain strictly between two boundary parameters (excludes the
    // endpoints themselves).
    void chain_between(const BPoint& a, const BPoint& b, std::vector<Vec2d>& out) const;

    // Edge index whose normal cone (as a vertex fan around `star`) contains
    // direction d; the boundary ray from star along d exits through it.
    int sector_of(const Vec2d& d) const;

  private:
    int mod(int e) const { return ((e % n_) + n_) % n_; }
    ConvexRegion<double> poly_;
    Vec2d star_{};
    int n_ = 0;
    std::vector<double> theta_;      // edge outer-normal angles, in [0, 2pi)
    std::vector<double> dir_angle_;  // angle of v[i] - star, in [0, 2pi)
};

class DiskBoundary {
  public:
    DiskBoundary() = default;
    explicit DiskBoundary(const UnitDisk<double>& C);

    const UnitDisk<double>& disk() const { return *C_; }
    const PolyBoundary& fan() const { return fan_; }

    double gauge(const Vec2d& v) const;  // O(log n) via the normal fan

    double clen_total() const { return total_; }
    double param_clen(const BPoint& bp) const;
    double clen_ccw(const BPoint& a, const BPoint& b) const;

    // A crossing w of bd(C) and v + bd(C) (so w and w - v both lie on bd(C)).
    // The other crossing is v - w. Requires eps < gauge(v) < 2 - eps.
    struct Crossing {
        Vec2d w;
        BPoint on_c;  // parameter of w on bd(C)
    };
    std::optional<Crossing> translate_crossing(const Vec2d& v) const;

    // One boundary arc of the spindle [x,y]_C, traversed from x to y, as an
    // explicit polyline (first point x, last point y). Arcs on the two
    // extreme translates have equal C-length; `right_of_chord` selects the
    // one lying right of the directed chord x->y (the outward side for CCW
    // tilings). Returns nullopt when gauge(y-x) is 0, too close to 2 for the
    // fast path, or above 2.
    struct SpindleArc {
        std::vector<Vec2d> pts;
        double clen = 0.0;
    };
    std::optional<SpindleArc> spindle_arc(const Vec2d& x, const Vec2d& y, bool right_of_chord) const;

    // Arc distance rho_C; nullopt when gauge(y-x) > 2 (+tolerance). Falls back
    // to the exact-style translate intersection near gauge 2.
    std::optional<double> rho(const Vec2d& x, const Vec2d& y) const;

    // Area between the directed chord x->y and the spindle arc right of it.
    std::optional<double> bulge(const Vec2d& x, const Vec2d& y) const;

  private:
    std::optional<SpindleArc> spindle_arc_slow(const Vec2d& x, const Vec2d& y, bool right_of_chord) const;

    const UnitDisk<double>* C_ = nullptr;
    PolyBoundary fan_;
    std::vector<double> edge_clen_;
    std::vector<double> prefix_;
    double total_ = 0.0;
};

double chord_arc_area(const Vec2d& x, const Vec2d& y, const std::vector<Vec2d>& arc_pts);

}  // namespace spindle
