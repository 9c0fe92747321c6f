#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "spindle/disk_geometry.hpp"
#include "spindle/geom.hpp"
#include "spindle/tiling.hpp"

namespace spindle {

// The Dowker pipeline: boundary discretization of a C-convex body K,
// supporting C-disks, the four geometric arc tables (inscribed
// perimeter/area, circumscribed area/perimeter) and the resulting sequence
// estimates A^_n, a^_n, P^_n, p^_n.

struct BoundarySample {
    Vec2d point;  // Gamma(phi) on bd(K)
    double phi;   // outer normal direction
    BPoint on_k;  // boundary parameter on K
};

struct BoundaryParam {
    std::vector<BoundarySample> samples;  // normals strictly increasing, cyclic
    int m() const { return static_cast<int>(samples.size()); }
};

struct SupportingDisk {
    double phi = 0.0;
    Vec2d center;             // x(phi) = Gamma(phi) - Theta(phi), then corrected
    double correction = 0.0;  // |shift| applied along the normal to restore containment
    BPoint touch;             // parameter of Gamma(phi) - center on bd(C)
};

// Polygonal C-convexity test: every edge of K must lie inside a parallel edge
// of a translate of C that contains K. Cheaper than the generic hull check
// and exact for polygons (up to tol).
bool polygon_c_convex(const ConvexRegion<double>& K, const UnitDisk<double>& C,
                      const DiskBoundary& db, double tol = 1e-9);

class DowkerEngine {
  public:
    // length_multiplier rescales all reported C-lengths (used by the
    // lambda-scaling probe so perimeters stay in the base norm's units).
    DowkerEngine(ConvexRegion<double> K, UnitDisk<double> C, int m, double length_multiplier = 1.0);

    const ConvexRegion<double>& body() const { return K_; }
    const UnitDisk<double>& disk() const { return *C_; }
    const DiskBoundary& disk_boundary() const { return db_; }
    const BoundaryParam& boundary() const { return bp_; }
    const std::vector<SupportingDisk>& disks() const { return disks_; }
    double max_correction() const { return max_correction_; }
    double area_of_body() const { return areaK_; }

    const ArcTable& inscribed_perimeter_table();
    const ArcTable& inscribed_area_table();
    const ArcTable& circumscribed_area_table();
    const ArcTable& circumscribed_perimeter_table();

    // Straight-polygon analogues (chords / tangent corner lengths) for the
    // classical quantities p-bar / P-bar.
    const ArcTable& chord_table();
    const ArcTable& tangent_perimeter_table();

    // area of the intersection of the supporting disks chosen by a tiling
    double direct_circumscribed_area(const Tiling& t) const;
    // area of the C-hull of the sample points chosen by a tiling
    std::optional<double> direct_inscribed_hull_area(const Tiling& t) const;

    // Sequence estimates; nullopt when no feasible tiling exists.
    std::optional<double> A_hat(int n);
    std::optional<double> a_hat(int n);
    std::optional<double> P_hat(int n);
    std::optional<double> p_hat(int n);

  private:
    void build_samples(int m);
    void build_disks();

    ConvexRegion<double> K_;
    std::unique_ptr<UnitDisk<double>> C_;
    DiskBoundary db_;
    PolyBoundary kfan_;
    BoundaryParam bp_;
    std::vector<SupportingDisk> disks_;
    double areaK_ = 0.0;
    double max_correction_ = 0.0;
    double len_mult_ = 1.0;

    std::optional<ArcTable> insc_perim_, insc_area_, circ_area_, circ_perim_, chord_, tangent_;
};

struct DowkerRow {
    int n = 0;
    std::optional<double> A_hat, a_hat, P_hat, p_hat;
};

struct DowkerMargins {
    int n = 0;  // second difference at n uses n-1, n, n+1
    std::optional<double> A2, a2, P2, p2;
};

struct DowkerReport {
    int n_min = 0, n_max = 0, m = 0;
    double area_K = 0.0;
    double max_correction = 0.0;
    std::vector<DowkerRow> rows;
    std::vector<DowkerMargins> margins;
    bool a_hat_concavity_violated = false;  // possible by design for some C
};

DowkerReport dowker_sequences(const ConvexRegion<double>& K, const UnitDisk<double>& C, int n_min,
                              int n_max, int m);

enum class DowkerQuantity { CircumArea, CircumPerim, InscribedPerim, InscribedArea };

struct SymmetricDowkerResult {
    double unrestricted = 0.0;
    double symmetric_value = 0.0;
    Tiling tiling;
};

// Theorem-1.6-style check: k | n, K and C k-fold rotationally symmetric.
SymmetricDowkerResult symmetric_dowker(const ConvexRegion<double>& K, const UnitDisk<double>& C, int n,
                                       int k, DowkerQuantity which, int m);

struct ScalingProbeRow {
    double lambda = 0.0;
    double p_hat = 0.0, P_hat = 0.0;  // measured in the base C-norm
};

struct ScalingProbe {
    double p_bar = 0.0, P_bar = 0.0;  // straight-polygon DP on the same grid
    std::vector<ScalingProbeRow> rows;
};

ScalingProbe scaling_limit_probe(const ConvexRegion<double>& K, const UnitDisk<double>& C, int n,
                                 const std::vector<double>& lambdas, int m);

// K = intersection of `count` random translates of C, shifts uniform in the
// disk of radius `shift_radius`; deterministic in the seed.
ConvexRegion<double> random_translate_intersection(const UnitDisk<double>& C, int count,
                                                   double shift_radius, unsigned seed);

}  // namespace spindle
