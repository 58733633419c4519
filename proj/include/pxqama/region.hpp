#pragma once

// Sweep engine over transmission modes, Pareto/convex-hull rate-region
// computation, the SDMA and single-beam special-case sub-regions, and
// transmission-mode reduction.

#include <array>
#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "pxqama/geometry.hpp"
#include "pxqama/inforate.hpp"
#include "pxqama/mode.hpp"

namespace pxqama {

/// Linear-domain scenario; dB conversions live at the CLI boundary.
struct Scenario {
    double lambda1 = 1.0, lambda2 = 1.0;
    cplx rho;
    double sigma2 = 1.0;
};

enum class ModeFamily {
    All,     // every size combination
    Sdma,    // private symbols only (m0 = n0 = 0)
    QamaBf,  // single shared beam (m_u = n_u = 0)
};

struct SweepGrids {
    int theta0_count = 17;          // points over [0, Theta]
    int power_steps = 20;           // alpha^2 resolution 1/power_steps
    int max_branch_bits = 3;        // per-user composite branch cap
    std::vector<double> distance_ratios = {2.0};  // per-branch layer ratios
    bool dedup_iq_symmetry = true;  // drop mirrored assignments of I/Q-symmetric modes
    ModeFamily family = ModeFamily::All;
};

enum class FilterReason {
    CompositeOrdering,   // seam breaks d_k >= 2 d_{k+1} at some user
    PowerWithoutBits,    // alpha > 0 on a symbol that carries no bits
    BitsWithoutPower,    // alpha = 0 on a symbol that carries bits
    DegenerateGain,      // G_u ~ 0 while user u has bits
    Count
};

struct SweepStats {
    std::size_t n_size_combos = 0;
    std::size_t n_configs = 0;          // valid (sizes, theta0, power) tuples
    std::size_t n_modes_evaluated = 0;  // configs x assignments
    std::array<std::size_t, static_cast<std::size_t>(FilterReason::Count)> n_filtered{};

    std::size_t filtered(FilterReason r) const {
        return n_filtered[static_cast<std::size_t>(r)];
    }
};

/// Materialized enumeration of all valid modes (sizes x assignment x theta0
/// x power grid). Meant for small grids and tests; the sweep streams the
/// same enumeration without materializing it.
std::vector<ModeConfig> enumerate_modes(const Scenario& sc, const SweepGrids& grids,
                                        SweepStats* stats = nullptr);

/// Full chain for one mode: channels -> precoders -> equivalent channels ->
/// composite constellations -> per-bit MI -> (R1, R2).
RatePoint evaluate_mode(const ModeConfig& mode, const Scenario& sc,
                        int nodes = kMiQuadratureNodes);

struct HullVertex {
    double r1 = 0.0, r2 = 0.0;
    std::ptrdiff_t point_index = -1;  // -1 for synthesized axis anchors
};

struct RateRegion {
    std::vector<RatePoint> points;   // retained (Pareto-efficient) rate points
    std::vector<HullVertex> hull;    // frontier from (R1max,0) to (0,R2max), CCW
    double area = 0.0;               // polygon area including the origin
    std::size_t n_evaluated = 0;     // rate points seen before Pareto pruning
};

/// Upper-right convex hull of the points together with the origin and the
/// two axis anchors (R1max, 0), (0, R2max). Hull points are achievable by
/// operating single modes; everything else in the polygon is reached by
/// time-sharing between them (and with silence, for the axis segments).
RateRegion build_region(std::vector<RatePoint> points);

/// Marks for CSV emission: true for retained points on the hull.
std::vector<bool> on_hull_flags(const RateRegion& region);

struct SweepResult {
    RateRegion region;    // all valid modes
    RateRegion sdma;      // m0 = n0 = 0 sub-family
    RateRegion qama_bf;   // single shared beam sub-family (m_u = n_u = 0)
    SweepStats stats;
};

/// Sweep every valid mode of the grid and build the three regions.
/// Deterministic for a given scenario/grids regardless of worker count.
SweepResult sweep_region(const Scenario& sc, const SweepGrids& grids,
                         unsigned workers = 0, int nodes = kMiQuadratureNodes);

struct ModeSelection {
    std::vector<HullVertex> vertices;  // selected frontier vertices, CCW
    std::vector<RatePoint> modes;      // matching modes (anchor modes included)
    double polygon_area = 0.0;
    double area_ratio = 0.0;           // polygon area / full region area
};

/// Reduce the frontier to n2 transmission modes: the two axis-anchor (OMA)
/// vertices are always kept, the rest are chosen greedily to maximize the
/// time-sharing polygon area. Requires 2 <= n2 <= hull size.
ModeSelection select_modes(const RateRegion& region, int n2);

}  // namespace pxqama
