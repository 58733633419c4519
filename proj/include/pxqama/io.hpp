#pragma once

// CSV emission/parsing for regions and plot-ready dumps, plus the JSON
// scenario configuration used by the CLI.

#include <iosfwd>
#include <string>
#include <vector>

#include "pxqama/region.hpp"

namespace pxqama {

/// Shortest representation with 12 significant digits.
std::string fmt_g12(double v);

inline constexpr const char* kRegionCsvHeader =
    "mode_id,m0,n0,m1,n1,theta0,a0,a1,a2,assignment_mask_i,assignment_mask_q,R1,R2,on_hull";

void write_region_csv(std::ostream& os, const RateRegion& region);

/// Parse a region CSV back into rate points (profiles rebuilt as uniform).
std::vector<RatePoint> read_region_csv(std::istream& is);

/// Two-column (R1, R2) CSV for externally supplied baseline curves; a header
/// row is skipped when the first field is not numeric.
std::vector<RatePoint> read_xy_csv(std::istream& is);

// -- scenario configuration ------------------------------------------------

struct GridConfig {
    int theta0_count = 17;
    int power_steps = 20;  // alpha^2 step = 1/power_steps
    int max_branch_bits = 3;
    std::vector<double> distance_ratios = {2.0};
    bool dedup_iq_symmetry = true;
    std::string family = "all";  // all | sdma | qama_bf
};

struct ScenarioConfig {
    int schema_version = 1;
    double gamma1_db = 10.0;
    double gamma2_db = 20.0;
    double rho_abs = 0.0;
    double rho_phase = 0.0;  // radians
    double sigma2 = 1.0;
    std::uint64_t seed = 0;
    std::string out_dir = ".";  // CLI --out overrides
    GridConfig grid;
};

/// Parse a config file; unknown keys are rejected, schema_version must match.
/// Throws std::invalid_argument with a diagnostic message.
ScenarioConfig load_scenario_config(const std::string& path);
ScenarioConfig parse_scenario_config(const std::string& text, const std::string& origin);

/// dB -> linear conversion happens here, at the CLI boundary.
Scenario to_scenario(const ScenarioConfig& cfg);
SweepGrids to_grids(const GridConfig& cfg);

}  // namespace pxqama
