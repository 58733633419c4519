#pragma once

// Receiver processing: one-tap equalization with I/Q decoupling, the exact
// dual-min max-log bit metric, and the closed-form piecewise-linear
// restatement used as the production path.

#include <array>
#include <complex>
#include <utility>
#include <vector>

#include "pxqama/geometry.hpp"
#include "pxqama/hqam.hpp"
#include "pxqama/mode.hpp"

namespace pxqama {

enum class Branch { I, Q };

enum class MetricPath { DualMin, Piecewise };

#ifdef PXQAMA_LLR_USE_DUAL_MIN
inline constexpr MetricPath kDefaultMetric = MetricPath::DualMin;
#else
inline constexpr MetricPath kDefaultMetric = MetricPath::Piecewise;
#endif

struct BranchObservation {
    double y = 0.0;          // equalized branch sample
    Branch branch = Branch::I;
    HierPam pam;             // received composite branch constellation
    double noise_var = 0.0;  // sigma^2 / (2 G^2)
};

/// ( Re{e^{-j phase} y / gain}, Im{...} ): noiseless e^{j phase} G s~ maps
/// back to (Re s~, Im s~) exactly. Throws on gain <= 0.
std::pair<double, double> equalize(cplx y, double gain, double phase);

/// z_k = min over bit-k=0 points of |y-s|^2/4 minus the same min over
/// bit-k=1 points. Positive means bit 1 is closer. k is 1-based.
double dual_min_metric(const BranchObservation& obs, int k);

/// Closed-form piecewise-linear z_k for branches of 1..3 bits; identical to
/// dual_min_metric on properly ordered constellations. Throws on > 3 bits.
double piecewise_metric(const BranchObservation& obs, int k);

/// All z_k of one branch.
std::vector<double> branch_metrics(const HierPam& pam, double y,
                                   MetricPath path = kDefaultMetric);

struct LlrVector {
    std::vector<double> z;    // per-bit metrics
    std::vector<double> llr;  // (4G^2/sigma^2) z = (2/noise_var) z
};

/// Metrics and LLRs for one branch observation.
LlrVector bit_llrs(const BranchObservation& obs, MetricPath path = kDefaultMetric);

/// Full per-user receiver: equalize y, demap both branches of user `user`'s
/// composite constellation. Returns (I-branch, Q-branch) LLR vectors.
std::array<LlrVector, 2> bit_llrs(cplx y, const EquivalentChannel& eq,
                                  const ModeConfig& mode, int user,
                                  MetricPath path = kDefaultMetric);

}  // namespace pxqama
