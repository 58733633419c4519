#pragma once

// Hierarchical PAM/QAM constellations with Gray mapping, the joint
// shared/private mapping rule, and received-composite constellation
// formation for the two-user parallax QAMA downlink.

#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

namespace pxqama {

using Bits = std::vector<std::uint8_t>;

/// Per-symbol distance parameters: one ordered set per branch.
/// Stored normalized so that sum(d_i^2) + sum(d_q^2) = 1 (unit symbol energy).
struct DistanceProfile {
    std::vector<double> i_distances;  // d^i_1 .. d^i_m, largest first
    std::vector<double> q_distances;  // d^q_1 .. d^q_n

    int i_bits() const { return static_cast<int>(i_distances.size()); }
    int q_bits() const { return static_cast<int>(q_distances.size()); }
    bool empty() const { return i_distances.empty() && q_distances.empty(); }
};

/// Normalize caller-supplied distance ratios into a unit-energy profile.
/// Ratios must be positive and satisfy r_k >= 2 r_{k+1} on each branch.
DistanceProfile make_profile(std::vector<double> i_ratios, std::vector<double> q_ratios);

/// Uniform-PAM profile: d_k = 2 d_{k+1} on each branch, equal minimum
/// distance on I and Q, normalized to unit energy. `ratio` generalizes
/// the 2x layer spacing (must be >= 2).
DistanceProfile uniform_profile(int m, int n, double ratio = 2.0);

double profile_energy(const DistanceProfile& p);

/// Throws std::domain_error on nonpositive distances, ordering violations
/// or (for nonempty profiles) energy != 1 within 1e-12.
void validate_profile(const DistanceProfile& p);

/// One-dimensional hierarchical 2^m-PAM with Gray labels.
/// Point i carries label `labels[i]`; bit k (1-based, k=1 is the
/// largest-distance layer) sits at position (m-k) of the label word.
struct HierPam {
    int bits_per_symbol = 0;            // m
    std::vector<double> distances;      // size m
    std::vector<double> points;         // size 2^m, strictly ascending
    std::vector<std::uint32_t> labels;  // Gray label per point

    int num_points() const { return static_cast<int>(points.size()); }
};

/// Extract bit k (1-based, layer order) from an m-bit label.
inline int label_bit(std::uint32_t label, int k, int m) {
    return static_cast<int>((label >> (m - k)) & 1u);
}

/// Build the 2^m-point hierarchical PAM from layer distances.
/// m = 0 yields the degenerate single point {0} with an empty label.
HierPam build_hier_pam(int m, const std::vector<double>& distances);

// Gray <-> natural label conversions (prefix-xor and its inverse).
Bits gray_to_natural(const Bits& bits);
Bits natural_to_gray(const Bits& bits);

/// PAM coordinate of a Gray word: sum_k (-1)^(1 + b_1^...^b_k prefix parity) d_k,
/// the core-layer mapping.
double gray_pam_point(const Bits& bits, const std::vector<double>& distances);

/// Extended-layer coordinate without the core sign: sum_k (-1)^(prefix parity) d_k.
double ext_pam_point(const Bits& bits, const std::vector<double>& distances);

/// All bits feeding one transmitted symbol triple for a given user.
struct BitWord {
    Bits shared_i;   // length m0
    Bits shared_q;   // length n0
    Bits private_i;  // length m_u
    Bits private_q;  // length n_u
};

/// Shared symbol s0: conventional Gray H-QAM mapping.
std::complex<double> map_shared(const Bits& bi, const Bits& bq, const DistanceProfile& d0);
std::complex<double> map_shared(const BitWord& w, const DistanceProfile& d0);

/// Private symbol s_u: joint mapping whose branch sign depends on the
/// parity of the shared bits, so that beta0*s0 + betau*su stays Gray-coded.
std::complex<double> map_private(const Bits& bi, const Bits& bq,
                                 const Bits& shared_bi, const Bits& shared_bq,
                                 const DistanceProfile& du);
std::complex<double> map_private(const BitWord& w, const DistanceProfile& du);

struct ModeConfig;  // see mode.hpp

/// Per-user equivalent scalar channel after phase-aligned precoding:
/// y_u = e^{j phase} * gain * (beta_shared*s0 + beta_private*s_u) + w.
struct EquivalentChannel {
    double gain = 0.0;          // G_u
    double phase = 0.0;         // Phi_u
    double beta_shared = 0.0;   // |h^H p0| a0 / G_u
    double beta_private = 0.0;  // |h^H p_u| a_u / G_u
    DistanceProfile composite;  // received distance parameters d~
    double noise_var = 0.0;     // per-branch sigma^2 / (2 G_u^2)
};

/// Received composite distance profile for one user: shared distances scaled
/// by beta_shared stacked above private distances scaled by beta_private.
/// Throws std::domain_error if the seam breaks the d_k >= 2 d_{k+1} ordering.
DistanceProfile compose_profile(const ModeConfig& mode, double beta_shared,
                                double beta_private, int user);

/// Branch constellations (I, Q) of the received composite symbol s~_u.
std::pair<HierPam, HierPam> compose_received_constellation(const ModeConfig& mode,
                                                           const EquivalentChannel& eq,
                                                           int user);

/// Index of the nearest constellation point (ties resolve to the lower point).
int nearest_point(const HierPam& pam, double y);

/// Split composite branch labels back into shared/private bit fields.
BitWord split_composite_labels(std::uint32_t label_i, std::uint32_t label_q,
                               int m0, int n0, int mu, int nu);
}  // namespace pxqama
