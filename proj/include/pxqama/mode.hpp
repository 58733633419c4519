#pragma once

// One transmission mode: constellation sizes and distance profiles for the
// shared and private symbols, the shared-bit-to-user assignment, the beam
// angle and the power split.

#include <cstdint>

#include "pxqama/hqam.hpp"

namespace pxqama {

struct ModeConfig {
    // branch bit counts per symbol (s0 shared, s1/s2 private)
    int m0 = 0, n0 = 0;
    int m1 = 0, n1 = 0;
    int m2 = 0, n2 = 0;

    DistanceProfile d0, d1, d2;

    // Shared-bit assignment: bit (k-1) of assign_i set means I-branch shared
    // bit k goes to user 1, otherwise user 2. Same for assign_q on Q.
    std::uint32_t assign_i = 0;
    std::uint32_t assign_q = 0;

    double theta0 = 0.0;                        // shared-beam angle in [0, Theta]
    double alpha0 = 0.0, alpha1 = 0.0, alpha2 = 0.0;  // power amplitudes, sum of squares 1
    double ratio = 2.0;                         // layer ratio the profiles were built with

    int private_i_bits(int user) const { return user == 1 ? m1 : m2; }
    int private_q_bits(int user) const { return user == 1 ? n1 : n2; }
    const DistanceProfile& private_profile(int user) const { return user == 1 ? d1 : d2; }
    double private_alpha(int user) const { return user == 1 ? alpha1 : alpha2; }

    int shared_bits() const { return m0 + n0; }
    int user_bits(int user) const { return m0 + n0 + private_i_bits(user) + private_q_bits(user); }

    /// Bits user u actually decodes: its private bits plus its share of S_0.
    int assigned_bits(int user) const;
};

/// Mode with uniform-PAM profiles on every branch (the sweep default).
ModeConfig make_uniform_mode(int m0, int n0, int m1, int n1, double theta0,
                             double alpha0, double alpha1, double alpha2,
                             std::uint32_t assign_i = 0, std::uint32_t assign_q = 0,
                             double ratio = 2.0);

/// Structural checks: profile sizes match bit counts, assignment masks fit
/// the shared bit counts, alphas nonnegative with unit total power.
/// Throws std::invalid_argument on violation.
void validate_mode(const ModeConfig& mode);

}  // namespace pxqama
