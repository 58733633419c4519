#pragma once

// Per-bit-channel mutual information of the equivalent scalar AWGN model:
// deterministic Gauss-Hermite quadrature with a Monte Carlo oracle, and
// per-user rate aggregation under a shared-bit assignment.

#include <array>
#include <cstdint>
#include <vector>

#include "pxqama/hqam.hpp"
#include "pxqama/mode.hpp"

namespace pxqama {

struct GaussHermite {
    std::vector<double> nodes;
    std::vector<double> weights;  // for integral f(x) e^{-x^2} dx
};

/// Nodes/weights of the n-point Gauss-Hermite rule (cached per n).
const GaussHermite& gauss_hermite(int n);

inline constexpr int kMiQuadratureNodes = 64;

/// BICM parallel-channel mutual information I(b_k; y) for every bit of a
/// branch constellation under y = s + w, w ~ N(0, noise_var), bits uniform.
/// One quadrature pass covers all bits of the branch.
std::vector<double> branch_bit_mi(const HierPam& pam, double noise_var,
                                  int nodes = kMiQuadratureNodes);

/// Single-bit convenience wrapper around branch_bit_mi. k is 1-based.
double bit_mi_quadrature(const HierPam& pam, int k, double noise_var,
                         int nodes = kMiQuadratureNodes);

/// Monte Carlo estimate of the same quantity, reproducible for a given seed
/// regardless of call order (counter-based per-sample seeding).
double bit_mi_montecarlo(const HierPam& pam, int k, double noise_var,
                         std::size_t n_samples, std::uint64_t seed);

/// Exact (full-sum) LLR ln f(y|b_k=1)/f(y|b_k=0) of one branch bit.
double exact_bit_llr(const HierPam& pam, int k, double noise_var, double y);

/// Per-bit mutual information seen by each user on its own composite
/// constellation, indexed [user-1]. Entries 1..m0 (resp. 1..n0) are the
/// shared layers, the rest the user's private layers.
struct UserBitMi {
    std::vector<double> i_mi;  // size m0 + m_u
    std::vector<double> q_mi;  // size n0 + n_u
};
using BitChannelRates = std::array<UserBitMi, 2>;

BitChannelRates mode_bit_mi(const ModeConfig& mode,
                            const std::array<EquivalentChannel, 2>& eqs,
                            int nodes = kMiQuadratureNodes);

struct RatePoint {
    double r1 = 0.0, r2 = 0.0;  // bits per channel use
    ModeConfig mode;
};

/// R_u = sum of the MI of user u's assigned shared bits plus all of user
/// u's private bits, each evaluated on user u's composite constellation.
/// The assignment is taken from mode.assign_i / mode.assign_q.
RatePoint user_rates(const ModeConfig& mode,
                     const std::array<EquivalentChannel, 2>& eqs,
                     int nodes = kMiQuadratureNodes);

}  // namespace pxqama
