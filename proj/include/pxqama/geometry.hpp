#pragma once

// Two-user MISO channel parameterization, Gram-Schmidt basis and the
// closed-form precoders under the orthogonality / phase-alignment
// constraints, plus the per-user equivalent channel derivation.

#include <array>
#include <complex>
#include <utility>
#include <vector>

#include "pxqama/hqam.hpp"
#include "pxqama/mode.hpp"

namespace pxqama {

using cplx = std::complex<double>;
using cvec = std::vector<cplx>;

/// a^H b
cplx cdot(const cvec& a, const cvec& b);
double vec_norm(const cvec& a);

struct ChannelPair {
    cvec h1, h2;              // length N_t
    double lambda1 = 0.0, lambda2 = 0.0;
    cplx rho;                 // unit-direction correlation h1~^H h2~
    double theta = 0.0;       // Hermitian angle arccos|rho|
    double sigma2 = 1.0;      // receiver noise variance (same at both users)
    double gamma1 = 0.0, gamma2 = 0.0;  // reference SNRs lambda^2/sigma^2

    cvec unit_h1() const;
    cvec unit_h2() const;
};

/// Canonical two-user scenario: h1 = lambda1*e0, h2 = lambda2*(rho*e0 +
/// sqrt(1-|rho|^2)*e1), embedded in the first two coordinates for n_t > 2.
/// Rejects |rho| >= 1 - 1e-9 as ill-conditioned.
ChannelPair make_channels(double lambda1, double lambda2, cplx rho,
                          double sigma2 = 1.0, int n_t = 2);

/// q1 = h1~, q2 = (h2~ - rho h1~)/sqrt(1-|rho|^2); orthonormal pair.
std::pair<cvec, cvec> gram_schmidt_basis(const ChannelPair& ch);

/// Shared-symbol beam: cos(theta0) q1 + e^{-j ang(rho)} sin(theta0) q2,
/// trading the two users' shared-symbol gains. theta0 in [0, Theta].
cvec shared_precoder_direction(const ChannelPair& ch, double theta0);

/// Closed-form private beams: p1~ nulls h2, p2~ nulls h1, both phase-aligned
/// with the shared beam at their own user.
std::pair<cvec, cvec> private_precoder_directions(const ChannelPair& ch);

struct PrecoderSet {
    cvec p0, p1, p2;  // unit directions
    double alpha0 = 0.0, alpha1 = 0.0, alpha2 = 0.0;
    double theta0 = 0.0;
};

/// Bundle the closed-form directions with a power split (sum alpha^2 = 1).
PrecoderSet assemble_precoders(const ChannelPair& ch, double theta0,
                               double alpha0, double alpha1, double alpha2);

/// Transmit vector alpha0 p0 s0 + alpha1 p1 s1 + alpha2 p2 s2.
cvec superimpose(const PrecoderSet& pre, cplx s0, cplx s1, cplx s2);

/// Per-user equivalent channels from the actual inner products
/// h_u^H p_i. Fills gains, phases, mixing weights, the received composite
/// distance profile and the per-branch noise variance.
/// Throws std::domain_error when a user with assigned bits has zero gain
/// or the composite ordering breaks.
std::array<EquivalentChannel, 2> equivalent_channels(const ChannelPair& ch,
                                                     const PrecoderSet& pre,
                                                     const ModeConfig& mode);

/// Scalar gain/weight parameters of both users' equivalent channels,
/// evaluated directly from the closed-form precoder expressions:
///   G1 = sqrt((l1 a0 cos t0)^2 + (l1 a1 sin Theta)^2), Phi1 = 0,
///   G2 = sqrt((l2 a0 cos(Theta-t0))^2 + (l2 a2 sin Theta)^2), Phi2 = -ang(rho).
struct EquivGains {
    double g1 = 0.0, g2 = 0.0;
    double beta10 = 0.0, beta11 = 0.0;
    double beta20 = 0.0, beta22 = 0.0;
    double phi1 = 0.0, phi2 = 0.0;
};
EquivGains closed_form_gains(const ChannelPair& ch, double theta0,
                             double alpha0, double alpha1, double alpha2);

}  // namespace pxqama
