#include "pxqama/mode.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace pxqama {

int ModeConfig::assigned_bits(int user) const {
    const int si = std::popcount(assign_i);
    const int sq = std::popcount(assign_q);
    const int shared = user == 1 ? si + sq : (m0 - si) + (n0 - sq);
    return shared + private_i_bits(user) + private_q_bits(user);
}

ModeConfig make_uniform_mode(int m0, int n0, int m1, int n1, double theta0,
                             double alpha0, double alpha1, double alpha2,
                             std::uint32_t assign_i, std::uint32_t assign_q,
                             double ratio) {
    ModeConfig m;
    m.m0 = m0;
    m.n0 = n0;
    m.m1 = m.m2 = m1;
    m.n1 = m.n2 = n1;
    m.d0 = uniform_profile(m0, n0, ratio);
    m.d1 = uniform_profile(m1, n1, ratio);
    m.d2 = m.d1;
    m.theta0 = theta0;
    m.alpha0 = alpha0;
    m.alpha1 = alpha1;
    m.alpha2 = alpha2;
    m.ratio = ratio;
    m.assign_i = assign_i;
    m.assign_q = assign_q;
    validate_mode(m);
    return m;
}

void validate_mode(const ModeConfig& mode) {
    if (mode.m0 < 0 || mode.n0 < 0 || mode.m1 < 0 || mode.n1 < 0 || mode.m2 < 0 ||
        mode.n2 < 0)
        throw std::invalid_argument("negative branch bit count");
    if (mode.d0.i_bits() != mode.m0 || mode.d0.q_bits() != mode.n0 ||
        mode.d1.i_bits() != mode.m1 || mode.d1.q_bits() != mode.n1 ||
        mode.d2.i_bits() != mode.m2 || mode.d2.q_bits() != mode.n2)
        throw std::invalid_argument("distance profile sizes do not match bit counts");
    if (mode.m0 < 32 && mode.assign_i >> mode.m0)
        throw std::invalid_argument("assign_i has bits outside the shared I word");
    if (mode.n0 < 32 && mode.assign_q >> mode.n0)
        throw std::invalid_argument("assign_q has bits outside the shared Q word");
    if (mode.alpha0 < 0.0 || mode.alpha1 < 0.0 || mode.alpha2 < 0.0)
        throw std::invalid_argument("negative power amplitude");
    const double p = mode.alpha0 * mode.alpha0 + mode.alpha1 * mode.alpha1 +
                     mode.alpha2 * mode.alpha2;
    if (std::abs(p - 1.0) > 1e-9)
        throw std::invalid_argument("power amplitudes do not satisfy sum alpha^2 = 1");
}

}  // namespace pxqama
