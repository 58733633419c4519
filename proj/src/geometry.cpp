#include "pxqama/geometry.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace pxqama {

namespace {

constexpr double kDegenerateRho = 1.0 - 1e-9;
constexpr double kTinyGain = 1e-140;  // below this, beta = |t|/G is meaningless

cvec scaled(const cvec& v, cplx s) {
    cvec out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = s * v[i];
    return out;
}

cvec axpy(cplx a, const cvec& x, cplx b, const cvec& y) {
    cvec out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = a * x[i] + b * y[i];
    return out;
}

}  // namespace

cplx cdot(const cvec& a, const cvec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("vector size mismatch");
    cplx s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

double vec_norm(const cvec& a) {
    double s = 0.0;
    for (const cplx& v : a) s += std::norm(v);
    return std::sqrt(s);
}

cvec ChannelPair::unit_h1() const { return scaled(h1, 1.0 / lambda1); }
cvec ChannelPair::unit_h2() const { return scaled(h2, 1.0 / lambda2); }

ChannelPair make_channels(double lambda1, double lambda2, cplx rho, double sigma2,
                          int n_t) {
    if (!(lambda1 > 0.0) || !(lambda2 > 0.0))
        throw std::invalid_argument("channel norms must be positive");
    if (!(sigma2 > 0.0)) throw std::invalid_argument("noise variance must be positive");
    if (n_t < 2) throw std::invalid_argument("need at least two transmit antennas");
    if (std::abs(rho) >= kDegenerateRho)
        throw std::domain_error("|rho| too close to 1: ill-conditioned channel pair");

    ChannelPair ch;
    ch.h1.assign(static_cast<std::size_t>(n_t), cplx{0.0, 0.0});
    ch.h2.assign(static_cast<std::size_t>(n_t), cplx{0.0, 0.0});
    ch.h1[0] = lambda1;
    ch.h2[0] = lambda2 * rho;
    ch.h2[1] = lambda2 * std::sqrt(1.0 - std::norm(rho));
    ch.lambda1 = lambda1;
    ch.lambda2 = lambda2;
    ch.rho = rho;  // equals unit_h1^H unit_h2 by construction
    ch.theta = std::acos(std::abs(rho));
    ch.sigma2 = sigma2;
    ch.gamma1 = lambda1 * lambda1 / sigma2;
    ch.gamma2 = lambda2 * lambda2 / sigma2;
    return ch;
}

std::pair<cvec, cvec> gram_schmidt_basis(const ChannelPair& ch) {
    if (std::abs(ch.rho) >= kDegenerateRho)
        throw std::domain_error("|rho| too close to 1: Gram-Schmidt degenerate");
    const cvec q1 = ch.unit_h1();
    const double sin_theta = std::sqrt(1.0 - std::norm(ch.rho));
    const cvec q2 = axpy(1.0 / sin_theta, ch.unit_h2(), -ch.rho / sin_theta, q1);
    return {q1, q2};
}

cvec shared_precoder_direction(const ChannelPair& ch, double theta0) {
    if (theta0 < -1e-12 || theta0 > ch.theta + 1e-12)
        throw std::invalid_argument("theta0 outside [0, Theta]");
    const auto [q1, q2] = gram_schmidt_basis(ch);
    const cplx phase = std::polar(1.0, -std::arg(ch.rho));
    return axpy(std::cos(theta0), q1, phase * std::sin(theta0), q2);
}

std::pair<cvec, cvec> private_precoder_directions(const ChannelPair& ch) {
    if (std::abs(ch.rho) >= kDegenerateRho)
        throw std::domain_error("|rho| too close to 1: private beams degenerate");
    const double sin_theta = std::sqrt(1.0 - std::norm(ch.rho));
    const cvec h1u = ch.unit_h1();
    const cvec h2u = ch.unit_h2();
    const cvec p1 = axpy(1.0 / sin_theta, h1u, -std::conj(ch.rho) / sin_theta, h2u);
    const cplx phase = std::polar(1.0, -std::arg(ch.rho));
    const cvec p2 = axpy(phase / sin_theta, h2u, -phase * ch.rho / sin_theta, h1u);
    return {p1, p2};
}

PrecoderSet assemble_precoders(const ChannelPair& ch, double theta0, double alpha0,
                               double alpha1, double alpha2) {
    if (alpha0 < 0.0 || alpha1 < 0.0 || alpha2 < 0.0)
        throw std::invalid_argument("negative power amplitude");
    const double p = alpha0 * alpha0 + alpha1 * alpha1 + alpha2 * alpha2;
    if (std::abs(p - 1.0) > 1e-9)
        throw std::invalid_argument("power amplitudes do not satisfy sum alpha^2 = 1");
    PrecoderSet pre;
    pre.p0 = shared_precoder_direction(ch, theta0);
    auto [p1, p2] = private_precoder_directions(ch);
    pre.p1 = std::move(p1);
    pre.p2 = std::move(p2);
    pre.alpha0 = alpha0;
    pre.alpha1 = alpha1;
    pre.alpha2 = alpha2;
    pre.theta0 = theta0;
    return pre;
}

cvec superimpose(const PrecoderSet& pre, cplx s0, cplx s1, cplx s2) {
    cvec x(pre.p0.size(), cplx{0.0, 0.0});
    for (std::size_t i = 0; i < x.size(); ++i)
        x[i] = pre.alpha0 * pre.p0[i] * s0 + pre.alpha1 * pre.p1[i] * s1 +
               pre.alpha2 * pre.p2[i] * s2;
    return x;
}

namespace {

EquivalentChannel equivalent_for_user(const ChannelPair& ch, const ModeConfig& mode,
                                      cplx t_shared, cplx t_private, int user) {
    EquivalentChannel eq;
    const double a0 = std::abs(t_shared);
    const double au = std::abs(t_private);
    eq.gain = std::hypot(a0, au);

    if (eq.gain < kTinyGain) {
        // a deaf user can still be part of a valid mode as long as nothing
        // is assigned to it (its layers carry zero information either way)
        if (mode.assigned_bits(user) > 0)
            throw std::domain_error(
                "degenerate mode: zero equivalent gain for a user with assigned bits");
        eq.noise_var = std::numeric_limits<double>::infinity();
        return eq;  // composite stays empty
    }

    // phase alignment makes arg(t_shared) == arg(t_private) whenever both
    // terms are active, so the sum has the common phase
    eq.phase = std::arg(t_shared + t_private);
    eq.beta_shared = a0 / eq.gain;
    eq.beta_private = au / eq.gain;
    eq.composite = compose_profile(mode, eq.beta_shared, eq.beta_private, user);
    eq.noise_var = ch.sigma2 / (2.0 * eq.gain * eq.gain);
    return eq;
}

}  // namespace

std::array<EquivalentChannel, 2> equivalent_channels(const ChannelPair& ch,
                                                     const PrecoderSet& pre,
                                                     const ModeConfig& mode) {
    const cplx t10 = cdot(ch.h1, pre.p0) * pre.alpha0;
    const cplx t11 = cdot(ch.h1, pre.p1) * pre.alpha1;
    const cplx t20 = cdot(ch.h2, pre.p0) * pre.alpha0;
    const cplx t22 = cdot(ch.h2, pre.p2) * pre.alpha2;
    return {equivalent_for_user(ch, mode, t10, t11, 1),
            equivalent_for_user(ch, mode, t20, t22, 2)};
}

EquivGains closed_form_gains(const ChannelPair& ch, double theta0, double alpha0,
                             double alpha1, double alpha2) {
    const double sin_theta = std::sin(ch.theta);
    const double a10 = ch.lambda1 * alpha0 * std::cos(theta0);
    const double a11 = ch.lambda1 * alpha1 * sin_theta;
    const double a20 = ch.lambda2 * alpha0 * std::cos(ch.theta - theta0);
    const double a22 = ch.lambda2 * alpha2 * sin_theta;
    EquivGains g;
    g.g1 = std::hypot(a10, a11);
    g.g2 = std::hypot(a20, a22);
    g.beta10 = g.g1 > 0.0 ? a10 / g.g1 : 0.0;
    g.beta11 = g.g1 > 0.0 ? a11 / g.g1 : 0.0;
    g.beta20 = g.g2 > 0.0 ? a20 / g.g2 : 0.0;
    g.beta22 = g.g2 > 0.0 ? a22 / g.g2 : 0.0;
    g.phi1 = 0.0;
    g.phi2 = -std::arg(ch.rho);
    return g;
}

}  // namespace pxqama
