#include "pxqama/demapper.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace pxqama {

std::pair<double, double> equalize(cplx y, double gain, double phase) {
    if (!(gain > 0.0)) throw std::domain_error("equalize: gain must be positive");
    const cplx z = y * std::polar(1.0, -phase) / gain;
    return {z.real(), z.imag()};
}

double dual_min_metric(const BranchObservation& obs, int k) {
    const HierPam& pam = obs.pam;
    const int m = pam.bits_per_symbol;
    if (k < 1 || k > m) throw std::invalid_argument("bit index out of range");
    double min0 = std::numeric_limits<double>::infinity();
    double min1 = std::numeric_limits<double>::infinity();
    for (int i = 0; i < pam.num_points(); ++i) {
        const double d = obs.y - pam.points[static_cast<std::size_t>(i)];
        const double q = 0.25 * d * d;
        if (label_bit(pam.labels[static_cast<std::size_t>(i)], k, m) != 0) {
            if (q < min1) min1 = q;
        } else {
            if (q < min0) min0 = q;
        }
    }
    return min0 - min1;
}

namespace {

// Piecewise-linear restatements of the dual-min metric for hierarchical
// 2/4/8-PAM. Region boundaries follow the midpoints of the bit-conditioned
// point subsets, so each case is the exact difference of two quadratics.
double z1_of(double y, double d1, double d2, double d3) {
    const double a = std::abs(y);
    const double sgn = y < 0.0 ? -1.0 : 1.0;
    if (a < d1 - d2) return y * (d1 - d2 - d3);
    if (a < d1) return (d1 - d2) * (y - sgn * d3);
    if (a < d1 + d2) return (d1 - d3) * (y - sgn * d2);
    return d1 * (y - sgn * (d2 + d3));
}

double z2_of(double y, double d1, double d2, double d3) {
    const double a = std::abs(y);
    if (a < d1 - d2) return d2 * (d1 - d3 - a);
    if (a < d1 + d2) return (d2 - d3) * (d1 - a);
    return d2 * (d1 + d3 - a);
}

double z3_of(double y, double d1, double d2, double d3) {
    return d3 * (d2 - std::abs(d1 - std::abs(y)));
}

}  // namespace

double piecewise_metric(const BranchObservation& obs, int k) {
    const HierPam& pam = obs.pam;
    const int m = pam.bits_per_symbol;
    if (k < 1 || k > m) throw std::invalid_argument("bit index out of range");
    if (m > 3)
        throw std::invalid_argument("piecewise metric supports at most 3 bits per branch");
    const double d1 = pam.distances[0];
    const double d2 = m > 1 ? pam.distances[1] : 0.0;
    const double d3 = m > 2 ? pam.distances[2] : 0.0;
    switch (k) {
        case 1: return z1_of(obs.y, d1, d2, d3);
        case 2: return z2_of(obs.y, d1, d2, d3);
        default: return z3_of(obs.y, d1, d2, d3);
    }
}

std::vector<double> branch_metrics(const HierPam& pam, double y, MetricPath path) {
    BranchObservation obs;
    obs.y = y;
    obs.pam = pam;
    std::vector<double> z(static_cast<std::size_t>(pam.bits_per_symbol));
    for (int k = 1; k <= pam.bits_per_symbol; ++k)
        z[static_cast<std::size_t>(k - 1)] =
            path == MetricPath::DualMin ? dual_min_metric(obs, k) : piecewise_metric(obs, k);
    return z;
}

LlrVector bit_llrs(const BranchObservation& obs, MetricPath path) {
    if (!(obs.noise_var > 0.0))
        throw std::domain_error("bit_llrs: noise variance must be positive");
    LlrVector out;
    out.z = branch_metrics(obs.pam, obs.y, path);
    out.llr.resize(out.z.size());
    const double scale = 2.0 / obs.noise_var;  // = 4 G^2 / sigma^2
    for (std::size_t i = 0; i < out.z.size(); ++i) out.llr[i] = scale * out.z[i];
    return out;
}

std::array<LlrVector, 2> bit_llrs(cplx y, const EquivalentChannel& eq,
                                  const ModeConfig& mode, int user, MetricPath path) {
    auto [yi, yq] = equalize(y, eq.gain, eq.phase);
    auto [pam_i, pam_q] = compose_received_constellation(mode, eq, user);
    BranchObservation oi{yi, Branch::I, std::move(pam_i), eq.noise_var};
    BranchObservation oq{yq, Branch::Q, std::move(pam_q), eq.noise_var};
    return {bit_llrs(oi, path), bit_llrs(oq, path)};
}

}  // namespace pxqama
