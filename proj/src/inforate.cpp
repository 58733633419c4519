#include "pxqama/inforate.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include "pxqama/rng.hpp"

namespace pxqama {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kLn2 = 0.6931471805599453094172321214581766;

// Newton iteration on the orthonormal Hermite recurrence (weights for
// integrals against e^{-x^2}); accurate to ~1e-14 up to a few hundred nodes.
GaussHermite compute_gauss_hermite(int n) {
    if (n < 1) throw std::invalid_argument("need at least one quadrature node");
    GaussHermite gh;
    gh.nodes.assign(static_cast<std::size_t>(n), 0.0);
    gh.weights.assign(static_cast<std::size_t>(n), 0.0);
    const int half = (n + 1) / 2;
    double z = 0.0;
    for (int i = 0; i < half; ++i) {
        // initial guesses for the i-th largest root
        if (i == 0) {
            z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
        } else if (i == 1) {
            z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
        } else if (i == 2) {
            z = 1.86 * z - 0.86 * gh.nodes[0];
        } else if (i == 3) {
            z = 1.91 * z - 0.91 * gh.nodes[1];
        } else {
            z = 2.0 * z - gh.nodes[static_cast<std::size_t>(i - 2)];
        }
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p1 = 0.7511255444649424828587030047762276930510;  // pi^(-1/4)
            double p2 = 0.0;
            for (int j = 1; j <= n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = z * std::sqrt(2.0 / j) * p2 - std::sqrt((j - 1.0) / j) * p3;
            }
            pp = std::sqrt(2.0 * n) * p2;
            const double dz = p1 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15 * std::max(1.0, std::abs(z))) break;
        }
        gh.nodes[static_cast<std::size_t>(i)] = z;
        gh.nodes[static_cast<std::size_t>(n - 1 - i)] = -z;
        gh.weights[static_cast<std::size_t>(i)] = 2.0 / (pp * pp);
        gh.weights[static_cast<std::size_t>(n - 1 - i)] = gh.weights[static_cast<std::size_t>(i)];
    }
    return gh;
}

}  // namespace

const GaussHermite& gauss_hermite(int n) {
    static std::mutex mu;
    static std::map<int, GaussHermite> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, compute_gauss_hermite(n)).first;
    return it->second;
}

std::vector<double> branch_bit_mi(const HierPam& pam, double noise_var, int nodes) {
    if (!(noise_var > 0.0) && !std::isinf(noise_var))
        throw std::invalid_argument("noise variance must be positive");
    const int m = pam.bits_per_symbol;
    if (m == 0) return {};
    const GaussHermite& gh = gauss_hermite(nodes);
    const int npts = pam.num_points();
    const double inv_s2v = std::isinf(noise_var) ? 0.0 : 1.0 / std::sqrt(2.0 * noise_var);

    std::vector<double> acc(static_cast<std::size_t>(m), 0.0);
    std::vector<double> a(static_cast<std::size_t>(npts));
    std::vector<double> e(static_cast<std::size_t>(npts));
    for (int i = 0; i < npts; ++i) {
        const double si = pam.points[static_cast<std::size_t>(i)];
        const std::uint32_t li = pam.labels[static_cast<std::size_t>(i)];
        for (int t = 0; t < nodes; ++t) {
            const double xt = gh.nodes[static_cast<std::size_t>(t)];
            // log-density (up to a common constant) of y = si + sqrt(2v) xt
            // under each mixture component j
            double amax = -std::numeric_limits<double>::infinity();
            for (int j = 0; j < npts; ++j) {
                const double tj = xt + (si - pam.points[static_cast<std::size_t>(j)]) * inv_s2v;
                a[static_cast<std::size_t>(j)] = -tj * tj;
                if (a[static_cast<std::size_t>(j)] > amax) amax = a[static_cast<std::size_t>(j)];
            }
            double den = 0.0;
            for (int j = 0; j < npts; ++j) {
                e[static_cast<std::size_t>(j)] = std::exp(a[static_cast<std::size_t>(j)] - amax);
                den += e[static_cast<std::size_t>(j)];
            }
            const double wt = gh.weights[static_cast<std::size_t>(t)];
            const double log_den = std::log(den);
            for (int k = 1; k <= m; ++k) {
                const int b = label_bit(li, k, m);
                double num = 0.0;
                for (int j = 0; j < npts; ++j)
                    if (label_bit(pam.labels[static_cast<std::size_t>(j)], k, m) == b)
                        num += e[static_cast<std::size_t>(j)];
                acc[static_cast<std::size_t>(k - 1)] += wt * (std::log(num) - log_den);
            }
        }
    }
    // I_k = 1 + E[log2(2 f(y|b)/(f(y|0)+f(y|1)))] - 1; the label sets are
    // balanced, so the subset/total ratio absorbs the mixture weights
    std::vector<double> mi(static_cast<std::size_t>(m));
    const double norm = 1.0 / (npts * std::sqrt(kPi) * kLn2);
    for (int k = 0; k < m; ++k)
        mi[static_cast<std::size_t>(k)] =
            std::clamp(1.0 + acc[static_cast<std::size_t>(k)] * norm, 0.0, 1.0);
    return mi;
}

double bit_mi_quadrature(const HierPam& pam, int k, double noise_var, int nodes) {
    if (k < 1 || k > pam.bits_per_symbol) throw std::invalid_argument("bit index out of range");
    return branch_bit_mi(pam, noise_var, nodes)[static_cast<std::size_t>(k - 1)];
}

namespace {

// log f(y | b_k = b) - log f(y), up to the shared Gaussian normalization;
// returns the pair (log num over subset, log den over all points)
std::pair<double, double> conditional_log_ratio(const HierPam& pam, int k, int b,
                                                double inv_2v, double y) {
    const int m = pam.bits_per_symbol;
    const int npts = pam.num_points();
    double amax = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < npts; ++j) {
        const double d = y - pam.points[static_cast<std::size_t>(j)];
        const double aj = -d * d * inv_2v;
        if (aj > amax) amax = aj;
    }
    double num = 0.0, den = 0.0;
    for (int j = 0; j < npts; ++j) {
        const double d = y - pam.points[static_cast<std::size_t>(j)];
        const double ej = std::exp(-d * d * inv_2v - amax);
        den += ej;
        if (label_bit(pam.labels[static_cast<std::size_t>(j)], k, m) == b) num += ej;
    }
    return {std::log(num) + amax, std::log(den) + amax};
}

}  // namespace

double bit_mi_montecarlo(const HierPam& pam, int k, double noise_var,
                         std::size_t n_samples, std::uint64_t seed) {
    const int m = pam.bits_per_symbol;
    if (k < 1 || k > m) throw std::invalid_argument("bit index out of range");
    if (!(noise_var > 0.0)) throw std::invalid_argument("noise variance must be positive");
    if (n_samples < 10000) throw std::invalid_argument("need at least 1e4 samples");
    const int npts = pam.num_points();
    const double sigma = std::sqrt(noise_var);
    const double inv_2v = 1.0 / (2.0 * noise_var);
    const CounterRng rng{seed};

    double acc = 0.0;
    for (std::size_t n = 0; n < n_samples; ++n) {
        const std::uint64_t idx_bits = rng.bits(n, 0);
        const int i = static_cast<int>(idx_bits & static_cast<std::uint64_t>(npts - 1));
        const int b = label_bit(pam.labels[static_cast<std::size_t>(i)], k, m);
        const double y =
            pam.points[static_cast<std::size_t>(i)] + sigma * rng.normal(n, 1);
        const auto [lnum, lden] = conditional_log_ratio(pam, k, b, inv_2v, y);
        acc += 1.0 + (lnum - lden) / kLn2;  // log2(2 num/den)
    }
    return std::clamp(acc / static_cast<double>(n_samples), 0.0, 1.0);
}

double exact_bit_llr(const HierPam& pam, int k, double noise_var, double y) {
    if (k < 1 || k > pam.bits_per_symbol)
        throw std::invalid_argument("bit index out of range");
    if (!(noise_var > 0.0)) throw std::invalid_argument("noise variance must be positive");
    const double inv_2v = 1.0 / (2.0 * noise_var);
    const auto [l1, d1] = conditional_log_ratio(pam, k, 1, inv_2v, y);
    const auto [l0, d0] = conditional_log_ratio(pam, k, 0, inv_2v, y);
    (void)d1;
    (void)d0;
    return l1 - l0;
}

BitChannelRates mode_bit_mi(const ModeConfig& mode,
                            const std::array<EquivalentChannel, 2>& eqs, int nodes) {
    BitChannelRates rates;
    for (int user = 1; user <= 2; ++user) {
        UserBitMi& ur = rates[static_cast<std::size_t>(user - 1)];
        if (mode.user_bits(user) == 0) continue;
        const EquivalentChannel& eq = eqs[static_cast<std::size_t>(user - 1)];
        if (eq.gain <= 0.0) {
            // deaf user: every layer of its composite carries zero information
            ur.i_mi.assign(static_cast<std::size_t>(mode.m0 + mode.private_i_bits(user)), 0.0);
            ur.q_mi.assign(static_cast<std::size_t>(mode.n0 + mode.private_q_bits(user)), 0.0);
            continue;
        }
        auto [pam_i, pam_q] = compose_received_constellation(mode, eq, user);
        ur.i_mi = branch_bit_mi(pam_i, eq.noise_var, nodes);
        ur.q_mi = branch_bit_mi(pam_q, eq.noise_var, nodes);
    }
    return rates;
}

RatePoint user_rates(const ModeConfig& mode, const std::array<EquivalentChannel, 2>& eqs,
                     int nodes) {
    validate_mode(mode);
    const BitChannelRates rates = mode_bit_mi(mode, eqs, nodes);
    RatePoint rp;
    rp.mode = mode;
    double r[2] = {0.0, 0.0};
    for (int user = 1; user <= 2; ++user) {
        const UserBitMi& ur = rates[static_cast<std::size_t>(user - 1)];
        double sum = 0.0;
        for (int k = 1; k <= mode.m0; ++k) {
            const bool to_user1 = ((mode.assign_i >> (k - 1)) & 1u) != 0;
            if (to_user1 == (user == 1)) sum += ur.i_mi[static_cast<std::size_t>(k - 1)];
        }
        for (int k = 1; k <= mode.n0; ++k) {
            const bool to_user1 = ((mode.assign_q >> (k - 1)) & 1u) != 0;
            if (to_user1 == (user == 1)) sum += ur.q_mi[static_cast<std::size_t>(k - 1)];
        }
        for (std::size_t k = static_cast<std::size_t>(mode.m0); k < ur.i_mi.size(); ++k)
            sum += ur.i_mi[k];
        for (std::size_t k = static_cast<std::size_t>(mode.n0); k < ur.q_mi.size(); ++k)
            sum += ur.q_mi[k];
        r[user - 1] = sum;
    }
    rp.r1 = r[0];
    rp.r2 = r[1];
    return rp;
}

}  // namespace pxqama
