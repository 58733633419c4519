#include "pxqama/hqam.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pxqama/mode.hpp"

namespace pxqama {

namespace {

constexpr double kEnergyTol = 1e-12;
// relative slack when checking d_k >= 2 d_{k+1}; exact ties are valid
constexpr double kOrderSlack = 1e-12;

void check_branch(const std::vector<double>& d, const char* branch) {
    for (std::size_t k = 0; k < d.size(); ++k) {
        if (!(d[k] > 0.0))
            throw std::domain_error(std::string("nonpositive distance on ") + branch + " branch");
        if (k + 1 < d.size() && d[k] < 2.0 * d[k + 1] * (1.0 - kOrderSlack))
            throw std::domain_error(std::string("distance ordering violated on ") + branch +
                                    " branch: d_k < 2 d_{k+1}");
    }
}

double branch_energy(const std::vector<double>& d) {
    double e = 0.0;
    for (double v : d) e += v * v;
    return e;
}

int bits_to_int(const Bits& b) { return static_cast<int>(b.size()); }

}  // namespace

double profile_energy(const DistanceProfile& p) {
    return branch_energy(p.i_distances) + branch_energy(p.q_distances);
}

void validate_profile(const DistanceProfile& p) {
    check_branch(p.i_distances, "I");
    check_branch(p.q_distances, "Q");
    if (!p.empty() && std::abs(profile_energy(p) - 1.0) > kEnergyTol)
        throw std::domain_error("distance profile is not unit energy");
}

DistanceProfile make_profile(std::vector<double> i_ratios, std::vector<double> q_ratios) {
    DistanceProfile p{std::move(i_ratios), std::move(q_ratios)};
    check_branch(p.i_distances, "I");
    check_branch(p.q_distances, "Q");
    if (p.empty()) return p;
    const double scale = 1.0 / std::sqrt(profile_energy(p));
    for (double& v : p.i_distances) v *= scale;
    for (double& v : p.q_distances) v *= scale;
    return p;
}

DistanceProfile uniform_profile(int m, int n, double ratio) {
    if (m < 0 || n < 0) throw std::invalid_argument("negative branch bit count");
    if (ratio < 2.0) throw std::invalid_argument("layer ratio must be >= 2");
    std::vector<double> ri(static_cast<std::size_t>(m));
    std::vector<double> rq(static_cast<std::size_t>(n));
    for (int k = 0; k < m; ++k) ri[static_cast<std::size_t>(k)] = std::pow(ratio, m - 1 - k);
    for (int k = 0; k < n; ++k) rq[static_cast<std::size_t>(k)] = std::pow(ratio, n - 1 - k);
    return make_profile(std::move(ri), std::move(rq));
}

HierPam build_hier_pam(int m, const std::vector<double>& distances) {
    if (m < 0) throw std::invalid_argument("negative bit count");
    if (static_cast<int>(distances.size()) != m)
        throw std::invalid_argument("distance count does not match bit count");
    check_branch(distances, "PAM");

    HierPam pam;
    pam.bits_per_symbol = m;
    pam.distances = distances;
    const int npts = 1 << m;
    pam.points.resize(static_cast<std::size_t>(npts));
    pam.labels.resize(static_cast<std::size_t>(npts));
    for (int idx = 0; idx < npts; ++idx) {
        // natural label = point index left to right; Gray = natural ^ (natural >> 1)
        double s = 0.0;
        for (int k = 1; k <= m; ++k) {
            const int a_k = (idx >> (m - k)) & 1;
            s += (a_k != 0 ? 1.0 : -1.0) * distances[static_cast<std::size_t>(k - 1)];
        }
        pam.points[static_cast<std::size_t>(idx)] = s;
        pam.labels[static_cast<std::size_t>(idx)] =
            static_cast<std::uint32_t>(idx ^ (idx >> 1));
    }
    return pam;
}

Bits gray_to_natural(const Bits& bits) {
    Bits out(bits.size());
    std::uint8_t acc = 0;
    for (std::size_t k = 0; k < bits.size(); ++k) {
        acc ^= static_cast<std::uint8_t>(bits[k] & 1u);
        out[k] = acc;
    }
    return out;
}

Bits natural_to_gray(const Bits& bits) {
    Bits out(bits.size());
    std::uint8_t prev = 0;
    for (std::size_t k = 0; k < bits.size(); ++k) {
        const std::uint8_t a = static_cast<std::uint8_t>(bits[k] & 1u);
        out[k] = static_cast<std::uint8_t>(a ^ prev);
        prev = a;
    }
    return out;
}

double gray_pam_point(const Bits& bits, const std::vector<double>& distances) {
    if (bits.size() != distances.size())
        throw std::invalid_argument("bit/distance length mismatch");
    double s = 0.0;
    int parity = 0;
    for (std::size_t k = 0; k < bits.size(); ++k) {
        parity ^= bits[k] & 1;
        s += (parity != 0 ? 1.0 : -1.0) * distances[k];  // (-1)^(1 + prefix sum)
    }
    return s;
}

double ext_pam_point(const Bits& bits, const std::vector<double>& distances) {
    if (bits.size() != distances.size())
        throw std::invalid_argument("bit/distance length mismatch");
    double s = 0.0;
    int parity = 0;
    for (std::size_t k = 0; k < bits.size(); ++k) {
        parity ^= bits[k] & 1;
        s += (parity != 0 ? -1.0 : 1.0) * distances[k];  // (-1)^(prefix sum)
    }
    return s;
}

std::complex<double> map_shared(const Bits& bi, const Bits& bq, const DistanceProfile& d0) {
    if (bits_to_int(bi) != d0.i_bits() || bits_to_int(bq) != d0.q_bits())
        throw std::invalid_argument("shared bit lengths do not match profile");
    return {gray_pam_point(bi, d0.i_distances), gray_pam_point(bq, d0.q_distances)};
}

std::complex<double> map_shared(const BitWord& w, const DistanceProfile& d0) {
    return map_shared(w.shared_i, w.shared_q, d0);
}

std::complex<double> map_private(const Bits& bi, const Bits& bq,
                                 const Bits& shared_bi, const Bits& shared_bq,
                                 const DistanceProfile& du) {
    if (bits_to_int(bi) != du.i_bits() || bits_to_int(bq) != du.q_bits())
        throw std::invalid_argument("private bit lengths do not match profile");
    int par_i = 0, par_q = 0;
    for (auto b : shared_bi) par_i ^= b & 1;
    for (auto b : shared_bq) par_q ^= b & 1;
    // sign (-1)^(1 + sum shared bits) couples the private layer to the
    // shared word so the superposition stays Gray-coded
    const double sgn_i = (par_i != 0) ? 1.0 : -1.0;
    const double sgn_q = (par_q != 0) ? 1.0 : -1.0;
    return {sgn_i * ext_pam_point(bi, du.i_distances),
            sgn_q * ext_pam_point(bq, du.q_distances)};
}

std::complex<double> map_private(const BitWord& w, const DistanceProfile& du) {
    return map_private(w.private_i, w.private_q, w.shared_i, w.shared_q, du);
}

namespace {

std::vector<double> compose_branch(const std::vector<double>& shared,
                                   const std::vector<double>& priv,
                                   double beta_shared, double beta_private,
                                   const char* branch) {
    std::vector<double> out;
    out.reserve(shared.size() + priv.size());
    for (double d : shared) out.push_back(beta_shared * d);
    for (double d : priv) out.push_back(beta_private * d);
    // the seam is the only place ordering can break: both halves inherit
    // their ordering from the component profiles
    if (!shared.empty() && !priv.empty()) {
        const double hi = out[shared.size() - 1];
        const double lo = out[shared.size()];
        if (hi < 2.0 * lo * (1.0 - kOrderSlack))
            throw std::domain_error(std::string("composite ordering violated on ") + branch +
                                    " branch seam");
    }
    check_branch(out, branch);
    return out;
}

}  // namespace

DistanceProfile compose_profile(const ModeConfig& mode, double beta_shared,
                                double beta_private, int user) {
    if (user != 1 && user != 2) throw std::invalid_argument("user must be 1 or 2");
    const DistanceProfile& du = mode.private_profile(user);
    DistanceProfile out;
    out.i_distances = compose_branch(mode.d0.i_distances, du.i_distances,
                                     beta_shared, beta_private, "I");
    out.q_distances = compose_branch(mode.d0.q_distances, du.q_distances,
                                     beta_shared, beta_private, "Q");
    return out;
}

std::pair<HierPam, HierPam> compose_received_constellation(const ModeConfig& mode,
                                                           const EquivalentChannel& eq,
                                                           int user) {
    DistanceProfile comp = compose_profile(mode, eq.beta_shared, eq.beta_private, user);
    HierPam pam_i = build_hier_pam(comp.i_bits(), comp.i_distances);
    HierPam pam_q = build_hier_pam(comp.q_bits(), comp.q_distances);
    return {std::move(pam_i), std::move(pam_q)};
}

int nearest_point(const HierPam& pam, double y) {
    // points are sorted: binary search, then compare the two neighbors
    const auto& pts = pam.points;
    const auto it = std::lower_bound(pts.begin(), pts.end(), y);
    if (it == pts.begin()) return 0;
    if (it == pts.end()) return static_cast<int>(pts.size()) - 1;
    const auto hi = static_cast<int>(it - pts.begin());
    const int lo = hi - 1;
    return (y - pts[static_cast<std::size_t>(lo)] <= pts[static_cast<std::size_t>(hi)] - y)
               ? lo
               : hi;
}

BitWord split_composite_labels(std::uint32_t label_i, std::uint32_t label_q,
                               int m0, int n0, int mu, int nu) {
    BitWord w;
    const auto take = [](std::uint32_t label, int total, int from, int count, Bits& out) {
        out.resize(static_cast<std::size_t>(count));
        for (int k = 0; k < count; ++k)
            out[static_cast<std::size_t>(k)] =
                static_cast<std::uint8_t>((label >> (total - (from + k) - 1)) & 1u);
    };
    take(label_i, m0 + mu, 0, m0, w.shared_i);
    take(label_i, m0 + mu, m0, mu, w.private_i);
    take(label_q, n0 + nu, 0, n0, w.shared_q);
    take(label_q, n0 + nu, n0, nu, w.private_q);
    return w;
}

}  // namespace pxqama
