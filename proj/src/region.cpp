#include "pxqama/region.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <stdexcept>
#include <unordered_map>

#include "pxqama/parallel.hpp"

namespace pxqama {

namespace {

constexpr double kOrderSlack = 1e-12;

void validate_grids(const SweepGrids& g) {
    if (g.theta0_count < 1) throw std::invalid_argument("theta0 grid is empty");
    if (g.power_steps < 1) throw std::invalid_argument("power grid is empty");
    if (g.max_branch_bits < 1 || g.max_branch_bits > 3)
        throw std::invalid_argument("max_branch_bits must be in [1, 3]");
    if (g.distance_ratios.empty()) throw std::invalid_argument("distance ratio grid is empty");
    for (double r : g.distance_ratios)
        if (r < 2.0) throw std::invalid_argument("distance ratios must be >= 2");
}

struct SizeCombo {
    int m0, n0, m1, n1;
    double ratio;
    DistanceProfile d0, d1;  // uniform profiles (d2 == d1)

    bool is_sdma() const { return m0 == 0 && n0 == 0; }
    bool is_qama_bf() const { return m1 == 0 && n1 == 0; }
    bool iq_symmetric() const { return m0 == n0 && m1 == n1; }
};

std::vector<SizeCombo> make_size_combos(const SweepGrids& grids) {
    std::vector<SizeCombo> combos;
    const int cap = grids.max_branch_bits;
    for (double ratio : grids.distance_ratios)
        for (int m0 = 0; m0 <= cap; ++m0)
            for (int m1 = 0; m0 + m1 <= cap; ++m1)
                for (int n0 = 0; n0 <= cap; ++n0)
                    for (int n1 = 0; n0 + n1 <= cap; ++n1) {
                        if (m0 + n0 + m1 + n1 == 0) continue;
                        if (grids.family == ModeFamily::Sdma && m0 + n0 != 0) continue;
                        if (grids.family == ModeFamily::QamaBf && m1 + n1 != 0) continue;
                        SizeCombo c{m0, n0, m1, n1, ratio,
                                    uniform_profile(m0, n0, ratio),
                                    uniform_profile(m1, n1, ratio)};
                        combos.push_back(std::move(c));
                    }
    return combos;
}

struct PowerTriple {
    int i, j, k;  // alpha^2 numerators over power_steps
    double a0, a1, a2;
};

std::vector<PowerTriple> make_power_triples(int steps) {
    std::vector<PowerTriple> out;
    const double s = static_cast<double>(steps);
    for (int i = 0; i <= steps; ++i)
        for (int j = 0; i + j <= steps; ++j) {
            const int k = steps - i - j;
            out.push_back({i, j, k, std::sqrt(i / s), std::sqrt(j / s), std::sqrt(k / s)});
        }
    return out;
}

bool seam_ok(const std::vector<double>& shared, const std::vector<double>& priv,
             double beta0, double betau) {
    if (shared.empty() || priv.empty()) return true;
    return beta0 * shared.back() >= 2.0 * betau * priv.front() * (1.0 - kOrderSlack);
}

struct ConfigCtx {
    const SizeCombo* sizes;
    int combo_idx;
    int theta_idx;
    double theta0;
    const PowerTriple* power;
    int power_idx;
    EquivGains gains;
};

// Walk every (sizes, theta0, power) tuple of the grid, applying the
// power-consistency, degenerate-gain and composite-ordering filters.
template <class Fn>
void for_each_config(const ChannelPair& ch, const SweepGrids& grids, SweepStats& stats,
                     Fn&& fn) {
    validate_grids(grids);
    const auto combos = make_size_combos(grids);
    const auto powers = make_power_triples(grids.power_steps);
    stats.n_size_combos = combos.size();

    std::vector<double> theta_grid(static_cast<std::size_t>(grids.theta0_count));
    for (int t = 0; t < grids.theta0_count; ++t)
        theta_grid[static_cast<std::size_t>(t)] =
            grids.theta0_count == 1
                ? 0.0
                : ch.theta * static_cast<double>(t) / (grids.theta0_count - 1);

    for (std::size_t ci = 0; ci < combos.size(); ++ci) {
        const SizeCombo& c = combos[ci];
        const bool has_shared = c.m0 + c.n0 > 0;
        const bool has_private = c.m1 + c.n1 > 0;
        for (std::size_t pi = 0; pi < powers.size(); ++pi) {
            const PowerTriple& pw = powers[pi];
            if ((pw.i > 0) != has_shared) {
                ++stats.n_filtered[static_cast<std::size_t>(
                    pw.i > 0 ? FilterReason::PowerWithoutBits : FilterReason::BitsWithoutPower)];
                continue;
            }
            if ((pw.j > 0) != has_private || (pw.k > 0) != has_private) {
                ++stats.n_filtered[static_cast<std::size_t>(
                    has_private ? FilterReason::BitsWithoutPower : FilterReason::PowerWithoutBits)];
                continue;
            }
            // theta0 is meaningful only while the shared beam carries power
            const int theta_count = pw.i > 0 ? grids.theta0_count : 1;
            for (int t = 0; t < theta_count; ++t) {
                const double theta0 = theta_grid[static_cast<std::size_t>(t)];
                const EquivGains g = closed_form_gains(ch, theta0, pw.a0, pw.a1, pw.a2);
                // a user with exactly zero gain is deaf: its layers carry no
                // information, so only assignments that give it nothing
                // survive; both users deaf means nothing is received at all
                if (g.g1 <= 0.0 && g.g2 <= 0.0) {
                    ++stats.n_filtered[static_cast<std::size_t>(FilterReason::DegenerateGain)];
                    continue;
                }
                bool ordered = true;
                if (g.g1 > 0.0)
                    ordered = seam_ok(c.d0.i_distances, c.d1.i_distances, g.beta10, g.beta11) &&
                              seam_ok(c.d0.q_distances, c.d1.q_distances, g.beta10, g.beta11);
                if (ordered && g.g2 > 0.0)
                    ordered = seam_ok(c.d0.i_distances, c.d1.i_distances, g.beta20, g.beta22) &&
                              seam_ok(c.d0.q_distances, c.d1.q_distances, g.beta20, g.beta22);
                if (!ordered) {
                    ++stats.n_filtered[static_cast<std::size_t>(FilterReason::CompositeOrdering)];
                    continue;
                }
                ++stats.n_configs;
                fn(ConfigCtx{&c, static_cast<int>(ci), t, theta0, &pw,
                             static_cast<int>(pi), g});
            }
        }
    }
}

ModeConfig materialize_mode(const ConfigCtx& ctx, std::uint32_t assign_i,
                            std::uint32_t assign_q) {
    const SizeCombo& c = *ctx.sizes;
    ModeConfig m;
    m.m0 = c.m0;
    m.n0 = c.n0;
    m.m1 = m.m2 = c.m1;
    m.n1 = m.n2 = c.n1;
    m.d0 = c.d0;
    m.d1 = c.d1;
    m.d2 = c.d1;
    m.theta0 = ctx.theta0;
    m.alpha0 = ctx.power->a0;
    m.alpha1 = ctx.power->a1;
    m.alpha2 = ctx.power->a2;
    m.ratio = c.ratio;
    m.assign_i = assign_i;
    m.assign_q = assign_q;
    return m;
}

template <class Fn>
void for_each_assignment(const SizeCombo& c, bool dedup_iq, bool u1_dead, bool u2_dead,
                         Fn&& fn) {
    const std::uint32_t ni = 1u << c.m0;
    const std::uint32_t nq = 1u << c.n0;
    const std::uint32_t full_i = ni - 1, full_q = nq - 1;
    const bool dedup = dedup_iq && c.iq_symmetric();
    for (std::uint32_t ai = 0; ai < ni; ++ai)
        for (std::uint32_t aq = 0; aq < nq; ++aq) {
            if (dedup && aq < ai) continue;  // mirrored assignment of a symmetric mode
            if (u1_dead && (ai != 0 || aq != 0)) continue;
            if (u2_dead && (ai != full_i || aq != full_q)) continue;
            fn(ai, aq);
        }
}

}  // namespace

std::vector<ModeConfig> enumerate_modes(const Scenario& sc, const SweepGrids& grids,
                                        SweepStats* stats) {
    const ChannelPair ch = make_channels(sc.lambda1, sc.lambda2, sc.rho, sc.sigma2);
    SweepStats local;
    std::vector<ModeConfig> modes;
    for_each_config(ch, grids, local, [&](const ConfigCtx& ctx) {
        for_each_assignment(*ctx.sizes, grids.dedup_iq_symmetry, ctx.gains.g1 <= 0.0,
                            ctx.gains.g2 <= 0.0, [&](std::uint32_t ai, std::uint32_t aq) {
                                modes.push_back(materialize_mode(ctx, ai, aq));
                                ++local.n_modes_evaluated;
                            });
    });
    if (stats != nullptr) *stats = local;
    return modes;
}

RatePoint evaluate_mode(const ModeConfig& mode, const Scenario& sc, int nodes) {
    validate_mode(mode);
    const ChannelPair ch = make_channels(sc.lambda1, sc.lambda2, sc.rho, sc.sigma2);
    const PrecoderSet pre =
        assemble_precoders(ch, mode.theta0, mode.alpha0, mode.alpha1, mode.alpha2);
    const auto eqs = equivalent_channels(ch, pre, mode);
    return user_rates(mode, eqs, nodes);
}

// ---------------------------------------------------------------------------
// Rate region assembly

namespace {

struct HullPoint {
    double x, y;
    std::ptrdiff_t idx;
};

double cross(const HullPoint& o, const HullPoint& a, const HullPoint& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

// Andrew monotone chain, CCW, collinear points dropped.
std::vector<HullPoint> convex_hull(std::vector<HullPoint> pts) {
    std::sort(pts.begin(), pts.end(), [](const HullPoint& a, const HullPoint& b) {
        if (a.x != b.x) return a.x < b.x;
        if (a.y != b.y) return a.y < b.y;
        return a.idx < b.idx;
    });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](const HullPoint& a, const HullPoint& b) {
                              return a.x == b.x && a.y == b.y;
                          }),
              pts.end());
    const std::size_t n = pts.size();
    if (n <= 2) return pts;
    std::vector<HullPoint> hull(2 * n);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
        hull[k++] = pts[i];
    }
    const std::size_t lower = k + 1;
    for (std::size_t i = n - 1; i-- > 0;) {
        while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return hull;
}

double polygon_area(const std::vector<HullPoint>& poly) {
    double s = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const HullPoint& a = poly[i];
        const HullPoint& b = poly[(i + 1) % poly.size()];
        s += a.x * b.y - b.x * a.y;
    }
    return 0.5 * std::abs(s);
}

}  // namespace

RateRegion build_region(std::vector<RatePoint> points) {
    if (points.empty()) throw std::invalid_argument("build_region: no rate points");
    RateRegion region;
    std::sort(points.begin(), points.end(), [](const RatePoint& a, const RatePoint& b) {
        if (a.r1 != b.r1) return a.r1 < b.r1;
        return a.r2 < b.r2;
    });
    region.points = std::move(points);
    region.n_evaluated = region.points.size();

    double r1max = 0.0, r2max = 0.0;
    for (const RatePoint& p : region.points) {
        r1max = std::max(r1max, p.r1);
        r2max = std::max(r2max, p.r2);
    }

    std::vector<HullPoint> pts;
    pts.reserve(region.points.size() + 3);
    bool have_a1 = false, have_a2 = false, have_origin = false;
    for (std::size_t i = 0; i < region.points.size(); ++i) {
        const RatePoint& p = region.points[i];
        pts.push_back({p.r1, p.r2, static_cast<std::ptrdiff_t>(i)});
        have_a1 = have_a1 || (p.r1 == r1max && p.r2 == 0.0);
        have_a2 = have_a2 || (p.r1 == 0.0 && p.r2 == r2max);
        have_origin = have_origin || (p.r1 == 0.0 && p.r2 == 0.0);
    }
    if (!have_origin) pts.push_back({0.0, 0.0, -1});
    if (!have_a1 && r1max > 0.0) pts.push_back({r1max, 0.0, -1});
    if (!have_a2 && r2max > 0.0) pts.push_back({0.0, r2max, -1});

    std::vector<HullPoint> hull = convex_hull(std::move(pts));
    region.area = hull.size() >= 3 ? polygon_area(hull) : 0.0;

    // hull is CCW starting at the lexicographically smallest point = origin;
    // the rest is the frontier from (R1max, 0) up to (0, R2max)
    for (std::size_t i = 0; i < hull.size(); ++i) {
        if (hull[i].x == 0.0 && hull[i].y == 0.0) {
            std::rotate(hull.begin(), hull.begin() + static_cast<std::ptrdiff_t>(i), hull.end());
            break;
        }
    }
    for (std::size_t i = 1; i < hull.size(); ++i)
        region.hull.push_back({hull[i].x, hull[i].y, hull[i].idx});
    if (region.hull.empty() && !region.points.empty()) {
        // degenerate: everything at the origin
        region.hull.push_back({0.0, 0.0, 0});
    }
    return region;
}

std::vector<bool> on_hull_flags(const RateRegion& region) {
    std::vector<bool> flags(region.points.size(), false);
    for (const HullVertex& v : region.hull)
        if (v.point_index >= 0) flags[static_cast<std::size_t>(v.point_index)] = true;
    return flags;
}

// ---------------------------------------------------------------------------
// Sweep

namespace {

struct MiKey {
    std::int32_t combo;  // size combo index (fixes profiles and ratio)
    std::int8_t branch;  // 0 = I, 1 = Q
    double beta0, betau, noise_var;

    bool operator==(const MiKey& o) const {
        return combo == o.combo && branch == o.branch && beta0 == o.beta0 &&
               betau == o.betau && noise_var == o.noise_var;
    }
};

struct MiKeyHash {
    std::size_t operator()(const MiKey& k) const {
        auto mix = [](std::size_t h, std::uint64_t v) {
            h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
            return h;
        };
        std::uint64_t b0, bu, nv;
        std::memcpy(&b0, &k.beta0, 8);
        std::memcpy(&bu, &k.betau, 8);
        std::memcpy(&nv, &k.noise_var, 8);
        std::size_t h = static_cast<std::size_t>(k.combo) * 1315423911u +
                        static_cast<std::size_t>(k.branch);
        h = mix(h, b0);
        h = mix(h, bu);
        return mix(h, nv);
    }
};

struct ConfigRec {
    std::int32_t combo;
    std::int16_t theta_idx;
    std::int32_t power_idx;
    double theta0;
    std::int32_t mi_id[4];  // u1-I, u1-Q, u2-I, u2-Q; -1 for empty branch
};

struct MiVec {
    double v[3] = {0.0, 0.0, 0.0};
    std::int8_t n = 0;
};

// Pareto-efficient set of (r1, r2) with provenance, keyed by r1 with r2
// strictly decreasing. Deterministic given a deterministic offer order.
class ParetoSink {
  public:
    struct Rec {
        double r2;
        std::uint32_t config;
        std::uint8_t assign_i, assign_q;
    };

    void offer(double r1, double r2, std::uint32_t config, std::uint8_t ai, std::uint8_t aq) {
        auto it = map_.lower_bound(r1);
        if (it != map_.end() && it->second.r2 >= r2) return;  // dominated or duplicate
        if (it != map_.begin()) {
            auto prev = std::prev(it);
            while (prev->second.r2 <= r2) {
                if (prev == map_.begin()) {
                    map_.erase(prev);
                    prev = map_.end();
                    break;
                }
                auto dead = prev--;
                map_.erase(dead);
            }
        }
        map_[r1] = Rec{r2, config, ai, aq};
    }

    const std::map<double, Rec>& entries() const { return map_; }
    std::size_t size() const { return map_.size(); }

  private:
    std::map<double, Rec> map_;
};

}  // namespace

SweepResult sweep_region(const Scenario& sc, const SweepGrids& grids, unsigned workers,
                         int nodes) {
    const ChannelPair ch = make_channels(sc.lambda1, sc.lambda2, sc.rho, sc.sigma2);
    SweepResult result;

    const auto combos = make_size_combos(grids);
    std::vector<ConfigRec> configs;
    std::vector<MiKey> keys;
    std::unordered_map<MiKey, std::int32_t, MiKeyHash> key_ids;

    auto intern = [&](std::int32_t combo, int branch_bits_total, std::int8_t branch,
                      double b0, double bu, double nv) -> std::int32_t {
        if (branch_bits_total == 0) return -1;
        const MiKey key{combo, branch, b0, bu, nv};
        auto [it, inserted] = key_ids.try_emplace(key, static_cast<std::int32_t>(keys.size()));
        if (inserted) keys.push_back(key);
        return it->second;
    };

    for_each_config(ch, grids, result.stats, [&](const ConfigCtx& ctx) {
        const SizeCombo& c = *ctx.sizes;
        const EquivGains& g = ctx.gains;
        const double nv1 = ch.sigma2 / (2.0 * g.g1 * g.g1);
        const double nv2 = ch.sigma2 / (2.0 * g.g2 * g.g2);
        ConfigRec rec;
        rec.combo = static_cast<std::int32_t>(ctx.combo_idx);
        rec.theta_idx = static_cast<std::int16_t>(ctx.theta_idx);
        rec.power_idx = static_cast<std::int32_t>(ctx.power_idx);
        rec.theta0 = ctx.theta0;
        const bool u1_dead = g.g1 <= 0.0, u2_dead = g.g2 <= 0.0;
        rec.mi_id[0] = u1_dead ? -1 : intern(rec.combo, c.m0 + c.m1, 0, g.beta10, g.beta11, nv1);
        rec.mi_id[1] = u1_dead ? -1 : intern(rec.combo, c.n0 + c.n1, 1, g.beta10, g.beta11, nv1);
        rec.mi_id[2] = u2_dead ? -1 : intern(rec.combo, c.m0 + c.m1, 0, g.beta20, g.beta22, nv2);
        rec.mi_id[3] = u2_dead ? -1 : intern(rec.combo, c.n0 + c.n1, 1, g.beta20, g.beta22, nv2);
        configs.push_back(rec);
    });

    // compute every distinct branch MI once, in parallel
    std::vector<MiVec> mi_values(keys.size());
    parallel_for(keys.size(), workers, [&](std::size_t i) {
        const MiKey& key = keys[i];
        const SizeCombo& c = combos[static_cast<std::size_t>(key.combo)];
        const auto& shared = key.branch == 0 ? c.d0.i_distances : c.d0.q_distances;
        const auto& priv = key.branch == 0 ? c.d1.i_distances : c.d1.q_distances;
        std::vector<double> dist;
        dist.reserve(shared.size() + priv.size());
        for (double d : shared) dist.push_back(key.beta0 * d);
        for (double d : priv) dist.push_back(key.betau * d);
        const HierPam pam = build_hier_pam(static_cast<int>(dist.size()), dist);
        const std::vector<double> mi = branch_bit_mi(pam, key.noise_var, nodes);
        MiVec& out = mi_values[i];
        out.n = static_cast<std::int8_t>(mi.size());
        for (std::size_t k = 0; k < mi.size(); ++k) out.v[k] = mi[k];
    });

    // assemble rate points over all assignments and Pareto-prune
    ParetoSink all, sdma, qama_bf;
    std::size_t evaluated = 0;
    for (std::size_t cfg = 0; cfg < configs.size(); ++cfg) {
        const ConfigRec& rec = configs[cfg];
        const SizeCombo& c = combos[static_cast<std::size_t>(rec.combo)];
        const MiVec zero;
        const MiVec& u1i = rec.mi_id[0] >= 0 ? mi_values[static_cast<std::size_t>(rec.mi_id[0])] : zero;
        const MiVec& u1q = rec.mi_id[1] >= 0 ? mi_values[static_cast<std::size_t>(rec.mi_id[1])] : zero;
        const MiVec& u2i = rec.mi_id[2] >= 0 ? mi_values[static_cast<std::size_t>(rec.mi_id[2])] : zero;
        const MiVec& u2q = rec.mi_id[3] >= 0 ? mi_values[static_cast<std::size_t>(rec.mi_id[3])] : zero;

        double priv1 = 0.0, priv2 = 0.0;
        for (int k = c.m0; k < c.m0 + c.m1; ++k) priv1 += u1i.v[k];
        for (int k = c.n0; k < c.n0 + c.n1; ++k) priv1 += u1q.v[k];
        for (int k = c.m0; k < c.m0 + c.m1; ++k) priv2 += u2i.v[k];
        for (int k = c.n0; k < c.n0 + c.n1; ++k) priv2 += u2q.v[k];

        // subset sums of the shared layers for every assignment mask
        double s1i[8], s2i[8], s1q[8], s2q[8];
        const std::uint32_t ni = 1u << c.m0;
        const std::uint32_t nq = 1u << c.n0;
        for (std::uint32_t m = 0; m < ni; ++m) {
            double a = 0.0, b = 0.0;
            for (int k = 0; k < c.m0; ++k)
                if ((m >> k) & 1u) a += u1i.v[k]; else b += u2i.v[k];
            s1i[m] = a;
            s2i[m] = b;
        }
        for (std::uint32_t m = 0; m < nq; ++m) {
            double a = 0.0, b = 0.0;
            for (int k = 0; k < c.n0; ++k)
                if ((m >> k) & 1u) a += u1q.v[k]; else b += u2q.v[k];
            s1q[m] = a;
            s2q[m] = b;
        }

        // every in-sweep user has composite bits, so both ids -1 means deaf
        const bool u1_dead = rec.mi_id[0] < 0 && rec.mi_id[1] < 0;
        const bool u2_dead = rec.mi_id[2] < 0 && rec.mi_id[3] < 0;
        for_each_assignment(c, grids.dedup_iq_symmetry, u1_dead, u2_dead,
                            [&](std::uint32_t ai, std::uint32_t aq) {
            const double r1 = priv1 + s1i[ai] + s1q[aq];
            const double r2 = priv2 + s2i[ai] + s2q[aq];
            ++evaluated;
            all.offer(r1, r2, static_cast<std::uint32_t>(cfg), static_cast<std::uint8_t>(ai),
                      static_cast<std::uint8_t>(aq));
            if (c.is_sdma())
                sdma.offer(r1, r2, static_cast<std::uint32_t>(cfg),
                           static_cast<std::uint8_t>(ai), static_cast<std::uint8_t>(aq));
            if (c.is_qama_bf())
                qama_bf.offer(r1, r2, static_cast<std::uint32_t>(cfg),
                              static_cast<std::uint8_t>(ai), static_cast<std::uint8_t>(aq));
        });
    }
    result.stats.n_modes_evaluated = evaluated;

    const auto powers = make_power_triples(grids.power_steps);
    auto materialize = [&](const ParetoSink& sink, std::size_t n_eval) {
        std::vector<RatePoint> pts;
        pts.reserve(sink.size());
        for (const auto& [r1, rec] : sink.entries()) {
            const ConfigRec& cr = configs[rec.config];
            const SizeCombo& c = combos[static_cast<std::size_t>(cr.combo)];
            const PowerTriple& pw = powers[static_cast<std::size_t>(cr.power_idx)];
            ConfigCtx ctx{&c, cr.combo, cr.theta_idx, cr.theta0, &pw,
                          static_cast<int>(cr.power_idx), EquivGains{}};
            RatePoint p;
            p.r1 = r1;
            p.r2 = rec.r2;
            p.mode = materialize_mode(ctx, rec.assign_i, rec.assign_q);
            pts.push_back(std::move(p));
        }
        RateRegion region = build_region(std::move(pts));
        region.n_evaluated = n_eval;
        return region;
    };

    if (all.size() == 0) throw std::domain_error("sweep produced no valid modes");
    result.region = materialize(all, evaluated);
    if (sdma.size() > 0) result.sdma = materialize(sdma, evaluated);
    if (qama_bf.size() > 0) result.qama_bf = materialize(qama_bf, evaluated);
    return result;
}

// ---------------------------------------------------------------------------
// Transmission-mode reduction

ModeSelection select_modes(const RateRegion& region, int n2) {
    const auto& frontier = region.hull;
    if (n2 < 2) throw std::invalid_argument("need at least the two OMA anchor modes");
    if (static_cast<std::size_t>(n2) > frontier.size())
        throw std::invalid_argument("n2 exceeds available frontier points");
    if (frontier.size() < 2) throw std::domain_error("degenerate frontier");

    std::vector<bool> picked(frontier.size(), false);
    picked.front() = true;  // (R1max, 0)
    picked.back() = true;   // (0, R2max)

    auto area_of = [&](const std::vector<bool>& sel) {
        std::vector<HullPoint> poly;
        poly.push_back({0.0, 0.0, -1});
        for (std::size_t i = 0; i < frontier.size(); ++i)
            if (sel[i]) poly.push_back({frontier[i].r1, frontier[i].r2, -1});
        return poly.size() >= 3 ? polygon_area(poly) : 0.0;
    };

    int selected = 2;
    double area = area_of(picked);
    while (selected < n2) {
        double best_area = area;
        std::ptrdiff_t best = -1;
        for (std::size_t i = 1; i + 1 < frontier.size(); ++i) {
            if (picked[i]) continue;
            picked[i] = true;
            const double a = area_of(picked);
            picked[i] = false;
            if (a > best_area) {
                best_area = a;
                best = static_cast<std::ptrdiff_t>(i);
            }
        }
        if (best < 0) {
            // remaining vertices add nothing (collinear); take the first unpicked
            for (std::size_t i = 1; i + 1 < frontier.size(); ++i)
                if (!picked[i]) {
                    best = static_cast<std::ptrdiff_t>(i);
                    break;
                }
        }
        picked[static_cast<std::size_t>(best)] = true;
        area = area_of(picked);
        ++selected;
    }

    ModeSelection sel;
    sel.polygon_area = area;
    sel.area_ratio = region.area > 0.0 ? area / region.area : 1.0;
    for (std::size_t i = 0; i < frontier.size(); ++i) {
        if (!picked[i]) continue;
        sel.vertices.push_back(frontier[i]);
        RatePoint rp;
        rp.r1 = frontier[i].r1;
        rp.r2 = frontier[i].r2;
        std::ptrdiff_t idx = frontier[i].point_index;
        if (idx < 0) {
            // synthesized axis anchor: reuse the mode of the extreme point
            double best_r = -1.0;
            for (std::size_t p = 0; p < region.points.size(); ++p) {
                const double r = frontier[i].r2 == 0.0 ? region.points[p].r1
                                                       : region.points[p].r2;
                if (r > best_r) {
                    best_r = r;
                    idx = static_cast<std::ptrdiff_t>(p);
                }
            }
        }
        if (idx >= 0) rp.mode = region.points[static_cast<std::size_t>(idx)].mode;
        sel.modes.push_back(std::move(rp));
    }
    return sel;
}

}  // namespace pxqama
