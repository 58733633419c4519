// Command-line front end: constellation dumps, precoder synthesis, LLR
// curves, single-mode rate evaluation, rate-region sweeps and
// transmission-mode reduction. All dB handling stays here; the library is
// linear-domain only.

#include <algorithm>
#include <complex>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pxqama/demapper.hpp"
#include "pxqama/geometry.hpp"
#include "pxqama/inforate.hpp"
#include "pxqama/io.hpp"
#include "pxqama/region.hpp"

namespace {

using nlohmann::json;
using namespace pxqama;

constexpr int kExitConfigError = 2;
constexpr int kExitNumericError = 3;

struct CommonOpts {
    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;
    unsigned workers = 0;
};

struct ModeOpts {
    int m0 = 0, n0 = 0, m1 = 0, n1 = 0;
    double theta0 = 0.0;
    std::vector<double> alpha{1.0, 0.0, 0.0};
    std::uint32_t assign_i = 0, assign_q = 0;
    double ratio = 2.0;
};

void add_mode_options(CLI::App* cmd, ModeOpts& mo) {
    cmd->add_option("--m0", mo.m0, "shared-symbol I-branch bits");
    cmd->add_option("--n0", mo.n0, "shared-symbol Q-branch bits");
    cmd->add_option("--m1", mo.m1, "private-symbol I-branch bits (both users)");
    cmd->add_option("--n1", mo.n1, "private-symbol Q-branch bits (both users)");
    cmd->add_option("--theta0", mo.theta0, "shared-beam angle in radians, within [0, Theta]");
    cmd->add_option("--alpha", mo.alpha, "power amplitudes a0 a1 a2 (sum of squares 1)")
        ->expected(3);
    cmd->add_option("--assign-i", mo.assign_i,
                    "bitmask of shared I bits assigned to user 1 (bit k-1 = layer k)");
    cmd->add_option("--assign-q", mo.assign_q, "bitmask of shared Q bits assigned to user 1");
    cmd->add_option("--ratio", mo.ratio, "per-branch layer distance ratio (>= 2)");
}

ModeConfig build_mode(const ModeOpts& mo) {
    return make_uniform_mode(mo.m0, mo.n0, mo.m1, mo.n1, mo.theta0, mo.alpha[0],
                             mo.alpha[1], mo.alpha[2], mo.assign_i, mo.assign_q, mo.ratio);
}

ScenarioConfig load_config(const CommonOpts& opts) {
    if (opts.config_path.empty())
        throw std::invalid_argument("--config is required for this subcommand");
    ScenarioConfig cfg = load_scenario_config(opts.config_path);
    if (opts.seed_set) cfg.seed = opts.seed;
    return cfg;
}

std::string label_string(std::uint32_t label, int bits) {
    std::string s(static_cast<std::size_t>(bits), '0');
    for (int k = 0; k < bits; ++k)
        if ((label >> (bits - 1 - k)) & 1u) s[static_cast<std::size_t>(k)] = '1';
    return s;
}

json mode_to_json(const ModeConfig& m) {
    return json{{"m0", m.m0},         {"n0", m.n0},           {"m1", m.m1},
                {"n1", m.n1},         {"theta0", m.theta0},   {"a0", m.alpha0},
                {"a1", m.alpha1},     {"a2", m.alpha2},       {"assign_i", m.assign_i},
                {"assign_q", m.assign_q}};
}

json grid_to_json(const GridConfig& g) {
    return json{{"theta0_count", g.theta0_count},
                {"power_steps", g.power_steps},
                {"max_branch_bits", g.max_branch_bits},
                {"distance_ratios", g.distance_ratios},
                {"dedup_iq_symmetry", g.dedup_iq_symmetry},
                {"family", g.family}};
}

// ---------------------------------------------------------------------------

int cmd_map(const CommonOpts& opts, const ModeOpts& mo) {
    const ScenarioConfig cfg = load_config(opts);
    const Scenario sc = to_scenario(cfg);
    const ModeConfig mode = build_mode(mo);

    const ChannelPair ch = make_channels(sc.lambda1, sc.lambda2, sc.rho, sc.sigma2);
    const PrecoderSet pre =
        assemble_precoders(ch, mode.theta0, mode.alpha0, mode.alpha1, mode.alpha2);
    const auto eqs = equivalent_channels(ch, pre, mode);

    std::ostream& os = std::cout;
    os << "kind,name,re,im,label_i,label_q\n";
    const auto dump = [&os](const std::string& kind, const std::string& name,
                            const DistanceProfile& p) {
        const HierPam pi = build_hier_pam(p.i_bits(), p.i_distances);
        const HierPam pq = build_hier_pam(p.q_bits(), p.q_distances);
        for (int qi = 0; qi < pq.num_points(); ++qi)
            for (int ii = 0; ii < pi.num_points(); ++ii)
                os << kind << ',' << name << ','
                   << fmt_g12(pi.points[static_cast<std::size_t>(ii)]) << ','
                   << fmt_g12(pq.points[static_cast<std::size_t>(qi)]) << ','
                   << label_string(pi.labels[static_cast<std::size_t>(ii)], pi.bits_per_symbol)
                   << ','
                   << label_string(pq.labels[static_cast<std::size_t>(qi)], pq.bits_per_symbol)
                   << '\n';
    };
    dump("component", "s0", mode.d0);
    dump("component", "s1", mode.d1);
    dump("component", "s2", mode.d2);
    for (int user = 1; user <= 2; ++user) {
        dump("composite", "user" + std::to_string(user),
             eqs[static_cast<std::size_t>(user - 1)].composite);
    }
    return 0;
}

int cmd_precode(const CommonOpts& opts, const ModeOpts& mo) {
    const ScenarioConfig cfg = load_config(opts);
    const Scenario sc = to_scenario(cfg);
    const ModeConfig mode = build_mode(mo);

    const ChannelPair ch = make_channels(sc.lambda1, sc.lambda2, sc.rho, sc.sigma2);
    const PrecoderSet pre =
        assemble_precoders(ch, mode.theta0, mode.alpha0, mode.alpha1, mode.alpha2);
    const auto eqs = equivalent_channels(ch, pre, mode);

    const auto vec_json = [](const cvec& v) {
        json a = json::array();
        for (const cplx& z : v) a.push_back(json::array({z.real(), z.imag()}));
        return a;
    };
    json out{{"theta", ch.theta},
             {"rho", json::array({ch.rho.real(), ch.rho.imag()})},
             {"p0", vec_json(pre.p0)},
             {"p1", vec_json(pre.p1)},
             {"p2", vec_json(pre.p2)},
             {"alpha", json::array({pre.alpha0, pre.alpha1, pre.alpha2})}};
    for (int user = 1; user <= 2; ++user) {
        const EquivalentChannel& eq = eqs[static_cast<std::size_t>(user - 1)];
        out["user" + std::to_string(user)] = json{{"gain", eq.gain},
                                                  {"phase", eq.phase},
                                                  {"beta_shared", eq.beta_shared},
                                                  {"beta_private", eq.beta_private},
                                                  {"noise_var", eq.noise_var}};
    }
    std::cout << out.dump(2) << '\n';
    return 0;
}

int cmd_llr(const CommonOpts& opts, const ModeOpts& mo, int user, double ymin, double ymax,
            int count, const std::string& metric) {
    const ScenarioConfig cfg = load_config(opts);
    const Scenario sc = to_scenario(cfg);
    const ModeConfig mode = build_mode(mo);
    if (user != 1 && user != 2) throw std::invalid_argument("--user must be 1 or 2");
    if (count < 1) throw std::invalid_argument("--y-count must be positive");
    MetricPath path = kDefaultMetric;
    if (metric == "dual-min") path = MetricPath::DualMin;
    else if (metric == "piecewise") path = MetricPath::Piecewise;
    else if (!metric.empty()) throw std::invalid_argument("--metric must be dual-min or piecewise");

    const ChannelPair ch = make_channels(sc.lambda1, sc.lambda2, sc.rho, sc.sigma2);
    const PrecoderSet pre =
        assemble_precoders(ch, mode.theta0, mode.alpha0, mode.alpha1, mode.alpha2);
    const auto eqs = equivalent_channels(ch, pre, mode);
    const EquivalentChannel& eq = eqs[static_cast<std::size_t>(user - 1)];
    auto [pam_i, pam_q] = compose_received_constellation(mode, eq, user);

    std::cout << "branch,bit,y,z,llr\n";
    for (int t = 0; t < count; ++t) {
        const double y = count == 1 ? ymin : ymin + (ymax - ymin) * t / (count - 1);
        for (const auto* pam : {&pam_i, &pam_q}) {
            const char branch = pam == &pam_i ? 'I' : 'Q';
            BranchObservation obs{y, branch == 'I' ? Branch::I : Branch::Q, *pam,
                                  eq.noise_var};
            for (int k = 1; k <= pam->bits_per_symbol; ++k) {
                const double z = path == MetricPath::DualMin ? dual_min_metric(obs, k)
                                                             : piecewise_metric(obs, k);
                std::cout << branch << ',' << k << ',' << fmt_g12(y) << ',' << fmt_g12(z)
                          << ',' << fmt_g12(2.0 / eq.noise_var * z) << '\n';
            }
        }
    }
    return 0;
}

int cmd_rates(const CommonOpts& opts, const ModeOpts& mo) {
    const ScenarioConfig cfg = load_config(opts);
    const Scenario sc = to_scenario(cfg);
    const ModeConfig mode = build_mode(mo);

    const ChannelPair ch = make_channels(sc.lambda1, sc.lambda2, sc.rho, sc.sigma2);
    const PrecoderSet pre =
        assemble_precoders(ch, mode.theta0, mode.alpha0, mode.alpha1, mode.alpha2);
    const auto eqs = equivalent_channels(ch, pre, mode);
    const BitChannelRates mi = mode_bit_mi(mode, eqs);
    const RatePoint rp = user_rates(mode, eqs);

    json out{{"r1", rp.r1}, {"r2", rp.r2}, {"mode", mode_to_json(mode)}};
    for (int user = 1; user <= 2; ++user) {
        const UserBitMi& u = mi[static_cast<std::size_t>(user - 1)];
        out["user" + std::to_string(user)] =
            json{{"i_mi", u.i_mi},
                 {"q_mi", u.q_mi},
                 {"gain", eqs[static_cast<std::size_t>(user - 1)].gain},
                 {"noise_var", eqs[static_cast<std::size_t>(user - 1)].noise_var}};
    }
    std::cout << out.dump(2) << '\n';
    return 0;
}

json region_summary_json(const RateRegion& region) {
    json hull = json::array();
    for (const HullVertex& v : region.hull)
        hull.push_back(json{{"r1", v.r1},
                            {"r2", v.r2},
                            {"mode_id", static_cast<std::int64_t>(v.point_index)}});
    return json{{"area", region.area},
                {"n_pareto", region.points.size()},
                {"n_hull", region.hull.size()},
                {"hull", hull}};
}

int cmd_region(const CommonOpts& opts, const std::vector<std::string>& overlays, int n2) {
    const ScenarioConfig cfg = load_config(opts);
    const Scenario sc = to_scenario(cfg);
    const SweepGrids grids = to_grids(cfg.grid);

    const SweepResult res = sweep_region(sc, grids, opts.workers);

    const std::filesystem::path out_dir = opts.out_dir.empty() ? cfg.out_dir : opts.out_dir;
    std::filesystem::create_directories(out_dir);

    {
        std::ofstream csv(out_dir / "region.csv");
        if (!csv) throw std::runtime_error("cannot write region.csv");
        write_region_csv(csv, res.region);
    }

    json summary{{"schema_version", 1},
                 {"scenario",
                  json{{"gamma1_db", cfg.gamma1_db},
                       {"gamma2_db", cfg.gamma2_db},
                       {"rho_abs", cfg.rho_abs},
                       {"rho_phase", cfg.rho_phase},
                       {"sigma2", cfg.sigma2}}},
                 {"grid", grid_to_json(cfg.grid)},
                 {"seed", cfg.seed},
                 {"stats",
                  json{{"size_combos", res.stats.n_size_combos},
                       {"configs", res.stats.n_configs},
                       {"rate_points", res.stats.n_modes_evaluated},
                       {"filtered_composite_ordering",
                        res.stats.filtered(FilterReason::CompositeOrdering)},
                       {"filtered_power_without_bits",
                        res.stats.filtered(FilterReason::PowerWithoutBits)},
                       {"filtered_bits_without_power",
                        res.stats.filtered(FilterReason::BitsWithoutPower)},
                       {"filtered_degenerate_gain",
                        res.stats.filtered(FilterReason::DegenerateGain)}}},
                 {"region", region_summary_json(res.region)},
                 {"sdma", region_summary_json(res.sdma)},
                 {"qama_bf", region_summary_json(res.qama_bf)}};

    // default transmission-mode reduction, clamped to the frontier size
    const int n2_eff = std::min<int>(n2, static_cast<int>(res.region.hull.size()));
    if (n2_eff >= 2) {
        const ModeSelection sel = select_modes(res.region, n2_eff);
        json modes = json::array();
        for (const RatePoint& p : sel.modes) {
            json jm = mode_to_json(p.mode);
            jm["r1"] = p.r1;
            jm["r2"] = p.r2;
            modes.push_back(jm);
        }
        summary["selected_modes"] = json{{"n2", n2_eff},
                                         {"polygon_area", sel.polygon_area},
                                         {"area_ratio", sel.area_ratio},
                                         {"modes", modes}};
    }

    json olist = json::array();
    for (const std::string& spec : overlays) {
        std::string name = spec, path = spec;
        const auto eq = spec.find('=');
        if (eq != std::string::npos) {
            name = spec.substr(0, eq);
            path = spec.substr(eq + 1);
        } else {
            name = std::filesystem::path(spec).stem().string();
        }
        std::ifstream in(path);
        if (!in) throw std::invalid_argument("cannot open overlay CSV: " + path);
        const std::vector<RatePoint> pts = read_xy_csv(in);
        if (pts.empty()) throw std::invalid_argument("overlay has no points: " + path);
        const RateRegion oregion = build_region(pts);
        olist.push_back(json{{"name", name},
                             {"path", path},
                             {"n_points", pts.size()},
                             {"area", oregion.area},
                             {"area_ratio_vs_region",
                              res.region.area > 0.0 ? oregion.area / res.region.area : 0.0}});
    }
    summary["overlays"] = olist;

    {
        std::ofstream js(out_dir / "summary.json");
        if (!js) throw std::runtime_error("cannot write summary.json");
        js << summary.dump(2) << '\n';
    }

    std::cout << "region: area " << fmt_g12(res.region.area) << ", "
              << res.region.points.size() << " pareto points, " << res.region.hull.size()
              << " hull vertices (of " << res.stats.n_modes_evaluated
              << " rate points)\n";
    std::cout << "sdma:   area " << fmt_g12(res.sdma.area) << "\n";
    std::cout << "qama-bf: area " << fmt_g12(res.qama_bf.area) << "\n";
    std::cout << "wrote " << (out_dir / "region.csv").string() << ", "
              << (out_dir / "summary.json").string() << "\n";
    return 0;
}

int cmd_modes(const std::string& region_path, int n2, const std::string& out_path) {
    std::ifstream in(region_path);
    if (!in) throw std::invalid_argument("cannot open region CSV: " + region_path);
    std::vector<RatePoint> points = read_region_csv(in);
    if (points.empty()) throw std::invalid_argument("region CSV has no points");
    const RateRegion region = build_region(std::move(points));
    const ModeSelection sel = select_modes(region, n2);

    std::cout << "selected " << sel.modes.size() << " transmission modes, polygon area "
              << fmt_g12(sel.polygon_area) << " (" << fmt_g12(100.0 * sel.area_ratio)
              << "% of full region)\n";
    std::cout << "r1,r2,m0,n0,m1,n1,theta0,a0,a1,a2,assignment_mask_i,assignment_mask_q\n";
    for (const RatePoint& p : sel.modes) {
        const ModeConfig& m = p.mode;
        std::cout << fmt_g12(p.r1) << ',' << fmt_g12(p.r2) << ',' << m.m0 << ',' << m.n0
                  << ',' << m.m1 << ',' << m.n1 << ',' << fmt_g12(m.theta0) << ','
                  << fmt_g12(m.alpha0) << ',' << fmt_g12(m.alpha1) << ','
                  << fmt_g12(m.alpha2) << ',' << m.assign_i << ',' << m.assign_q << '\n';
    }
    if (!out_path.empty()) {
        json out{{"n2", n2},
                 {"polygon_area", sel.polygon_area},
                 {"area_ratio", sel.area_ratio},
                 {"modes", json::array()}};
        for (const RatePoint& p : sel.modes) {
            json jm = mode_to_json(p.mode);
            jm["r1"] = p.r1;
            jm["r2"] = p.r2;
            out["modes"].push_back(jm);
        }
        std::ofstream os(out_path);
        if (!os) throw std::runtime_error("cannot write " + out_path);
        os << out.dump(2) << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-user parallax-QAMA downlink toolkit"};
    app.require_subcommand(1);
    app.fallthrough();

    CommonOpts opts;
    app.add_option("--config", opts.config_path, "scenario config JSON")->envname("PXQAMA_CONFIG");
    app.add_option("--out", opts.out_dir, "output directory");
    auto* seed_opt = app.add_option("--seed", opts.seed, "override config seed");
    app.add_option("--workers", opts.workers, "worker threads (0 = hardware)");

    ModeOpts map_mode, precode_mode, llr_mode, rates_mode;
    int llr_user = 1, llr_count = 101;
    double llr_ymin = -2.0, llr_ymax = 2.0;
    std::string llr_metric;
    std::vector<std::string> overlays;
    std::string modes_region;
    int modes_n2 = 5;
    std::string modes_out;

    auto* map_cmd = app.add_subcommand("map", "dump component and composite constellations");
    add_mode_options(map_cmd, map_mode);
    auto* precode_cmd = app.add_subcommand("precode", "print precoders and equivalent channels");
    add_mode_options(precode_cmd, precode_mode);
    auto* llr_cmd = app.add_subcommand("llr", "per-bit metrics over an equalized-sample grid");
    add_mode_options(llr_cmd, llr_mode);
    llr_cmd->add_option("--user", llr_user, "receiver user (1 or 2)");
    llr_cmd->add_option("--y-min", llr_ymin, "grid start");
    llr_cmd->add_option("--y-max", llr_ymax, "grid end");
    llr_cmd->add_option("--y-count", llr_count, "grid points");
    llr_cmd->add_option("--metric", llr_metric, "dual-min or piecewise");
    auto* rates_cmd = app.add_subcommand("rates", "evaluate one transmission mode");
    add_mode_options(rates_cmd, rates_mode);
    auto* region_cmd = app.add_subcommand("region", "sweep the achievable rate region");
    region_cmd->add_option("--overlay", overlays,
                           "external baseline curve CSV (name=path), repeatable");
    int region_n2 = 5;
    region_cmd->add_option("--n2", region_n2,
                           "transmission-mode count for the summary polygon");
    auto* modes_cmd = app.add_subcommand("modes", "reduce a region to N2 transmission modes");
    modes_cmd->add_option("--region", modes_region, "region CSV produced by `region`")
        ->required();
    modes_cmd->add_option("--n2", modes_n2, "number of transmission modes to keep");
    modes_cmd->add_option("--json", modes_out, "also write the selection as JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfigError;
    }
    opts.seed_set = seed_opt->count() > 0;

    try {
        if (map_cmd->parsed()) return cmd_map(opts, map_mode);
        if (precode_cmd->parsed()) return cmd_precode(opts, precode_mode);
        if (llr_cmd->parsed())
            return cmd_llr(opts, llr_mode, llr_user, llr_ymin, llr_ymax, llr_count, llr_metric);
        if (rates_cmd->parsed()) return cmd_rates(opts, rates_mode);
        if (region_cmd->parsed()) return cmd_region(opts, overlays, region_n2);
        if (modes_cmd->parsed()) return cmd_modes(modes_region, modes_n2, modes_out);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumericError;
    }
    return 0;
}
