#include "pxqama/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace pxqama {

std::string fmt_g12(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void write_region_csv(std::ostream& os, const RateRegion& region) {
    const std::vector<bool> hull = on_hull_flags(region);
    // the `ratio` column appears only when the sweep explored non-default
    // layer ratios, keeping the standard schema bit-stable otherwise
    bool with_ratio = false;
    for (const RatePoint& p : region.points) with_ratio = with_ratio || p.mode.ratio != 2.0;
    os << kRegionCsvHeader;
    if (with_ratio) os << ",ratio";
    os << '\n';
    for (std::size_t i = 0; i < region.points.size(); ++i) {
        const RatePoint& p = region.points[i];
        const ModeConfig& m = p.mode;
        os << i << ',' << m.m0 << ',' << m.n0 << ',' << m.m1 << ',' << m.n1 << ','
           << fmt_g12(m.theta0) << ',' << fmt_g12(m.alpha0) << ',' << fmt_g12(m.alpha1)
           << ',' << fmt_g12(m.alpha2) << ',' << m.assign_i << ',' << m.assign_q << ','
           << fmt_g12(p.r1) << ',' << fmt_g12(p.r2) << ',' << (hull[i] ? 1 : 0);
        if (with_ratio) os << ',' << fmt_g12(m.ratio);
        os << '\n';
    }
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) out.push_back(field);
    return out;
}

bool is_numeric(const std::string& s) {
    if (s.empty()) return false;
    char* end = nullptr;
    std::strtod(s.c_str(), &end);
    return end != s.c_str() && *end == '\0';
}

}  // namespace

std::vector<RatePoint> read_region_csv(std::istream& is) {
    std::vector<RatePoint> points;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto f = split_csv_line(line);
        if (!f.empty() && !is_numeric(f[0])) continue;  // header
        if (f.size() < 14)
            throw std::invalid_argument("region CSV line " + std::to_string(lineno) +
                                        ": expected 14 columns");
        RatePoint p;
        const int m0 = std::stoi(f[1]), n0 = std::stoi(f[2]);
        const int m1 = std::stoi(f[3]), n1 = std::stoi(f[4]);
        const double ratio = f.size() >= 15 ? std::stod(f[14]) : 2.0;
        p.mode = make_uniform_mode(m0, n0, m1, n1, std::stod(f[5]), std::stod(f[6]),
                                   std::stod(f[7]), std::stod(f[8]),
                                   static_cast<std::uint32_t>(std::stoul(f[9])),
                                   static_cast<std::uint32_t>(std::stoul(f[10])), ratio);
        p.r1 = std::stod(f[11]);
        p.r2 = std::stod(f[12]);
        points.push_back(std::move(p));
    }
    return points;
}

std::vector<RatePoint> read_xy_csv(std::istream& is) {
    std::vector<RatePoint> points;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        const auto f = split_csv_line(line);
        if (!f.empty() && !is_numeric(f[0])) continue;  // header
        if (f.size() < 2)
            throw std::invalid_argument("overlay CSV line " + std::to_string(lineno) +
                                        ": expected two columns R1,R2");
        RatePoint p;
        p.r1 = std::stod(f[0]);
        p.r2 = std::stod(f[1]);
        points.push_back(std::move(p));
    }
    return points;
}

// ---------------------------------------------------------------------------
// JSON scenario configuration

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, std::initializer_list<const char*> known,
                         const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char* k : known)
            if (it.key() == k) {
                ok = true;
                break;
            }
        if (!ok)
            throw std::invalid_argument(where + ": unknown key \"" + it.key() + "\"");
    }
}

}  // namespace

ScenarioConfig parse_scenario_config(const std::string& text, const std::string& origin) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(origin + ": " + e.what());
    }
    if (!j.is_object()) throw std::invalid_argument(origin + ": config must be a JSON object");
    reject_unknown_keys(j,
                        {"schema_version", "gamma1_db", "gamma2_db", "rho_abs", "rho_phase",
                         "sigma2", "seed", "out_dir", "grid"},
                        origin);
    ScenarioConfig cfg;
    try {
        cfg.schema_version = j.value("schema_version", 1);
        if (cfg.schema_version != 1)
            throw std::invalid_argument(origin + ": unsupported schema_version " +
                                        std::to_string(cfg.schema_version));
        if (!j.contains("gamma1_db") || !j.contains("gamma2_db") || !j.contains("rho_abs"))
            throw std::invalid_argument(origin +
                                        ": gamma1_db, gamma2_db and rho_abs are required");
        cfg.gamma1_db = j.at("gamma1_db").get<double>();
        cfg.gamma2_db = j.at("gamma2_db").get<double>();
        cfg.rho_abs = j.at("rho_abs").get<double>();
        cfg.rho_phase = j.value("rho_phase", 0.0);
        cfg.sigma2 = j.value("sigma2", 1.0);
        cfg.seed = j.value("seed", std::uint64_t{0});
        cfg.out_dir = j.value("out_dir", cfg.out_dir);
        if (j.contains("grid")) {
            const json& g = j.at("grid");
            reject_unknown_keys(g,
                                {"theta0_count", "power_steps", "max_branch_bits",
                                 "distance_ratios", "dedup_iq_symmetry", "family"},
                                origin + ".grid");
            cfg.grid.theta0_count = g.value("theta0_count", cfg.grid.theta0_count);
            cfg.grid.power_steps = g.value("power_steps", cfg.grid.power_steps);
            cfg.grid.max_branch_bits = g.value("max_branch_bits", cfg.grid.max_branch_bits);
            if (g.contains("distance_ratios"))
                cfg.grid.distance_ratios = g.at("distance_ratios").get<std::vector<double>>();
            cfg.grid.dedup_iq_symmetry =
                g.value("dedup_iq_symmetry", cfg.grid.dedup_iq_symmetry);
            cfg.grid.family = g.value("family", cfg.grid.family);
        }
    } catch (const json::exception& e) {
        throw std::invalid_argument(origin + ": " + e.what());
    }
    if (!(cfg.rho_abs >= 0.0) || cfg.rho_abs >= 1.0)
        throw std::invalid_argument(origin + ": rho_abs must be in [0, 1)");
    if (!std::isfinite(cfg.gamma1_db) || !std::isfinite(cfg.gamma2_db))
        throw std::invalid_argument(origin + ": reference SNRs must be finite");
    if (!(cfg.sigma2 > 0.0))
        throw std::invalid_argument(origin + ": sigma2 must be positive");
    return cfg;
}

ScenarioConfig load_scenario_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_scenario_config(ss.str(), path);
}

Scenario to_scenario(const ScenarioConfig& cfg) {
    Scenario sc;
    sc.sigma2 = cfg.sigma2;
    sc.lambda1 = std::sqrt(std::pow(10.0, cfg.gamma1_db / 10.0) * cfg.sigma2);
    sc.lambda2 = std::sqrt(std::pow(10.0, cfg.gamma2_db / 10.0) * cfg.sigma2);
    sc.rho = std::polar(cfg.rho_abs, cfg.rho_phase);
    return sc;
}

SweepGrids to_grids(const GridConfig& cfg) {
    SweepGrids g;
    g.theta0_count = cfg.theta0_count;
    g.power_steps = cfg.power_steps;
    g.max_branch_bits = cfg.max_branch_bits;
    g.distance_ratios = cfg.distance_ratios;
    g.dedup_iq_symmetry = cfg.dedup_iq_symmetry;
    if (cfg.family == "all") g.family = ModeFamily::All;
    else if (cfg.family == "sdma") g.family = ModeFamily::Sdma;
    else if (cfg.family == "qama_bf") g.family = ModeFamily::QamaBf;
    else throw std::invalid_argument("grid.family must be all, sdma or qama_bf");
    return g;
}

}  // namespace pxqama
