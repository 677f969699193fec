#include "firelik/config.hpp"

#include "firelik/io.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace firelik {

namespace {

[[noreturn]] void fail_key(const std::string& name, long line, const std::string& key,
                           const std::string& constraint) {
    throw std::runtime_error(name + " line " + std::to_string(line) + ": key '" + key +
                             "': " + constraint);
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

struct KeyContext {
    std::string name;
    long line = 0;
    std::string key;
    std::string value;

    [[noreturn]] void fail(const std::string& constraint) const {
        fail_key(name, line, key, constraint);
    }

    double number() const {
        const char* begin = value.c_str();
        char* end = nullptr;
        const double v = std::strtod(begin, &end);
        if (end == begin || *end != '\0') fail("expected a number, got '" + value + "'");
        if (!std::isfinite(v)) fail("must be finite");
        return v;
    }

    int integer(int lo) const {
        const char* begin = value.c_str();
        char* end = nullptr;
        const long v = std::strtol(begin, &end, 10);
        if (end == begin || *end != '\0') fail("expected an integer, got '" + value + "'");
        if (v < lo) fail("must be >= " + std::to_string(lo));
        if (v > std::numeric_limits<int>::max()) fail("out of range");
        return int(v);
    }

    std::uint64_t unsigned64() const {
        if (value.empty() || !std::isdigit(static_cast<unsigned char>(value[0]))) {
            fail("expected a non-negative integer, got '" + value + "'");
        }
        const char* begin = value.c_str();
        char* end = nullptr;
        const unsigned long long v = std::strtoull(begin, &end, 10);
        if (end == begin || *end != '\0') fail("expected a non-negative integer");
        return std::uint64_t(v);
    }
};

using Setter = std::function<void(RunConfig&, const KeyContext&)>;

const std::map<std::string, Setter>& setters() {
    auto positive = [](const KeyContext& c) {
        const double v = c.number();
        if (!(v > 0)) c.fail("must be > 0, got " + c.value);
        return v;
    };
    static const std::map<std::string, Setter> table = {
        {"grid_nx", [](RunConfig& c, const KeyContext& k) { c.grid_nx = k.integer(2); }},
        {"grid_ny", [](RunConfig& c, const KeyContext& k) { c.grid_ny = k.integer(2); }},
        {"grid_dx_m", [=](RunConfig& c, const KeyContext& k) { c.grid_dx_m = positive(k); }},
        {"grid_dy_m", [=](RunConfig& c, const KeyContext& k) { c.grid_dy_m = positive(k); }},
        {"origin_x_m", [](RunConfig& c, const KeyContext& k) { c.origin_x_m = k.number(); }},
        {"origin_y_m", [](RunConfig& c, const KeyContext& k) { c.origin_y_m = k.number(); }},
        {"p_false",
         [](RunConfig& c, const KeyContext& k) {
             c.p_false = k.number();
             if (!(c.p_false > 0 && c.p_false < 0.5)) k.fail("must lie in (0, 0.5)");
         }},
        {"f_half",
         [](RunConfig& c, const KeyContext& k) {
             c.f_half = k.number();
             if (!(c.f_half > 0 && c.f_half <= 1)) k.fail("must lie in (0, 1]");
         }},
        {"sigma_m", [=](RunConfig& c, const KeyContext& k) { c.sigma_m = positive(k); }},
        {"c_decay_s", [=](RunConfig& c, const KeyContext& k) { c.c_decay_s = positive(k); }},
        {"kernel_radius",
         [](RunConfig& c, const KeyContext& k) {
             c.kernel_radius = k.number();
             if (!(c.kernel_radius >= 3)) k.fail("must be >= 3");
         }},
        {"model",
         [](RunConfig& c, const KeyContext& k) {
             if (k.value != "cone" && k.value != "lattice") {
                 k.fail("must be 'cone' or 'lattice', got '" + k.value + "'");
             }
             c.model = k.value;
         }},
        {"ros_r0", [=](RunConfig& c, const KeyContext& k) { c.ros_r0 = positive(k); }},
        {"wind_x_mps", [](RunConfig& c, const KeyContext& k) { c.wind_x_mps = k.number(); }},
        {"wind_y_mps", [](RunConfig& c, const KeyContext& k) { c.wind_y_mps = k.number(); }},
        {"wind_coeff",
         [](RunConfig& c, const KeyContext& k) {
             c.wind_coeff = k.number();
             if (!(c.wind_coeff >= 0)) k.fail("must be >= 0");
         }},
        {"slope_coeff", [](RunConfig& c, const KeyContext& k) { c.slope_coeff = k.number(); }},
        {"terrain_path", [](RunConfig& c, const KeyContext& k) { c.terrain_path = k.value; }},
        {"ign_x_m", [](RunConfig& c, const KeyContext& k) { c.ign_x_m = k.number(); }},
        {"ign_y_m", [](RunConfig& c, const KeyContext& k) { c.ign_y_m = k.number(); }},
        {"ign_t0_s", [](RunConfig& c, const KeyContext& k) { c.ign_t0_s = k.number(); }},
        {"cand_x0_m", [](RunConfig& c, const KeyContext& k) { c.cand_x0_m = k.number(); }},
        {"cand_y0_m", [](RunConfig& c, const KeyContext& k) { c.cand_y0_m = k.number(); }},
        {"cand_nx", [](RunConfig& c, const KeyContext& k) { c.cand_nx = k.integer(1); }},
        {"cand_ny", [](RunConfig& c, const KeyContext& k) { c.cand_ny = k.integer(1); }},
        {"cand_spacing_m",
         [=](RunConfig& c, const KeyContext& k) { c.cand_spacing_m = positive(k); }},
        {"cand_t0_s", [](RunConfig& c, const KeyContext& k) { c.cand_t0_s = k.number(); }},
        {"cand_n_times", [](RunConfig& c, const KeyContext& k) { c.cand_n_times = k.integer(1); }},
        {"cand_dt_s", [=](RunConfig& c, const KeyContext& k) { c.cand_dt_s = positive(k); }},
        {"synth_mode",
         [](RunConfig& c, const KeyContext& k) {
             if (k.value != "perimeter" && k.value != "sample") {
                 k.fail("must be 'perimeter' or 'sample', got '" + k.value + "'");
             }
             c.synth_mode = k.value;
         }},
        {"synth_level_time_s",
         [](RunConfig& c, const KeyContext& k) { c.synth_level_time_s = k.number(); }},
        {"synth_scan_time_s",
         [](RunConfig& c, const KeyContext& k) { c.synth_scan_time_s = k.number(); }},
        {"synth_n_pixels",
         [](RunConfig& c, const KeyContext& k) { c.synth_n_pixels = k.integer(1); }},
        {"synth_confidence",
         [](RunConfig& c, const KeyContext& k) {
             c.synth_confidence = k.number();
             if (!(c.synth_confidence >= 0 && c.synth_confidence <= 1)) {
                 k.fail("must lie in [0, 1]");
             }
         }},
        {"profile_t_min_s",
         [](RunConfig& c, const KeyContext& k) { c.profile_t_min_s = k.number(); }},
        {"profile_t_max_s",
         [](RunConfig& c, const KeyContext& k) { c.profile_t_max_s = k.number(); }},
        {"profile_n_samples",
         [](RunConfig& c, const KeyContext& k) { c.profile_n_samples = k.integer(2); }},
        {"scene_path", [](RunConfig& c, const KeyContext& k) { c.scene_path = k.value; }},
        {"arrival_path", [](RunConfig& c, const KeyContext& k) { c.arrival_path = k.value; }},
        {"out_dir", [](RunConfig& c, const KeyContext& k) { c.out_dir = k.value; }},
        {"seed", [](RunConfig& c, const KeyContext& k) { c.seed = k.unsigned64(); }},
    };
    return table;
}

}  // namespace

RunConfig parse_config(std::istream& in, const std::string& name) {
    RunConfig cfg;
    std::set<std::string> seen;
    std::string raw;
    long line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        const std::string text = trim(raw);
        if (text.empty()) continue;
        const auto eq = text.find('=');
        if (eq == std::string::npos) {
            throw std::runtime_error(name + " line " + std::to_string(line) +
                                     ": expected 'key = value', got '" + text + "'");
        }
        KeyContext k;
        k.name = name;
        k.line = line;
        k.key = trim(text.substr(0, eq));
        k.value = trim(text.substr(eq + 1));
        const auto it = setters().find(k.key);
        if (it == setters().end()) k.fail("unknown key");
        if (!seen.insert(k.key).second) k.fail("duplicate key");
        it->second(cfg, k);
    }
    if (!(cfg.profile_t_min_s < cfg.profile_t_max_s)) {
        throw std::runtime_error(name + ": profile_t_min_s must be < profile_t_max_s");
    }
    if (!(cfg.synth_scan_time_s >= cfg.synth_level_time_s)) {
        throw std::runtime_error(name + ": synth_scan_time_s must be >= synth_level_time_s");
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config " + path);
    RunConfig cfg = parse_config(in, path);
    const std::pair<const char*, const std::string*> paths[] = {
        {"terrain_path", &cfg.terrain_path},
        {"scene_path", &cfg.scene_path},
        {"arrival_path", &cfg.arrival_path},
    };
    for (const auto& [key, value] : paths) {
        if (!value->empty() && !std::filesystem::exists(*value)) {
            throw std::runtime_error(path + ": key '" + std::string(key) +
                                     "': file does not exist: " + *value);
        }
    }
    return cfg;
}

void save_config(const std::string& path, const RunConfig& c) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    const auto num = [](double v) { return io::format_number(v); };
    out << "# firelik run configuration\n";
    out << "grid_nx = " << c.grid_nx << '\n';
    out << "grid_ny = " << c.grid_ny << '\n';
    out << "grid_dx_m = " << num(c.grid_dx_m) << '\n';
    out << "grid_dy_m = " << num(c.grid_dy_m) << '\n';
    out << "origin_x_m = " << num(c.origin_x_m) << '\n';
    out << "origin_y_m = " << num(c.origin_y_m) << '\n';
    out << "p_false = " << num(c.p_false) << '\n';
    out << "f_half = " << num(c.f_half) << '\n';
    out << "sigma_m = " << num(c.sigma_m) << '\n';
    out << "c_decay_s = " << num(c.c_decay_s) << '\n';
    out << "kernel_radius = " << num(c.kernel_radius) << '\n';
    out << "model = " << c.model << '\n';
    out << "ros_r0 = " << num(c.ros_r0) << '\n';
    out << "wind_x_mps = " << num(c.wind_x_mps) << '\n';
    out << "wind_y_mps = " << num(c.wind_y_mps) << '\n';
    out << "wind_coeff = " << num(c.wind_coeff) << '\n';
    out << "slope_coeff = " << num(c.slope_coeff) << '\n';
    out << "terrain_path = " << c.terrain_path << '\n';
    out << "ign_x_m = " << num(c.ign_x_m) << '\n';
    out << "ign_y_m = " << num(c.ign_y_m) << '\n';
    out << "ign_t0_s = " << num(c.ign_t0_s) << '\n';
    out << "cand_x0_m = " << num(c.cand_x0_m) << '\n';
    out << "cand_y0_m = " << num(c.cand_y0_m) << '\n';
    out << "cand_nx = " << c.cand_nx << '\n';
    out << "cand_ny = " << c.cand_ny << '\n';
    out << "cand_spacing_m = " << num(c.cand_spacing_m) << '\n';
    out << "cand_t0_s = " << num(c.cand_t0_s) << '\n';
    out << "cand_n_times = " << c.cand_n_times << '\n';
    out << "cand_dt_s = " << num(c.cand_dt_s) << '\n';
    out << "synth_mode = " << c.synth_mode << '\n';
    out << "synth_level_time_s = " << num(c.synth_level_time_s) << '\n';
    out << "synth_scan_time_s = " << num(c.synth_scan_time_s) << '\n';
    out << "synth_n_pixels = " << c.synth_n_pixels << '\n';
    out << "synth_confidence = " << num(c.synth_confidence) << '\n';
    out << "profile_t_min_s = " << num(c.profile_t_min_s) << '\n';
    out << "profile_t_max_s = " << num(c.profile_t_max_s) << '\n';
    out << "profile_n_samples = " << c.profile_n_samples << '\n';
    out << "scene_path = " << c.scene_path << '\n';
    out << "arrival_path = " << c.arrival_path << '\n';
    out << "out_dir = " << c.out_dir << '\n';
    out << "seed = " << c.seed << '\n';
}

GridSpecd RunConfig::grid() const {
    return GridSpecd(grid_nx, grid_ny, grid_dx_m, grid_dy_m, Vec2d(origin_x_m, origin_y_m));
}

LikelihoodParamsd RunConfig::likelihood() const {
    return LikelihoodParamsd::make(p_false, f_half, sigma_m, c_decay_s, kernel_radius);
}

ForwardModeld RunConfig::forward_model() const {
    ForwardModeld m;
    m.kind = model == "lattice" ? SpreadModelKind::lattice : SpreadModelKind::cone;
    m.ros.r0 = ros_r0;
    m.ros.wind = Vec2d(wind_x_mps, wind_y_mps);
    m.ros.wind_coeff = wind_coeff;
    m.ros.slope_coeff = slope_coeff;
    if (m.kind == SpreadModelKind::lattice && !terrain_path.empty()) {
        m.ros.terrain = io::read_field_csv(terrain_path);
    }
    return m;
}

CandidateGridd RunConfig::candidates() const {
    CandidateGridd c;
    c.points.reserve(std::size_t(cand_nx) * std::size_t(cand_ny));
    for (int iy = 0; iy < cand_ny; ++iy) {
        for (int ix = 0; ix < cand_nx; ++ix) {
            c.points.emplace_back(cand_x0_m + ix * cand_spacing_m,
                                  cand_y0_m + iy * cand_spacing_m);
        }
    }
    c.times.reserve(std::size_t(cand_n_times));
    for (int k = 0; k < cand_n_times; ++k) c.times.push_back(cand_t0_s + k * cand_dt_s);
    return c;
}

IgnitionCandidated RunConfig::ignition() const {
    return IgnitionCandidated{Vec2d(ign_x_m, ign_y_m), ign_t0_s};
}

}  // namespace firelik
