#pragma once

#include "firelik/detection.hpp"
#include "firelik/geometry.hpp"
#include "firelik/search.hpp"
#include "firelik/spread.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>

namespace firelik {

/// Flat run configuration for the CLI. Defaults reproduce the reference
/// setup: 1 km cone-fire grid, σ=2000 m geolocation error, 2 h heat decay,
/// 0.1% false detection rate, 50% detection at 1% heat fraction.
struct RunConfig {
    // model grid
    int grid_nx = 101;
    int grid_ny = 101;
    double grid_dx_m = 10;
    double grid_dy_m = 10;
    double origin_x_m = 0;
    double origin_y_m = 0;

    // detection / likelihood
    double p_false = 0.001;
    double f_half = 0.01;
    double sigma_m = 2000;
    double c_decay_s = 7200;
    double kernel_radius = 4;

    // spread model
    std::string model = "cone";  // "cone" | "lattice"
    double ros_r0 = 1;
    double wind_x_mps = 0;
    double wind_y_mps = 0;
    double wind_coeff = 0;
    double slope_coeff = 0;
    std::string terrain_path;

    // default ignition for `simulate`
    double ign_x_m = 500;
    double ign_y_m = 500;
    double ign_t0_s = 30;

    // candidate grid for `estimate`
    double cand_x0_m = 300;
    double cand_y0_m = 300;
    int cand_nx = 10;
    int cand_ny = 10;
    double cand_spacing_m = 50;
    double cand_t0_s = 10;
    int cand_n_times = 5;
    double cand_dt_s = 10;

    // synthetic scenes
    std::string synth_mode = "perimeter";  // "perimeter" | "sample"
    double synth_level_time_s = 300;
    double synth_scan_time_s = 300;
    int synth_n_pixels = 8;
    double synth_confidence = 1;

    // profile sweep
    double profile_t_min_s = -20000;
    double profile_t_max_s = 60000;
    int profile_n_samples = 801;

    // files
    std::string scene_path;
    std::string arrival_path;
    std::string out_dir = "out";
    std::uint64_t seed = 0;

    // validated library objects
    GridSpecd grid() const;
    LikelihoodParamsd likelihood() const;
    ForwardModeld forward_model() const;  // reads terrain_path when set
    CandidateGridd candidates() const;
    IgnitionCandidated ignition() const;
};

/// Parse `key = value` text ('#' starts a comment). Unknown or duplicate
/// keys, malformed values, and constraint violations raise std::runtime_error
/// naming the key, line, and constraint.
RunConfig parse_config(std::istream& in, const std::string& name);

/// parse_config over a file; referenced paths must exist.
RunConfig load_config(const std::string& path);

/// Write every key in a fixed order; load_config(save_config(c)) == c.
void save_config(const std::string& path, const RunConfig& cfg);

}  // namespace firelik
