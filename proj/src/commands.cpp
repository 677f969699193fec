#include "firelik/commands.hpp"

#include "firelik/io.hpp"
#include "firelik/synth.hpp"

#include <filesystem>
#include <ostream>

namespace firelik {

namespace {

std::string prepare_dir(const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    return out_dir;
}

std::string join(const std::string& dir, const std::string& file) {
    return (std::filesystem::path(dir) / file).string();
}

ScalarFieldd arrival_field(const RunConfig& cfg) {
    if (!cfg.arrival_path.empty()) return io::read_field_csv(cfg.arrival_path);
    return cfg.forward_model().run(cfg.ignition(), cfg.grid());
}

}  // namespace

ProfileSummaryd cmd_profile(const RunConfig& cfg, const std::string& out_dir,
                            std::ostream& log) {
    const auto prof = likelihood_profile(cfg.profile_t_min_s, cfg.profile_t_max_s,
                                         cfg.profile_n_samples, cfg.ros_r0, cfg.likelihood());
    const std::string path = join(prepare_dir(out_dir), "profile.csv");
    io::write_profile_csv(path, prof);
    const auto s = summarize_profile(prof);
    log << "profile: floor=" << io::format_number(s.floor_value)
        << " max=" << io::format_number(s.peak)
        << " rise_width=" << io::format_number(s.rise_width)
        << " fall_width=" << io::format_number(s.fall_width) << "\n"
        << "wrote " << path << "\n";
    return s;
}

std::string cmd_simulate(const RunConfig& cfg, const IgnitionCandidated& ign,
                         const std::string& out_dir, std::ostream& log) {
    const ScalarFieldd arrival = cfg.forward_model().run(ign, cfg.grid());
    const std::string path = join(prepare_dir(out_dir), "arrival.csv");
    io::write_field_csv(path, arrival);
    log << "simulate: model=" << cfg.model << " ignition=(" << io::format_number(ign.point.x())
        << ", " << io::format_number(ign.point.y()) << ") t0=" << io::format_number(ign.t0)
        << "\nwrote " << path << "\n";
    return path;
}

std::string cmd_synth(const RunConfig& cfg, std::uint64_t seed, const std::string& out_dir,
                      std::ostream& log) {
    const ScalarFieldd arrival = arrival_field(cfg);
    PerimeterPlacement<double> pl;
    pl.level_time = cfg.synth_level_time_s;
    pl.n_pixels = cfg.synth_n_pixels;
    pl.scan_time = cfg.synth_scan_time_s;
    pl.confidence = cfg.synth_confidence;
    DetectionScened scene = pixels_on_perimeter(arrival, pl);

    if (cfg.synth_mode == "sample") {
        std::vector<Vec2d> centers;
        centers.reserve(scene.pixels.size());
        for (const auto& px : scene.pixels) centers.push_back(px.center);
        long clamped = 0;
        scene = sample_detections(arrival, centers, cfg.synth_scan_time_s, cfg.likelihood(),
                                  seed, &clamped);
        if (clamped > 0) {
            log << "warning: " << clamped << " geolocation draws clamped to the domain\n";
        }
    }

    const std::string path = join(prepare_dir(out_dir), "scene.csv");
    io::write_scene_csv(path, scene);
    log << "synth: mode=" << cfg.synth_mode << " pixels=" << scene.pixels.size()
        << " level_time=" << io::format_number(cfg.synth_level_time_s)
        << " scan_time=" << io::format_number(cfg.synth_scan_time_s) << "\nwrote " << path
        << "\n";
    return path;
}

SearchResultd cmd_estimate(const RunConfig& cfg, unsigned workers, const std::string& out_dir,
                           std::ostream& log) {
    if (cfg.scene_path.empty()) {
        throw std::runtime_error("estimate requires scene_path in the config");
    }
    const DetectionScened scene = io::read_scene_csv(cfg.scene_path);
    const CandidateGridd cands = cfg.candidates();
    const SearchResultd result =
        grid_search(cands, {scene}, cfg.forward_model(), cfg.likelihood(), cfg.grid(), workers);

    const std::string dir = prepare_dir(out_dir);
    const std::string surface_path = join(dir, "surface.csv");
    io::write_surface_csv(surface_path, result.surface);
    const std::string best_path = join(dir, "best.json");
    io::write_best_json(best_path, result);
    for (const double t : cands.times) {
        io::write_surface_csv(join(dir, "slice_t" + io::format_number(t) + ".csv"),
                              surface_slice(result, t));
    }

    log << "estimate: best x_m=" << io::format_number(result.best.point.x())
        << " y_m=" << io::format_number(result.best.point.y())
        << " t0_s=" << io::format_number(result.best.t0)
        << " loglik=" << io::format_number(result.best_loglik)
        << " n_evaluated=" << result.n_evaluated << "\nwrote " << surface_path << ", "
        << best_path << ", " << cands.times.size() << " slice files\n";
    return result;
}

}  // namespace firelik
