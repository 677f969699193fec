#include "firelik/commands.hpp"
#include "firelik/config.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

namespace {

struct CommonOpts {
    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    unsigned workers = 0;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--config", o.config_path, "run configuration file (key = value lines)")
        ->check(CLI::ExistingFile);
    cmd->add_option("--out", o.out_dir, "output directory (default: config out_dir)");
    cmd->add_option("--seed", o.seed, "RNG seed, overrides the config");
    cmd->add_option("--workers", o.workers, "worker thread cap (0 = available parallelism)");
}

firelik::RunConfig load(const CommonOpts& o) {
    firelik::RunConfig cfg =
        o.config_path.empty() ? firelik::RunConfig{} : firelik::load_config(o.config_path);
    if (o.seed) cfg.seed = *o.seed;
    return cfg;
}

std::string resolve_out(const CommonOpts& o, const firelik::RunConfig& cfg) {
    return o.out_dir.empty() ? cfg.out_dir : o.out_dir;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"data likelihood of satellite active-fire detections and "
                 "maximum-likelihood ignition estimation"};
    app.require_subcommand(1);

    CommonOpts prof_o, sim_o, synth_o, est_o;
    auto* profile = app.add_subcommand(
        "profile", "single-pixel log-likelihood versus scan-minus-arrival offset");
    add_common(profile, prof_o);

    auto* simulate =
        app.add_subcommand("simulate", "run the spread model and write the arrival field");
    add_common(simulate, sim_o);
    std::optional<double> ign_x, ign_y, ign_t0;
    simulate->add_option("--ign-x", ign_x, "ignition x [m], overrides the config");
    simulate->add_option("--ign-y", ign_y, "ignition y [m], overrides the config");
    simulate->add_option("--ign-t0", ign_t0, "ignition time [s], overrides the config");

    auto* synth = app.add_subcommand("synth", "generate a synthetic detection scene");
    add_common(synth, synth_o);

    auto* estimate =
        app.add_subcommand("estimate", "maximum-likelihood ignition search over candidates");
    add_common(estimate, est_o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        const int code = e.get_exit_code();
        return code == 0 ? 1 : code;
    }

    try {
        if (profile->parsed()) {
            const auto cfg = load(prof_o);
            firelik::cmd_profile(cfg, resolve_out(prof_o, cfg), std::cout);
        } else if (simulate->parsed()) {
            const auto cfg = load(sim_o);
            firelik::IgnitionCandidated ign = cfg.ignition();
            if (ign_x) ign.point.x() = *ign_x;
            if (ign_y) ign.point.y() = *ign_y;
            if (ign_t0) ign.t0 = *ign_t0;
            firelik::cmd_simulate(cfg, ign, resolve_out(sim_o, cfg), std::cout);
        } else if (synth->parsed()) {
            const auto cfg = load(synth_o);
            firelik::cmd_synth(cfg, cfg.seed, resolve_out(synth_o, cfg), std::cout);
        } else if (estimate->parsed()) {
            const auto cfg = load(est_o);
            firelik::cmd_estimate(cfg, est_o.workers, resolve_out(est_o, cfg), std::cout);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
