#include "firelik/io.hpp"

#include "util.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <string>
#include <sys/wait.h>

#ifndef FIRELIK_BIN
#error "FIRELIK_BIN must point at the CLI binary"
#endif

using namespace firelik;
using testutil::TempDir;

namespace {

struct RunResult {
    int code = -1;
    std::string out;
    std::string err;
};

RunResult run_cli(const TempDir& tmp, const std::string& args) {
    const std::string out_path = tmp.file("cli_stdout.txt");
    const std::string err_path = tmp.file("cli_stderr.txt");
    const std::string cmd = std::string(FIRELIK_BIN) + " " + args + " >'" + out_path +
                            "' 2>'" + err_path + "'";
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = testutil::slurp(out_path);
    r.err = testutil::slurp(err_path);
    return r;
}

bool single_error_line(const std::string& err) {
    return err.rfind("error: ", 0) == 0 &&
           std::count(err.begin(), err.end(), '\n') == 1 &&
           err.back() == '\n';
}

}  // namespace

TEST_CASE("profile writes its table and prints the shape summary") {
    TempDir tmp;
    const auto cfg = tmp.file("run.cfg");
    testutil::spit(cfg, "sigma_m = 50\nc_decay_s = 600\nprofile_t_min_s = -2000\n"
                        "profile_t_max_s = 6000\nprofile_n_samples = 41\n");
    const auto out = tmp.file("out");
    const auto r = run_cli(tmp, "profile --config '" + cfg + "' --out '" + out + "'");
    CHECK(r.code == 0);
    CHECK(r.out.find("profile: floor=") != std::string::npos);
    CHECK(r.out.find("rise_width=") != std::string::npos);
    const std::string table = testutil::slurp(out + "/profile.csv");
    CHECK(table.rfind("delta_t_s,log_p\n", 0) == 0);
    CHECK(std::count(table.begin(), table.end(), '\n') == 42);  // header + 41 samples
}

TEST_CASE("simulate honors ignition overrides and writes the model arrival field") {
    TempDir tmp;
    const auto cfg = tmp.file("run.cfg");
    testutil::spit(cfg, "grid_nx = 21\ngrid_ny = 21\ngrid_dx_m = 50\ngrid_dy_m = 50\n"
                        "ros_r0 = 2\n");
    const auto out = tmp.file("out");
    const auto r = run_cli(tmp, "simulate --config '" + cfg + "' --out '" + out +
                                    "' --ign-x 500 --ign-y 500 --ign-t0 30");
    CHECK(r.code == 0);
    CHECK(r.out.find("simulate: model=cone") != std::string::npos);
    const auto arrival = io::read_field_csv(out + "/arrival.csv");
    CHECK(arrival.spec.nx == 21);
    CHECK(arrival.at(10, 10) == 30.0);
    const double want = std::hypot(500.0, 500.0) / 2.0 + 30.0;
    CHECK(arrival.at(0, 0) == doctest::Approx(want).epsilon(1e-13));
}

TEST_CASE("synth in sample mode is reproducible from the seed") {
    TempDir tmp;
    const auto cfg = tmp.file("run.cfg");
    testutil::spit(cfg, "grid_nx = 21\ngrid_ny = 21\ngrid_dx_m = 50\ngrid_dy_m = 50\n"
                        "ros_r0 = 2\nsigma_m = 30\nc_decay_s = 13\n"
                        "synth_mode = sample\nsynth_level_time_s = 200\n"
                        "synth_scan_time_s = 260\nsynth_n_pixels = 32\nseed = 7\n");
    const auto out1 = tmp.file("a");
    const auto out2 = tmp.file("b");
    const auto out3 = tmp.file("c");
    CHECK(run_cli(tmp, "synth --config '" + cfg + "' --out '" + out1 + "'").code == 0);
    CHECK(run_cli(tmp, "synth --config '" + cfg + "' --out '" + out2 + "'").code == 0);
    CHECK(run_cli(tmp, "synth --config '" + cfg + "' --out '" + out3 + "' --seed 8").code == 0);
    const auto s1 = testutil::slurp(out1 + "/scene.csv");
    CHECK(s1 == testutil::slurp(out2 + "/scene.csv"));
    CHECK(s1 != testutil::slurp(out3 + "/scene.csv"));
    CHECK(s1.rfind("t_scan_s,x_m,y_m,detect,confidence\n", 0) == 0);
    CHECK(std::count(s1.begin(), s1.end(), '\n') == 33);
}

TEST_CASE("synth then estimate recovers the ignition through the file pipeline") {
    TempDir tmp;
    const std::string shared = "grid_nx = 21\ngrid_ny = 21\ngrid_dx_m = 50\ngrid_dy_m = 50\n"
                               "ros_r0 = 2\nsigma_m = 30\n";
    const auto synth_cfg = tmp.file("synth.cfg");
    testutil::spit(synth_cfg, shared + "synth_level_time_s = 200\nsynth_scan_time_s = 200\n");
    const auto scenes = tmp.file("scenes");
    REQUIRE(run_cli(tmp, "synth --config '" + synth_cfg + "' --out '" + scenes + "'").code == 0);

    const auto est_cfg = tmp.file("estimate.cfg");
    testutil::spit(est_cfg, shared + "scene_path = " + scenes + "/scene.csv\n" +
                                "cand_x0_m = 400\ncand_y0_m = 400\ncand_nx = 3\ncand_ny = 3\n"
                                "cand_spacing_m = 100\ncand_t0_s = 10\ncand_n_times = 3\n"
                                "cand_dt_s = 20\n");
    const auto out1 = tmp.file("est1");
    const auto out2 = tmp.file("est2");
    const auto r1 = run_cli(tmp, "estimate --config '" + est_cfg + "' --out '" + out1 + "'");
    CHECK(r1.code == 0);
    CHECK(r1.out.find("estimate: best") != std::string::npos);

    const auto best = nlohmann::json::parse(testutil::slurp(out1 + "/best.json"));
    CHECK(best.at("x_m").get<double>() == 500.0);
    CHECK(best.at("y_m").get<double>() == 500.0);
    CHECK(best.at("t0_s").get<double>() <= 30.0);
    CHECK(best.at("n_evaluated").get<long>() == 27);

    const std::string surface = testutil::slurp(out1 + "/surface.csv");
    CHECK(surface.rfind("x_m,y_m,t0_s,loglik\n", 0) == 0);
    CHECK(std::count(surface.begin(), surface.end(), '\n') == 28);
    CHECK(testutil::slurp(out1 + "/slice_t10.csv").size() > 0);
    CHECK(testutil::slurp(out1 + "/slice_t30.csv").size() > 0);
    CHECK(testutil::slurp(out1 + "/slice_t50.csv").size() > 0);

    // byte-identical rerun
    const auto r2 = run_cli(tmp, "estimate --config '" + est_cfg + "' --out '" + out2 + "'");
    CHECK(r2.code == 0);
    CHECK(surface == testutil::slurp(out2 + "/surface.csv"));
    CHECK(testutil::slurp(out1 + "/best.json") == testutil::slurp(out2 + "/best.json"));
}

TEST_CASE("failures exit nonzero with a single machine-parsable error line") {
    TempDir tmp;
    SUBCASE("no subcommand") {
        const auto r = run_cli(tmp, "");
        CHECK(r.code != 0);
        CHECK(single_error_line(r.err));
    }
    SUBCASE("unknown flag") {
        const auto r = run_cli(tmp, "profile --frobnicate");
        CHECK(r.code != 0);
        CHECK(single_error_line(r.err));
    }
    SUBCASE("missing config file") {
        const auto r = run_cli(tmp, "profile --config '" + tmp.file("absent.cfg") + "'");
        CHECK(r.code != 0);
        CHECK(single_error_line(r.err));
    }
    SUBCASE("config constraint violation") {
        const auto cfg = tmp.file("bad.cfg");
        testutil::spit(cfg, "p_false = 0.7\n");
        const auto r = run_cli(tmp, "profile --config '" + cfg + "'");
        CHECK(r.code != 0);
        CHECK(single_error_line(r.err));
        CHECK(r.err.find("p_false") != std::string::npos);
    }
    SUBCASE("estimate without a scene") {
        const auto r = run_cli(tmp, "estimate --out '" + tmp.file("out") + "'");
        CHECK(r.code == 1);
        CHECK(single_error_line(r.err));
        CHECK(r.err.find("scene_path") != std::string::npos);
    }
}
