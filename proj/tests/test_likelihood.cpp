#include "firelik/likelihood.hpp"

#include "firelik/spread.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

using namespace firelik;

namespace {

LikelihoodParamsd fig_params() {
    // reference sensor: sigma 2 km, 2 h decay, 0.1% false rate, 50% at 1% heat
    return LikelihoodParamsd::make(0.001, 0.01, 2000.0, 7200.0);
}

DetectionScened ring_scene(double cx, double cy, double radius, double t_scan, int n) {
    const double two_pi = 2.0 * std::acos(-1.0);
    DetectionScened scene;
    for (int k = 0; k < n; ++k) {
        const double th = two_pi * k / n;
        DetectionPixeld px;
        px.center = Vec2d(cx + radius * std::cos(th), cy + radius * std::sin(th));
        px.detect = 1;
        px.confidence = 1.0;
        px.t_scan = t_scan;
        scene.pixels.push_back(px);
    }
    return scene;
}

}  // namespace

TEST_CASE("scene log-likelihood adds over pixels") {
    const GridSpecd g(101, 101, 10.0, 10.0);
    const auto p = LikelihoodParamsd::make(0.001, 0.01, 50.0, 7200.0);
    const auto T = cone_arrival(IgnitionCandidated{Vec2d(500.0, 500.0), 30.0}, 1.0, g);
    const auto scene = ring_scene(500.0, 500.0, 270.0, 300.0, 8);

    DetectionScened head, tail;
    head.pixels.assign(scene.pixels.begin(), scene.pixels.begin() + 3);
    tail.pixels.assign(scene.pixels.begin() + 3, scene.pixels.end());
    const double whole = scene_log_likelihood(scene, T, p);
    const double parts = scene_log_likelihood(head, T, p) + scene_log_likelihood(tail, T, p);
    CHECK(whole == doctest::Approx(parts).epsilon(1e-12));
}

TEST_CASE("confidence zero marks missing data and contributes nothing") {
    const GridSpecd g(101, 101, 10.0, 10.0);
    const auto p = LikelihoodParamsd::make(0.001, 0.01, 50.0, 7200.0);
    const auto T = cone_arrival(IgnitionCandidated{Vec2d(500.0, 500.0), 30.0}, 1.0, g);
    auto scene = ring_scene(500.0, 500.0, 270.0, 300.0, 8);
    const double base = scene_log_likelihood(scene, T, p);

    DetectionPixeld ghost;
    ghost.center = Vec2d(-1e9, -1e9);  // would blow up if it were ever evaluated
    ghost.detect = 1;
    ghost.confidence = 0.0;
    ghost.t_scan = 300.0;
    scene.pixels.push_back(ghost);
    CHECK(scene_log_likelihood(scene, T, p) == base);
}

TEST_CASE("confidence outside [0,1] is rejected with the pixel index") {
    const GridSpecd g(21, 21, 10.0, 10.0);
    const auto p = LikelihoodParamsd::make(0.001, 0.01, 50.0, 7200.0);
    const auto T = ScalarFieldd::constant(g, 0.0);
    auto scene = ring_scene(100.0, 100.0, 50.0, 300.0, 3);
    scene.pixels[1].confidence = 1.5;
    CHECK_THROWS_WITH_AS(scene_log_likelihood(scene, T, p), doctest::Contains("pixel 1"),
                         std::invalid_argument);
}

TEST_CASE("scaling every confidence scales the log-likelihood") {
    const GridSpecd g(101, 101, 10.0, 10.0);
    const auto p = LikelihoodParamsd::make(0.001, 0.01, 50.0, 7200.0);
    const auto T = cone_arrival(IgnitionCandidated{Vec2d(500.0, 500.0), 30.0}, 1.0, g);
    auto scene = ring_scene(500.0, 500.0, 270.0, 300.0, 8);
    scene.pixels[2].detect = 0;
    for (auto& px : scene.pixels) px.confidence = 0.5;  // headroom for lambda = 2
    scene.pixels[5].confidence = 0.4;
    const double base = scene_log_likelihood(scene, T, p);

    for (const double lam : {0.5, 0.25, 2.0}) {  // power-of-two scales commute exactly
        auto scaled = scene;
        for (auto& px : scaled.pixels) px.confidence *= lam;
        CHECK(scene_log_likelihood(scaled, T, p) == lam * base);
    }
    auto scaled = scene;
    for (auto& px : scaled.pixels) px.confidence *= 0.3;
    CHECK(scene_log_likelihood(scaled, T, p) ==
          doctest::Approx(0.3 * base).epsilon(1e-12));
}

TEST_CASE("burning fresh ground inside the window can only raise a detection's odds") {
    const GridSpecd g(41, 41, 10.0, 10.0);
    const auto p = LikelihoodParamsd::make(0.001, 0.01, 40.0, 7200.0);
    auto T = ScalarFieldd::constant(g, unburned<double>());
    DetectionPixeld px;
    px.center = Vec2d(200.0, 200.0);
    px.detect = 1;
    px.t_scan = 400.0;
    double prev = pixel_prob(px, T, p);
    // light up nodes spiralling outward from the center, freshly burned
    for (int k = 0; k < 40; ++k) {
        T.at(20 + (k % 9) - 4, 20 + (k / 9) - 2) = 395.0;
        const double cur = pixel_prob(px, T, p);
        CHECK(cur >= prev);
        prev = cur;
    }
}

TEST_CASE("profile stays above the false-rate floor and peaks after passage") {
    const auto p = fig_params();
    const auto prof = likelihood_profile(-20000.0, 60000.0, 161, 1.0, p);
    const double floor = std::log(p.p_false);
    for (Eigen::Index i = 0; i < prof.log_p.size(); ++i) {
        CHECK(prof.log_p[i] >= floor - 1e-6);
        CHECK(prof.log_p[i] <= 0.0);
    }
    Eigen::Index imax = 0;
    prof.log_p.maxCoeff(&imax);
    CHECK(prof.delta_t[imax] > 0.0);                          // peak after arrival
    CHECK(prof.log_p[imax] >= std::log(0.95));                // near-certain detection
    CHECK(prof.log_p[0] == doctest::Approx(floor).epsilon(1e-6));  // deep leading floor
}

TEST_CASE("two-dimensional profile quadrature reduces to the one-dimensional rule") {
    const auto p = fig_params();
    const double extent = p.kernel_radius * p.sigma;
    const int n = int(16 * p.kernel_radius);
    const double step = 2.0 * extent / n;
    for (const double dt : {-6000.0, -2000.0, -500.0, 0.0, 800.0, 4000.0, 30000.0}) {
        CompensatedSum<double> mass, mix;
        for (int k = 0; k < n; ++k) {
            const double y = -extent + (k + 0.5) * step;
            const double w = std::exp(-y * y / (2.0 * p.sigma * p.sigma));
            mass.add(w);
            mix.add(w * detect_prob(heat_fraction(dt, y / 1.0, p.c_decay), p));
        }
        const double oneD = mix.value() / mass.value();
        CHECK(line_detect_prob(dt, 1.0, p) == doctest::Approx(oneD).epsilon(1e-6));
    }
}

TEST_CASE("profile rejects degenerate sampling requests") {
    const auto p = fig_params();
    CHECK_THROWS_AS(likelihood_profile(0.0, 100.0, 1, 1.0, p), std::invalid_argument);
    CHECK_THROWS_AS(likelihood_profile(100.0, 100.0, 10, 1.0, p), std::invalid_argument);
    CHECK_THROWS_AS(likelihood_profile(0.0, 100.0, 10, 0.0, p), std::invalid_argument);
}

TEST_CASE("profile summary measures interpolated crossing widths") {
    LikelihoodProfiled prof;
    prof.delta_t = ArrayX<double>::LinSpaced(11, 0.0, 10.0);
    prof.log_p.resize(11);
    prof.log_p << -10.0, -10.0, -8.0, -4.0, -1.0, -0.5, -1.0, -3.0, -6.0, -10.0, -10.0;
    const auto s = summarize_profile(prof);
    CHECK(s.floor_value == -10.0);
    CHECK(s.peak == -0.5);
    // hand-computed linear crossings: floor+1 = -9, peak-0.1 = -0.6
    CHECK(s.rise_width == doctest::Approx(4.8 - 1.5).epsilon(1e-12));
    CHECK(s.fall_width == doctest::Approx(8.75 - 5.2).epsilon(1e-12));
}

TEST_CASE("leading edge is steeper than the trailing edge") {
    const auto p = fig_params();
    const auto prof = likelihood_profile(-20000.0, 60000.0, 161, 1.0, p);
    const auto s = summarize_profile(prof);
    CHECK(s.rise_width > 0.0);
    CHECK(s.fall_width > s.rise_width);
}
