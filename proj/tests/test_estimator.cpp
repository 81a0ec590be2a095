#include <doctest.h>

#include <cmath>
#include <random>

#include "rotsync/errors.hpp"
#include "rotsync/estimator.hpp"
#include "rotsync/reference.hpp"
#include "rotsync/simulation.hpp"
#include "test_helpers.hpp"

using namespace rotsync;
using rotsync::testing::delayed_windows;
using rotsync::testing::random_window;

namespace {

EstimatorConfig small_config(int w = 16, int b = 4) {
    EstimatorConfig cfg;
    cfg.window_size = w;
    cfg.interpolation_factor = b;
    return cfg;
}

double peak_series(int k) {
    const double d = std::abs(k - 24);
    return d < 5 ? 1.0 - d / 5.0 : 0.05;
}

}  // namespace

TEST_CASE("estimate_offset: identical windows are in sync") {
    std::mt19937_64 rng(3);
    MagnitudeWindow win = random_window(16, rng);
    const OffsetEstimate est = estimate_offset(win, win, small_config());
    CHECK(est.offset == 0.0);
    CHECK(est.timestamp == win.anchor);
}

TEST_CASE("estimate_offset: recovers a two-step delay, argmin agrees with the naive scan") {
    const EstimatorConfig cfg = small_config();
    const auto pair = delayed_windows(peak_series, cfg.window_size, 30, 2);
    const OffsetEstimate est = estimate_offset(pair.win1, pair.win2, cfg);

    const auto ref_scores =
        reference::similarity_scan(interpolate(pair.win1, cfg.interpolation_factor),
                                   interpolate(pair.win2, cfg.interpolation_factor),
                                   cfg.temporal_factor);
    const int ref_argmin = reference::argmin_shift(ref_scores);
    CHECK(est.offset == doctest::Approx(static_cast<double>(ref_argmin) / cfg.interpolation_factor));
    CHECK(std::abs(est.offset - 2.0) <= 1.0 / cfg.interpolation_factor + 1e-12);
}

TEST_CASE("estimate_offset: constant windows fall back to zero with saturated uncertainty") {
    EstimatorConfig cfg = small_config();
    MagnitudeWindow flat{std::vector<double>(cfg.window_size, 0.3), 16};
    const OffsetEstimate est = estimate_offset(flat, flat, cfg);
    CHECK(est.offset == 0.0);
    CHECK(est.uncertainty == 1.0 / cfg.uncertainty_epsilon);
}

TEST_CASE("estimate_offset: validates windows and config") {
    EstimatorConfig cfg = small_config();
    std::mt19937_64 rng(5);
    MagnitudeWindow win = random_window(cfg.window_size, rng);
    MagnitudeWindow shorter = random_window(cfg.window_size - 1, rng);
    shorter.anchor = win.anchor;
    CHECK_THROWS_AS(estimate_offset(win, shorter, cfg), ArgumentError);

    MagnitudeWindow other_anchor = win;
    other_anchor.anchor = win.anchor + 1;
    CHECK_THROWS_AS(estimate_offset(win, other_anchor, cfg), ArgumentError);

    EstimatorConfig odd = cfg;
    odd.window_size = 5;
    odd.interpolation_factor = 3;
    CHECK_THROWS_AS(estimate_offset(win, win, odd), ConfigError);

    EstimatorConfig bad_decay = cfg;
    bad_decay.temporal_factor = 0.0;
    CHECK_THROWS_AS(estimate_offset(win, win, bad_decay), ConfigError);
}

TEST_CASE("estimate_offset: sign convention, positive offset means sensor 2 lags") {
    const EstimatorConfig cfg = small_config();
    for (int delay : {-3, -1, 1, 2, 3}) {
        const auto pair = delayed_windows(peak_series, cfg.window_size, 30, delay);
        const OffsetEstimate est = estimate_offset(pair.win1, pair.win2, cfg);
        CHECK(est.offset == doctest::Approx(static_cast<double>(delay)));
    }
}

TEST_CASE("estimate_offset: argmin is scale invariant and bounded by w/2") {
    const EstimatorConfig cfg = small_config();
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 25; ++trial) {
        MagnitudeWindow win1 = random_window(cfg.window_size, rng);
        MagnitudeWindow win2 = random_window(cfg.window_size, rng);
        win2.anchor = win1.anchor;
        const OffsetEstimate est = estimate_offset(win1, win2, cfg);
        CHECK(std::abs(est.offset) <= cfg.window_size / 2.0);

        MagnitudeWindow s1 = win1, s2 = win2;
        for (double& v : s1.samples) v *= 3.7;
        for (double& v : s2.samples) v *= 3.7;
        CHECK(estimate_offset(s1, s2, cfg).offset == est.offset);
    }
}

TEST_CASE("estimate_offset: grid-realizable offsets recovered within one cell") {
    // Triangular magnitudes are piecewise linear, so fractional shifts on the
    // 1/b grid are representable exactly by the interpolation.
    const EstimatorConfig cfg = small_config(16, 4);
    const auto tri = [](double k) {
        const double d = std::abs(k - 24.0);
        return d < 6 ? 1.0 - d / 6.0 : 0.0;
    };
    for (int shift_cells = -16; shift_cells <= 16; ++shift_cells) {
        const double delta = static_cast<double>(shift_cells) / cfg.interpolation_factor;
        MagnitudeWindow win1, win2;
        win1.anchor = win2.anchor = 30;
        for (int l = 0; l < cfg.window_size; ++l) {
            const double k = 30.0 - cfg.window_size + l + 1;
            win1.samples.push_back(tri(k));
            win2.samples.push_back(tri(k - delta));
        }
        const OffsetEstimate est = estimate_offset(win1, win2, cfg);
        CHECK(std::abs(est.offset - delta) <= 1.0 / cfg.interpolation_factor + 1e-12);
    }
}

TEST_CASE("uncertainty: flat windows, worked total variation, halving under doubled activity") {
    MagnitudeWindow flat{std::vector<double>(8, 0.2), 8};
    CHECK(uncertainty(flat, flat, 1e-9) == doctest::Approx(1e9));

    // Total variation: |0.1-0| + |0-0.1| = 0.2 plus |0-0| + |0.1-0| = 0.1.
    MagnitudeWindow win1{{0.0, 0.1, 0.0}, 3};
    MagnitudeWindow win2{{0.0, 0.0, 0.1}, 3};
    CHECK(uncertainty(win1, win2, 1e-9) == doctest::Approx(1.0 / 0.3).epsilon(1e-12));

    std::mt19937_64 rng(29);
    MagnitudeWindow a = random_window(12, rng);
    MagnitudeWindow b = random_window(12, rng);
    MagnitudeWindow a2 = a, b2 = b;
    for (double& v : a2.samples) v *= 2.0;
    for (double& v : b2.samples) v *= 2.0;
    CHECK(uncertainty(a2, b2, 1e-12) ==
          doctest::Approx(uncertainty(a, b, 1e-12) / 2.0).epsilon(1e-9));
}

TEST_CASE("OnlineEstimator: buffers w samples, then emits every step") {
    EstimatorConfig cfg = small_config(8, 2);
    OnlineEstimator online(cfg);
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> mag(0.0, 0.5);
    for (int k = 1; k < 8; ++k) {
        CHECK_FALSE(online.push(k, RotationMagnitude(mag(rng)), RotationMagnitude(mag(rng))));
    }
    const auto first = online.push(8, RotationMagnitude(mag(rng)), RotationMagnitude(mag(rng)));
    REQUIRE(first.has_value());
    CHECK(first->timestamp == 8);
    CHECK(online.push(9, RotationMagnitude(0.1), RotationMagnitude(0.1)).has_value());

    CHECK_THROWS_AS(online.push(9, RotationMagnitude(0.1), RotationMagnitude(0.1)), StreamError);
    CHECK_THROWS_AS(online.push(12, RotationMagnitude(0.1), RotationMagnitude(0.1)), StreamError);
}

TEST_CASE("OnlineEstimator: matches per-step batch recomputation exactly") {
    EstimatorConfig cfg = small_config(10, 2);
    std::mt19937_64 rng(37);
    std::uniform_real_distribution<double> mag(0.0, 0.4);
    std::vector<double> r1, r2;
    for (int k = 0; k < 40; ++k) {
        r1.push_back(mag(rng));
        r2.push_back(mag(rng));
    }
    OnlineEstimator online(cfg);
    for (int k = 1; k <= 40; ++k) {
        const auto est = online.push(k, RotationMagnitude(r1[k - 1]), RotationMagnitude(r2[k - 1]));
        if (k < cfg.window_size) {
            CHECK_FALSE(est.has_value());
            continue;
        }
        REQUIRE(est.has_value());
        MagnitudeWindow win1, win2;
        win1.anchor = win2.anchor = k;
        win1.samples.assign(r1.begin() + (k - cfg.window_size), r1.begin() + k);
        win2.samples.assign(r2.begin() + (k - cfg.window_size), r2.begin() + k);
        const OffsetEstimate batch = estimate_offset(win1, win2, cfg);
        CHECK(est->offset == batch.offset);
        CHECK(est->uncertainty == batch.uncertainty);
    }
}

TEST_CASE("OnlineEstimator: ramp scenario agrees with batch recomputation on simulated data") {
    SimConfig sim;
    sim.coarse_steps = 80;
    sim.fine_factor = 20;
    sim.noise_level = 0.1;
    sim.seed = 99;
    const ErrorProfile profile = ErrorProfile::ramp(20, 60, 0.5);
    const SimRun run = simulate(sim, profile, MeasurementParams{});
    const std::vector<double> r1 = run.magnitudes(1);
    const std::vector<double> r2 = run.magnitudes(2);

    EstimatorConfig cfg = small_config(16, 4);
    OnlineEstimator online(cfg);
    for (int k = 1; k <= sim.coarse_steps; ++k) {
        const auto est = online.push(k, RotationMagnitude(r1[k - 1]), RotationMagnitude(r2[k - 1]));
        if (!est) continue;
        MagnitudeWindow win1, win2;
        win1.anchor = win2.anchor = k;
        win1.samples.assign(r1.begin() + (k - cfg.window_size), r1.begin() + k);
        win2.samples.assign(r2.begin() + (k - cfg.window_size), r2.begin() + k);
        const OffsetEstimate batch = estimate_offset(win1, win2, cfg);
        CHECK(est->offset == batch.offset);
        CHECK(est->uncertainty == batch.uncertainty);
    }
}

TEST_CASE("constant_offset_baseline: zero for identical series, signed shift recovery") {
    std::vector<double> series(64);
    for (std::size_t k = 0; k < series.size(); ++k) {
        series[k] = 0.3 + 0.2 * std::sin(0.4 * static_cast<double>(k)) +
                    0.05 * std::cos(1.7 * static_cast<double>(k));
    }
    CHECK(constant_offset_baseline(series, series) == 0.0);

    const int n = static_cast<int>(series.size());
    std::vector<double> delayed(series.size());
    for (int k = 0; k < n; ++k) {
        delayed[k] = series[((k - 5) % n + n) % n];  // r2[k] = r1[k-5]
    }
    CHECK(constant_offset_baseline(series, delayed) == 5.0);

    CHECK_THROWS_AS(constant_offset_baseline(series, std::vector<double>{1.0, 2.0}),
                    ArgumentError);
}

TEST_CASE("constant_offset_baseline: a single constant cannot track a ramp") {
    SimConfig sim;
    sim.coarse_steps = 120;
    sim.fine_factor = 20;
    sim.noise_level = 0.0;
    sim.seed = 7;
    const ErrorProfile profile = ErrorProfile::ramp(20, 100, 1.0);
    const SimRun run = simulate(sim, profile, MeasurementParams{});
    const double constant = constant_offset_baseline(run.magnitudes(1), run.magnitudes(2));

    double worst = 0.0;
    for (double truth : run.truth_offset) {
        worst = std::max(worst, std::abs(truth - constant));
    }
    CHECK(worst >= 0.45);  // truth spans 0..1, so any constant misses by ~0.5 somewhere
}
