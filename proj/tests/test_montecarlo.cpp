#include <doctest.h>

#include "rotsync/errors.hpp"
#include "rotsync/montecarlo.hpp"

using namespace rotsync;

namespace {

ExperimentConfig small_experiment(int runs) {
    ExperimentConfig cfg;
    cfg.sim.coarse_steps = 60;
    cfg.sim.fine_factor = 10;
    cfg.sim.noise_level = 0.5;
    cfg.estimator.window_size = 12;
    cfg.estimator.interpolation_factor = 4;
    cfg.profile = ErrorProfile::ramp(20, 45, 0.5);
    cfg.montecarlo.runs = runs;
    cfg.montecarlo.base_seed = 77;
    return cfg;
}

}  // namespace

TEST_CASE("quantile: interpolated quartiles, degenerate sample") {
    std::vector<double> values{4.0, 1.0, 3.0, 2.0};
    CHECK(quantile(values, 0.0) == 1.0);
    CHECK(quantile(values, 1.0) == 4.0);
    CHECK(quantile(values, 0.5) == doctest::Approx(2.5));
    CHECK(quantile(values, 0.25) == doctest::Approx(1.75));
    CHECK(quantile({5.0}, 0.25) == 5.0);
    CHECK_THROWS_AS(quantile({}, 0.5), ArgumentError);
    CHECK_THROWS_AS(quantile({1.0}, 1.5), ArgumentError);
}

TEST_CASE("run_batch: a single run collapses the quartiles onto it") {
    const McResult result = run_batch(small_experiment(1), true);
    REQUIRE(!result.rows.empty());
    REQUIRE(result.runs.size() == 1);
    for (std::size_t i = 0; i < result.rows.size(); ++i) {
        const AggregateRow& row = result.rows[i];
        CHECK(row.estimate_q25 == row.estimate_median);
        CHECK(row.estimate_median == row.estimate_q75);
        CHECK(row.estimate_median == result.runs[0].offsets[i]);
    }
}

TEST_CASE("run_batch: quartiles are ordered and independent of the job count") {
    ExperimentConfig cfg = small_experiment(6);
    cfg.montecarlo.jobs = 1;
    const McResult serial = run_batch(cfg);
    cfg.montecarlo.jobs = 3;
    const McResult parallel = run_batch(cfg);

    REQUIRE(serial.rows.size() == parallel.rows.size());
    for (std::size_t i = 0; i < serial.rows.size(); ++i) {
        const AggregateRow& a = serial.rows[i];
        const AggregateRow& b = parallel.rows[i];
        CHECK(a.estimate_q25 <= a.estimate_median);
        CHECK(a.estimate_median <= a.estimate_q75);
        CHECK(a.step == b.step);
        CHECK(a.truth == b.truth);
        CHECK(a.estimate_median == b.estimate_median);
        CHECK(a.estimate_q25 == b.estimate_q25);
        CHECK(a.estimate_q75 == b.estimate_q75);
        CHECK(a.abs_error_median == b.abs_error_median);
        CHECK(a.uncertainty_median == b.uncertainty_median);
    }
}

TEST_CASE("run_batch: rows start at the window-fill step and track the ramp") {
    ExperimentConfig cfg = small_experiment(8);
    const McResult result = run_batch(cfg);
    REQUIRE(!result.rows.empty());
    CHECK(result.rows.front().step == cfg.estimator.window_size);
    CHECK(result.rows.back().step == cfg.sim.coarse_steps);
    // After the ramp settles the median estimate should sit near 0.5.
    CHECK(result.rows.back().truth == doctest::Approx(0.5));
    CHECK(std::abs(result.rows.back().estimate_median - 0.5) < 0.3);
    CHECK(result.median_estimate_seconds > 0.0);
    CHECK(result.median_estimate_seconds < 0.1);
}

TEST_CASE("run_batch: rejects configs whose window never fills") {
    ExperimentConfig cfg = small_experiment(1);
    cfg.estimator.window_size = cfg.sim.coarse_steps + 10;
    CHECK_THROWS_AS(run_batch(cfg), ConfigError);
}
