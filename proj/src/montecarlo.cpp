#include "rotsync/montecarlo.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <string>

#include <omp.h>

#include "rotsync/errors.hpp"

namespace rotsync {

double quantile(std::vector<double> values, double p) {
    if (values.empty()) {
        throw ArgumentError("quantile of an empty sample");
    }
    if (p < 0.0 || p > 1.0) {
        throw ArgumentError("quantile level must lie in [0, 1]");
    }
    std::sort(values.begin(), values.end());
    const double h = p * static_cast<double>(values.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(std::floor(h));
    if (lo + 1 >= values.size()) {
        return values.back();
    }
    const double frac = h - static_cast<double>(lo);
    return values[lo] + frac * (values[lo + 1] - values[lo]);
}

namespace {

struct RunOutput {
    RunTrace trace;
    std::vector<double> truth;
    std::vector<double> estimate_seconds;
    std::string error;  // non-empty when the run failed
};

RunOutput execute_run(const ExperimentConfig& cfg, std::uint64_t seed) {
    RunOutput out;
    SimConfig sim = cfg.sim;
    sim.seed = seed;
    const SimRun run = simulate(sim, cfg.profile, MeasurementParams{
                                                      cfg.tracker.measurement_std,
                                                      cfg.tracker.target_speed,
                                                  });
    const std::vector<double> r1 = run.magnitudes(1);
    const std::vector<double> r2 = run.magnitudes(2);

    OnlineEstimator estimator(cfg.estimator);
    out.trace.first_step = cfg.estimator.window_size;
    for (int k = 1; k <= sim.coarse_steps; ++k) {
        const auto t0 = std::chrono::steady_clock::now();
        const auto est = estimator.push(k, RotationMagnitude(r1[k - 1]), RotationMagnitude(r2[k - 1]));
        const auto t1 = std::chrono::steady_clock::now();
        if (!est) {
            continue;
        }
        out.estimate_seconds.push_back(std::chrono::duration<double>(t1 - t0).count());
        const double truth = run.truth_offset[k - 1];
        out.trace.offsets.push_back(est->offset);
        out.trace.uncertainties.push_back(est->uncertainty);
        out.trace.abs_errors.push_back(std::abs(est->offset - truth));
        out.truth.push_back(truth);
    }
    return out;
}

}  // namespace

McResult run_batch(const ExperimentConfig& cfg, bool keep_runs) {
    cfg.validate();
    if (cfg.estimator.window_size > cfg.sim.coarse_steps) {
        throw ConfigError("window_size exceeds the number of coarse steps");
    }
    const int runs = cfg.montecarlo.runs;
    std::vector<RunOutput> outputs(runs);

    const int jobs = cfg.montecarlo.jobs > 0 ? cfg.montecarlo.jobs : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(jobs)
    for (int i = 0; i < runs; ++i) {
        try {
            outputs[i] = execute_run(cfg, cfg.montecarlo.base_seed + static_cast<std::uint64_t>(i));
        } catch (const std::exception& e) {
            outputs[i].error = e.what()[0] != '\0' ? e.what() : "unknown failure";
        }
    }
    for (int i = 0; i < runs; ++i) {
        if (!outputs[i].error.empty()) {
            throw SimulationError("run with seed " +
                                  std::to_string(cfg.montecarlo.base_seed + static_cast<std::uint64_t>(i)) +
                                  " failed: " + outputs[i].error);
        }
    }

    const std::size_t per_run = outputs.front().trace.offsets.size();
    McResult result;
    result.rows.reserve(per_run);

    std::vector<double> offsets(runs), errors(runs), uncertainties(runs);
    for (std::size_t j = 0; j < per_run; ++j) {
        for (int i = 0; i < runs; ++i) {
            offsets[i] = outputs[i].trace.offsets[j];
            errors[i] = outputs[i].trace.abs_errors[j];
            uncertainties[i] = outputs[i].trace.uncertainties[j];
        }
        AggregateRow row;
        row.step = outputs.front().trace.first_step + static_cast<int>(j);
        row.truth = outputs.front().truth[j];
        row.estimate_median = quantile(offsets, 0.5);
        row.estimate_q25 = quantile(offsets, 0.25);
        row.estimate_q75 = quantile(offsets, 0.75);
        row.abs_error_median = quantile(errors, 0.5);
        row.uncertainty_median = quantile(uncertainties, 0.5);
        result.rows.push_back(row);
    }

    std::vector<double> timings;
    for (const RunOutput& out : outputs) {
        timings.insert(timings.end(), out.estimate_seconds.begin(), out.estimate_seconds.end());
    }
    if (!timings.empty()) {
        result.median_estimate_seconds = quantile(std::move(timings), 0.5);
    }

    if (keep_runs) {
        result.runs.reserve(runs);
        for (RunOutput& out : outputs) {
            result.runs.push_back(std::move(out.trace));
        }
    }
    return result;
}

}  // namespace rotsync
