#pragma once

#include <vector>

#include "rotsync/config.hpp"

namespace rotsync {

/// Linear-interpolation quantile of an unsorted sample, p in [0, 1].
double quantile(std::vector<double> values, double p);

/// One aggregated Monte Carlo row: per-step quantiles across runs.
struct AggregateRow {
    int step = 0;
    double truth = 0.0;
    double estimate_median = 0.0;
    double estimate_q25 = 0.0;
    double estimate_q75 = 0.0;
    double abs_error_median = 0.0;
    double uncertainty_median = 0.0;
};

/// Per-run estimate traces, aligned by step (first_step + index).
struct RunTrace {
    int first_step = 0;
    std::vector<double> offsets;
    std::vector<double> uncertainties;
    std::vector<double> abs_errors;
};

struct McResult {
    std::vector<AggregateRow> rows;
    double median_estimate_seconds = 0.0;  // estimator call only
    std::vector<RunTrace> runs;            // kept when requested
};

/// Run `runs` independent simulations (run i uses base_seed + i), estimate
/// offsets online, and aggregate per-step medians and quartiles. Runs execute
/// on an OpenMP worker pool sized by montecarlo.jobs (0 = all processors);
/// results land in per-run slots, so the aggregate does not depend on the
/// job count.
McResult run_batch(const ExperimentConfig& cfg, bool keep_runs = false);

}  // namespace rotsync
