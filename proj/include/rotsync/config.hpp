#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>

#include "rotsync/estimator.hpp"
#include "rotsync/simulation.hpp"
#include "rotsync/tracking.hpp"

namespace rotsync {

/// Strategy settings as configured. u_max <= 0 means "auto": resolve it from
/// the uncertainty seen during an in-sync warm-up phase.
struct StrategyConfig {
    CorrectionStrategy::Kind kind = CorrectionStrategy::Kind::hybrid;
    double u_max = 0.0;  // <= 0: auto (75th percentile over warm-up)
    double offset_min = 0.5;
    int warmup = 30;  // estimates in the warm-up phase

    bool auto_u_max() const { return u_max <= 0.0; }
};

struct TrackerConfig {
    double measurement_std = 0.05;       // sigma_r, metres
    double process_position_std = 0.001; // metres of position noise per unit dt
    double target_speed = 0.4;           // m/s
    ProcessModel::NoiseForm noise_form = ProcessModel::NoiseForm::discrete;
    double init_velocity_std = 2.0;      // m/s

    /// Acceleration std giving the configured position noise at the nominal
    /// step: accel_std = 2 * process_position_std / step_duration.
    ProcessModel process_model(double step_duration) const;
    MeasurementModel measurement_model() const;
};

struct MonteCarloConfig {
    int runs = 1000;
    std::uint64_t base_seed = 1;
    int jobs = 0;  // 0: all processors
};

struct ExperimentConfig {
    SimConfig sim;
    EstimatorConfig estimator;
    ErrorProfile profile = default_profile();
    StrategyConfig strategy;
    TrackerConfig tracker;
    MonteCarloConfig montecarlo;

    static ErrorProfile default_profile();
    void validate() const;
};

/// Resolve an auto u_max threshold from warm-up estimates (75th percentile
/// of their uncertainties); explicit thresholds pass through.
CorrectionStrategy resolve_strategy(const StrategyConfig& cfg,
                                    std::span<const OffsetEstimate> estimates);

ExperimentConfig parse_config(std::string_view text, std::string_view source_name);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Echo of every resolved value, parseable by load_config.
std::string render_config(const ExperimentConfig& cfg);

}  // namespace rotsync
