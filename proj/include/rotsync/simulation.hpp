#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "rotsync/assessment.hpp"
#include "rotsync/geometry.hpp"

namespace rotsync {

enum class PathKind { lissajous, straight };

struct SimConfig {
    int coarse_steps = 200;
    int fine_factor = 100;  // fine grid is this many times denser than coarse
    PathKind path = PathKind::lissajous;
    double radius = 30.0;      // lissajous extent, metres
    double sin_factor = 2.0;   // x = radius * sin(sin_factor * t)
    double cos_factor = 3.0;   // y = x * cos(cos_factor * t)
    double speed = 0.4;        // straight ego path speed, m/s
    double noise_level = 0.5;  // std relative to mean fine-step motion
    std::uint64_t seed = 1;
    double step_duration = 1.0;  // seconds per coarse step

    void validate() const;
};

/// Ground-truth offset trajectory of sensor 2's clock, in coarse steps.
/// Offsets are realized on the fine grid, so every configured offset value
/// must be a multiple of 1/fine_factor. Before the first event the offset
/// is zero.
struct ErrorProfile {
    enum class Kind { none, ramp, steps };

    Kind kind = Kind::none;
    int ramp_start = 50;
    int ramp_end = 150;
    double ramp_offset = 1.0;
    std::vector<std::pair<int, double>> step_events;  // (step, offset held from there on)

    static ErrorProfile none();
    static ErrorProfile ramp(int start, int end, double final_offset);
    static ErrorProfile steps(std::vector<std::pair<int, double>> events);

    /// Offset at coarse time t (ramp interpolates linearly between knots).
    double offset_at(double t) const;
    double min_offset() const;
    double max_offset() const;
    void validate(int fine_factor) const;
};

/// World poses of the ego and target vehicles on the fine grid.
/// Index i of the pose vectors corresponds to fine step first_index + i.
struct FinePath {
    long first_index = 0;
    long last_index = 0;
    std::vector<RigidMotion> ego;
    std::vector<RigidMotion> target;

    const RigidMotion& ego_at(long fine_index) const;
    const RigidMotion& target_at(long fine_index) const;
};

/// Per-step relative motions of one sensor on the fine grid, with the noise
/// levels that were applied. motions[i] covers fine step first_index + i,
/// i.e. the move from pose(first_index + i - 1) to pose(first_index + i).
struct SensorMotions {
    long first_index = 0;
    std::vector<RigidMotion> motions;
    double sigma_rot = 0.0;
    double sigma_trans = 0.0;

    const RigidMotion& at(long fine_index) const;
};

/// Sensor motions resampled onto the sensor's (possibly offset) clock,
/// covering fine steps 1..coarse_steps*fine_factor, plus the ground-truth
/// offset realized at each coarse step.
struct ShiftedMotions {
    std::vector<RigidMotion> motions;
    std::vector<double> truth;  // per coarse step 1..coarse_steps
};

struct MeasurementParams {
    double sigma_r = 0.05;      // position noise std, metres
    double target_speed = 0.4;  // m/s along +x
};

/// One complete simulated scenario at coarse resolution.
struct SimRun {
    SimConfig config;
    RigidMotion mount;  // fixed sensor1 -> sensor2 transform
    std::vector<RigidMotion> motions_s1, motions_s2;   // coarse steps 1..S
    std::vector<double> truth_offset;                  // per coarse step 1..S
    std::vector<StampedMeasurement> meas_s1, meas_s2;  // stamped at steps 1..S
    std::vector<Eigen::Vector2d> target_truth;         // target position at steps 1..S
    double sigma_rot = 0.0, sigma_trans = 0.0;

    std::vector<double> magnitudes(int sensor) const;
};

FinePath generate_paths(const SimConfig& cfg, int margin_before, int margin_after,
                        double target_speed);

/// Relative motions of one sensor mounted at `mount` on the ego body, with
/// relative Gaussian noise: rotation noise std = noise_level * mean fine
/// rotation magnitude (translation analogous), drawn independently per step.
SensorMotions derive_noisy_motions(const FinePath& path, const RigidMotion& mount,
                                   double noise_level, std::mt19937_64& rng);

/// Resample a sensor's fine motion stream onto its offset clock: output fine
/// step j reads input fine step j - round(offset(j/ff) * ff). Reads outside
/// the simulated margin raise SimulationError.
ShiftedMotions apply_error_profile(const SensorMotions& motions, const ErrorProfile& profile,
                                   const SimConfig& cfg);

/// Compose groups of fine_factor consecutive fine motions, temporal order.
std::vector<RigidMotion> batch_to_coarse(std::span<const RigidMotion> fine, int fine_factor);

/// Target position measurements for both sensors at every coarse step.
/// Sensor 2 acquires at its offset clock but stamps the intended step.
std::pair<std::vector<StampedMeasurement>, std::vector<StampedMeasurement>> simulate_measurements(
    const FinePath& path, const ErrorProfile& profile, const SimConfig& cfg,
    const MeasurementParams& params, std::mt19937_64& rng1, std::mt19937_64& rng2);

/// Full deterministic scenario: identical config and seed give identical runs.
SimRun simulate(const SimConfig& cfg, const ErrorProfile& profile, const MeasurementParams& params);

/// Sub-seed derivation for independent deterministic streams.
std::uint64_t splitmix64(std::uint64_t& state);

}  // namespace rotsync
