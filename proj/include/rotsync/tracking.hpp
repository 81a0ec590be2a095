#pragma once

#include <cmath>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "rotsync/assessment.hpp"

namespace rotsync {

/// Gaussian track state, ordered (x, vx, y, vy).
struct GaussianState {
    Eigen::Vector4d mean = Eigen::Vector4d::Zero();
    Eigen::Matrix4d cov = Eigen::Matrix4d::Identity();
};

/// Nearly-constant-velocity process with white-acceleration noise.
///
/// Two noise shapes are supported. `discrete` applies the piecewise-constant
/// acceleration covariance gamma * diag(sigma^2) * gamma^T with per-axis
/// gamma = (dt^2/2, dt). `continuous` integrates white acceleration over the
/// interval, which makes prediction exactly consistent under splitting an
/// interval in two; the discrete shape is not.
struct ProcessModel {
    enum class NoiseForm { discrete, continuous };

    Eigen::Vector2d accel_std = Eigen::Vector2d(0.002, 0.002);  // m/s^2 per axis
    NoiseForm noise_form = NoiseForm::discrete;
};

/// Linear position measurement z = H x + e, e ~ N(0, R).
struct MeasurementModel {
    Eigen::Matrix<double, 2, 4> H;
    Eigen::Matrix2d R;
};

/// Position-only measurement model with isotropic noise; validates sigma_r.
MeasurementModel position_measurement_model(double sigma_r);

Eigen::Matrix4d transition_matrix(double dt);
Eigen::Matrix4d process_noise(double dt, const ProcessModel& pm);

/// Advance the state by dt seconds. dt = 0 returns the state unchanged;
/// negative dt is rejected.
GaussianState predict(const GaussianState& state, double dt, const ProcessModel& pm);

/// Fold a position measurement into the state (Joseph-form covariance).
GaussianState update(const GaussianState& state, const Eigen::Vector2d& z, const MeasurementModel& mm);

struct TrackPoint {
    double time = 0.0;  // coarse steps
    GaussianState state;

    double speed() const { return std::hypot(state.mean(1), state.mean(3)); }
};

/// Start a track on a measurement: position from z, velocity zero with a
/// wide prior.
GaussianState init_from_measurement(const StampedMeasurement& m, const MeasurementModel& mm,
                                    double velocity_std);

/// Run predict/update over time-ordered measurements, emitting the posterior
/// after each one. Timestamps are in coarse steps and are scaled by
/// step_duration (seconds per step); equal stamps predict over dt = 0.
std::vector<TrackPoint> run_tracker(std::span<const StampedMeasurement> measurements,
                                    const GaussianState& init, double init_time,
                                    const ProcessModel& pm, const MeasurementModel& mm,
                                    double step_duration = 1.0);

/// Full tracking pass over a possibly unordered measurement set: sort by
/// (timestamp, sensor), start the track on the first measurement, then fold
/// the rest. One output point per measurement, the first being the initial
/// state.
std::vector<TrackPoint> track_measurements(std::vector<StampedMeasurement> measurements,
                                           const ProcessModel& pm, const MeasurementModel& mm,
                                           double init_velocity_std, double step_duration = 1.0);

}  // namespace rotsync
