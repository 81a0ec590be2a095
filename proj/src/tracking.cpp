#include "rotsync/tracking.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Cholesky>

#include "rotsync/errors.hpp"

namespace rotsync {

MeasurementModel position_measurement_model(double sigma_r) {
    if (!(sigma_r > 0.0)) {
        throw ConfigError("measurement noise std must be positive");
    }
    MeasurementModel mm;
    mm.H << 1, 0, 0, 0,
            0, 0, 1, 0;
    mm.R = sigma_r * sigma_r * Eigen::Matrix2d::Identity();
    return mm;
}

Eigen::Matrix4d transition_matrix(double dt) {
    Eigen::Matrix4d f = Eigen::Matrix4d::Identity();
    f(0, 1) = dt;
    f(2, 3) = dt;
    return f;
}

Eigen::Matrix4d process_noise(double dt, const ProcessModel& pm) {
    Eigen::Matrix4d q = Eigen::Matrix4d::Zero();
    for (int axis = 0; axis < 2; ++axis) {
        const double var = pm.accel_std[axis] * pm.accel_std[axis];
        const int i = 2 * axis;
        if (pm.noise_form == ProcessModel::NoiseForm::discrete) {
            const double g0 = dt * dt / 2.0;
            const double g1 = dt;
            q(i, i) = var * g0 * g0;
            q(i, i + 1) = var * g0 * g1;
            q(i + 1, i) = var * g0 * g1;
            q(i + 1, i + 1) = var * g1 * g1;
        } else {
            q(i, i) = var * dt * dt * dt / 3.0;
            q(i, i + 1) = var * dt * dt / 2.0;
            q(i + 1, i) = var * dt * dt / 2.0;
            q(i + 1, i + 1) = var * dt;
        }
    }
    return q;
}

namespace {

Eigen::Matrix4d symmetrized(const Eigen::Matrix4d& m) {
    return 0.5 * (m + m.transpose());
}

}  // namespace

GaussianState predict(const GaussianState& state, double dt, const ProcessModel& pm) {
    if (dt < 0.0) {
        throw ArgumentError("prediction interval must be non-negative");
    }
    if (dt == 0.0) {
        return state;
    }
    const Eigen::Matrix4d f = transition_matrix(dt);
    GaussianState out;
    out.mean = f * state.mean;
    out.cov = symmetrized(f * state.cov * f.transpose() + process_noise(dt, pm));
    return out;
}

GaussianState update(const GaussianState& state, const Eigen::Vector2d& z, const MeasurementModel& mm) {
    const Eigen::Matrix2d s = mm.H * state.cov * mm.H.transpose() + mm.R;
    const Eigen::LLT<Eigen::Matrix2d> llt(s);
    if (llt.info() != Eigen::Success) {
        throw NumericalError("innovation covariance is not invertible");
    }
    const Eigen::Matrix<double, 4, 2> k = llt.solve(mm.H * state.cov).transpose();

    GaussianState out;
    out.mean = state.mean + k * (z - mm.H * state.mean);
    // Joseph form: algebraically (I - KH) * cov, but PSD-safe.
    const Eigen::Matrix4d ikh = Eigen::Matrix4d::Identity() - k * mm.H;
    out.cov = symmetrized(ikh * state.cov * ikh.transpose() + k * mm.R * k.transpose());
    return out;
}

GaussianState init_from_measurement(const StampedMeasurement& m, const MeasurementModel& mm,
                                    double velocity_std) {
    if (!(velocity_std > 0.0)) {
        throw ConfigError("initial velocity std must be positive");
    }
    GaussianState s;
    s.mean << m.position.x(), 0.0, m.position.y(), 0.0;
    s.cov = Eigen::Matrix4d::Zero();
    s.cov(0, 0) = mm.R(0, 0);
    s.cov(2, 2) = mm.R(1, 1);
    s.cov(1, 1) = velocity_std * velocity_std;
    s.cov(3, 3) = velocity_std * velocity_std;
    return s;
}

std::vector<TrackPoint> track_measurements(std::vector<StampedMeasurement> measurements,
                                           const ProcessModel& pm, const MeasurementModel& mm,
                                           double init_velocity_std, double step_duration) {
    if (measurements.empty()) {
        throw ArgumentError("tracking needs at least one measurement");
    }
    std::stable_sort(measurements.begin(), measurements.end(),
                     [](const StampedMeasurement& a, const StampedMeasurement& b) {
                         if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
                         return a.sensor_id < b.sensor_id;
                     });
    const GaussianState init = init_from_measurement(measurements.front(), mm, init_velocity_std);
    std::vector<TrackPoint> trajectory;
    trajectory.reserve(measurements.size());
    trajectory.push_back(TrackPoint{measurements.front().timestamp, init});
    auto rest = run_tracker(std::span(measurements).subspan(1), init, measurements.front().timestamp,
                            pm, mm, step_duration);
    trajectory.insert(trajectory.end(), rest.begin(), rest.end());
    return trajectory;
}

std::vector<TrackPoint> run_tracker(std::span<const StampedMeasurement> measurements,
                                    const GaussianState& init, double init_time,
                                    const ProcessModel& pm, const MeasurementModel& mm,
                                    double step_duration) {
    std::vector<TrackPoint> trajectory;
    trajectory.reserve(measurements.size());
    GaussianState state = init;
    double last_time = init_time;
    for (const StampedMeasurement& m : measurements) {
        if (m.timestamp < last_time) {
            throw StreamError("tracker input must be ordered by timestamp");
        }
        state = predict(state, (m.timestamp - last_time) * step_duration, pm);
        state = update(state, m.position, mm);
        last_time = m.timestamp;
        trajectory.push_back(TrackPoint{m.timestamp, state});
    }
    return trajectory;
}

}  // namespace rotsync
