#include "rotsync/simulation.hpp"

#include <algorithm>
#include <cmath>

#include "rotsync/errors.hpp"

namespace rotsync {

void SimConfig::validate() const {
    if (coarse_steps < 2) throw ConfigError("coarse_steps must be >= 2");
    if (fine_factor < 1) throw ConfigError("fine_factor must be >= 1");
    if (noise_level < 0.0) throw ConfigError("noise_level must be >= 0");
    if (!(radius > 0.0)) throw ConfigError("radius must be positive");
    if (!(step_duration > 0.0)) throw ConfigError("step_duration must be positive");
}

ErrorProfile ErrorProfile::none() {
    ErrorProfile p;
    p.kind = Kind::none;
    return p;
}

ErrorProfile ErrorProfile::ramp(int start, int end, double final_offset) {
    ErrorProfile p;
    p.kind = Kind::ramp;
    p.ramp_start = start;
    p.ramp_end = end;
    p.ramp_offset = final_offset;
    return p;
}

ErrorProfile ErrorProfile::steps(std::vector<std::pair<int, double>> events) {
    ErrorProfile p;
    p.kind = Kind::steps;
    p.step_events = std::move(events);
    return p;
}

double ErrorProfile::offset_at(double t) const {
    switch (kind) {
        case Kind::none:
            return 0.0;
        case Kind::ramp:
            if (t <= ramp_start) return 0.0;
            if (t >= ramp_end) return ramp_offset;
            return ramp_offset * (t - ramp_start) / (ramp_end - ramp_start);
        case Kind::steps: {
            double offset = 0.0;
            for (const auto& [step, value] : step_events) {
                if (t >= step) offset = value;
            }
            return offset;
        }
    }
    return 0.0;
}

double ErrorProfile::min_offset() const {
    double lo = 0.0;
    if (kind == Kind::ramp) lo = std::min(lo, ramp_offset);
    for (const auto& [step, value] : step_events) lo = std::min(lo, value);
    return lo;
}

double ErrorProfile::max_offset() const {
    double hi = 0.0;
    if (kind == Kind::ramp) hi = std::max(hi, ramp_offset);
    for (const auto& [step, value] : step_events) hi = std::max(hi, value);
    return hi;
}

namespace {

bool on_fine_grid(double offset, int fine_factor) {
    const double scaled = offset * fine_factor;
    return std::abs(scaled - std::round(scaled)) < 1e-6;
}

}  // namespace

void ErrorProfile::validate(int fine_factor) const {
    if (kind == Kind::ramp) {
        if (ramp_start < 0 || ramp_end <= ramp_start) {
            throw ConfigError("ramp needs 0 <= start < end");
        }
        if (!on_fine_grid(ramp_offset, fine_factor)) {
            throw ConfigError("ramp offset must be a multiple of 1/fine_factor");
        }
    }
    if (kind == Kind::steps) {
        if (step_events.empty()) {
            throw ConfigError("step profile needs at least one event");
        }
        int last = -1;
        for (const auto& [step, value] : step_events) {
            if (step < 0 || step <= last) {
                throw ConfigError("step events must have increasing non-negative steps");
            }
            if (!on_fine_grid(value, fine_factor)) {
                throw ConfigError("step offsets must be multiples of 1/fine_factor");
            }
            last = step;
        }
    }
}

const RigidMotion& FinePath::ego_at(long fine_index) const {
    if (fine_index < first_index || fine_index > last_index) {
        throw SimulationError("fine index outside the simulated path");
    }
    return ego[static_cast<std::size_t>(fine_index - first_index)];
}

const RigidMotion& FinePath::target_at(long fine_index) const {
    if (fine_index < first_index || fine_index > last_index) {
        throw SimulationError("fine index outside the simulated path");
    }
    return target[static_cast<std::size_t>(fine_index - first_index)];
}

const RigidMotion& SensorMotions::at(long fine_index) const {
    if (fine_index < first_index || fine_index >= first_index + static_cast<long>(motions.size())) {
        throw SimulationError("fine index outside the simulated motion range");
    }
    return motions[static_cast<std::size_t>(fine_index - first_index)];
}

FinePath generate_paths(const SimConfig& cfg, int margin_before, int margin_after,
                        double target_speed) {
    cfg.validate();
    if (margin_before < 0 || margin_after < 0) {
        throw ArgumentError("margins must be non-negative");
    }
    const long n = static_cast<long>(cfg.coarse_steps) * cfg.fine_factor;
    FinePath path;
    path.first_index = -static_cast<long>(margin_before) * cfg.fine_factor;
    path.last_index = n + static_cast<long>(margin_after) * cfg.fine_factor;
    path.ego.reserve(path.last_index - path.first_index + 1);
    path.target.reserve(path.last_index - path.first_index + 1);

    // Target: straight line along +x at constant speed, centred so the run
    // spans symmetrically around the origin.
    const double t_total = cfg.coarse_steps * cfg.step_duration;
    const double x0 = -target_speed * t_total / 2.0;

    for (long f = path.first_index; f <= path.last_index; ++f) {
        const double u = 2.0 * M_PI * static_cast<double>(f) / static_cast<double>(n);
        const double seconds = (static_cast<double>(f) / cfg.fine_factor) * cfg.step_duration;
        if (cfg.path == PathKind::lissajous) {
            const double sx = cfg.radius * std::sin(cfg.sin_factor * u);
            const double sy = sx * std::cos(cfg.cos_factor * u);
            const double dx = cfg.radius * cfg.sin_factor * std::cos(cfg.sin_factor * u);
            const double dy = dx * std::cos(cfg.cos_factor * u) -
                              sx * cfg.cos_factor * std::sin(cfg.cos_factor * u);
            const double yaw = std::atan2(dy, dx);
            path.ego.push_back(RigidMotion::from_axis_angle(Eigen::Vector3d::UnitZ(), yaw,
                                                            Eigen::Vector3d(sx, sy, 0.0)));
        } else {
            path.ego.push_back(
                RigidMotion(Eigen::Quaterniond::Identity(),
                            Eigen::Vector3d(cfg.speed * seconds, 0.0, 0.0)));
        }
        path.target.push_back(RigidMotion(Eigen::Quaterniond::Identity(),
                                          Eigen::Vector3d(x0 + target_speed * seconds, 0.0, 0.0)));
    }
    return path;
}

namespace {

Eigen::Vector3d random_unit_axis(std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    while (true) {
        const Eigen::Vector3d v(normal(rng), normal(rng), normal(rng));
        const double norm = v.norm();
        if (norm > 1e-6) {
            return v / norm;
        }
    }
}

}  // namespace

SensorMotions derive_noisy_motions(const FinePath& path, const RigidMotion& mount,
                                   double noise_level, std::mt19937_64& rng) {
    if (path.ego.size() < 2) {
        throw ArgumentError("need at least two poses to derive motions");
    }
    if (noise_level < 0.0) {
        throw ConfigError("noise_level must be >= 0");
    }

    SensorMotions out;
    out.first_index = path.first_index + 1;
    out.motions.reserve(path.ego.size() - 1);

    RigidMotion prev = compose(path.ego.front(), mount);
    double rot_sum = 0.0, trans_sum = 0.0;
    for (std::size_t i = 1; i < path.ego.size(); ++i) {
        const RigidMotion pose = compose(path.ego[i], mount);
        const RigidMotion motion = compose(prev.inverse(), pose);
        rot_sum += rotation_magnitude(motion).value();
        trans_sum += motion.translation().norm();
        out.motions.push_back(motion);
        prev = pose;
    }
    const double count = static_cast<double>(out.motions.size());
    out.sigma_rot = noise_level * (rot_sum / count);
    out.sigma_trans = noise_level * (trans_sum / count);

    if (noise_level == 0.0) {
        return out;
    }
    std::normal_distribution<double> rot_noise(0.0, out.sigma_rot);
    std::normal_distribution<double> trans_noise(0.0, out.sigma_trans);
    for (RigidMotion& motion : out.motions) {
        const Eigen::Vector3d axis = random_unit_axis(rng);
        const double angle = rot_noise(rng);
        const Eigen::Vector3d jitter(trans_noise(rng), trans_noise(rng), trans_noise(rng));
        motion = RigidMotion(motion.rotation() * Eigen::Quaterniond(Eigen::AngleAxisd(angle, axis)),
                             motion.translation() + jitter);
    }
    return out;
}

namespace {

long realized_shift(const ErrorProfile& profile, double coarse_time, int fine_factor) {
    return std::lround(profile.offset_at(coarse_time) * fine_factor);
}

}  // namespace

ShiftedMotions apply_error_profile(const SensorMotions& motions, const ErrorProfile& profile,
                                   const SimConfig& cfg) {
    profile.validate(cfg.fine_factor);
    const long n = static_cast<long>(cfg.coarse_steps) * cfg.fine_factor;
    ShiftedMotions out;
    out.motions.reserve(n);
    out.truth.reserve(cfg.coarse_steps);
    for (long j = 1; j <= n; ++j) {
        const double t = static_cast<double>(j) / cfg.fine_factor;
        out.motions.push_back(motions.at(j - realized_shift(profile, t, cfg.fine_factor)));
    }
    for (int k = 1; k <= cfg.coarse_steps; ++k) {
        out.truth.push_back(static_cast<double>(realized_shift(profile, k, cfg.fine_factor)) /
                            cfg.fine_factor);
    }
    return out;
}

std::vector<RigidMotion> batch_to_coarse(std::span<const RigidMotion> fine, int fine_factor) {
    if (fine_factor < 1) {
        throw ArgumentError("fine_factor must be >= 1");
    }
    if (fine.size() % static_cast<std::size_t>(fine_factor) != 0) {
        throw ArgumentError("fine motion count must be divisible by fine_factor");
    }
    std::vector<RigidMotion> coarse;
    coarse.reserve(fine.size() / fine_factor);
    for (std::size_t g = 0; g < fine.size(); g += fine_factor) {
        RigidMotion acc = fine[g];
        for (std::size_t i = 1; i < static_cast<std::size_t>(fine_factor); ++i) {
            acc = compose(acc, fine[g + i]);
        }
        coarse.push_back(acc);
    }
    return coarse;
}

std::pair<std::vector<StampedMeasurement>, std::vector<StampedMeasurement>> simulate_measurements(
    const FinePath& path, const ErrorProfile& profile, const SimConfig& cfg,
    const MeasurementParams& params, std::mt19937_64& rng1, std::mt19937_64& rng2) {
    std::vector<StampedMeasurement> s1, s2;
    s1.reserve(cfg.coarse_steps);
    s2.reserve(cfg.coarse_steps);
    std::normal_distribution<double> noise(0.0, 1.0);

    const auto measure = [&](int sensor, long fine_index, double stamp, std::mt19937_64& rng) {
        StampedMeasurement m;
        m.sensor_id = sensor;
        m.timestamp = stamp;
        m.noise_std = params.sigma_r;
        m.position = path.target_at(fine_index).translation().head<2>();
        if (params.sigma_r > 0.0) {
            m.position.x() += params.sigma_r * noise(rng);
            m.position.y() += params.sigma_r * noise(rng);
        }
        return m;
    };

    for (int k = 1; k <= cfg.coarse_steps; ++k) {
        const long at = static_cast<long>(k) * cfg.fine_factor;
        s1.push_back(measure(1, at, k, rng1));
        // Sensor 2 acquires at its offset clock but stamps the intended step.
        s2.push_back(measure(2, at - realized_shift(profile, k, cfg.fine_factor), k, rng2));
    }
    return {std::move(s1), std::move(s2)};
}

std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

namespace {

RigidMotion random_mount(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> angle(0.0, M_PI);
    std::uniform_real_distribution<double> offset(-2.0, 2.0);
    const Eigen::Vector3d axis = random_unit_axis(rng);
    return RigidMotion::from_axis_angle(axis, angle(rng),
                                        Eigen::Vector3d(offset(rng), offset(rng), offset(rng)));
}

}  // namespace

SimRun simulate(const SimConfig& cfg, const ErrorProfile& profile, const MeasurementParams& params) {
    cfg.validate();
    profile.validate(cfg.fine_factor);

    // Margins sized so offset reads stay inside the simulated fine range.
    const int margin_before = static_cast<int>(std::ceil(std::max(0.0, profile.max_offset()))) + 1;
    const int margin_after = static_cast<int>(std::ceil(std::max(0.0, -profile.min_offset()))) + 1;

    std::uint64_t mix = cfg.seed;
    std::mt19937_64 rng_mount(splitmix64(mix));
    std::mt19937_64 rng_s1(splitmix64(mix));
    std::mt19937_64 rng_s2(splitmix64(mix));
    std::mt19937_64 rng_m1(splitmix64(mix));
    std::mt19937_64 rng_m2(splitmix64(mix));

    SimRun run;
    run.config = cfg;
    run.mount = random_mount(rng_mount);

    const FinePath path = generate_paths(cfg, margin_before, margin_after, params.target_speed);
    const SensorMotions fine_s1 = derive_noisy_motions(path, RigidMotion(), cfg.noise_level, rng_s1);
    const SensorMotions fine_s2 = derive_noisy_motions(path, run.mount, cfg.noise_level, rng_s2);
    run.sigma_rot = fine_s1.sigma_rot;
    run.sigma_trans = fine_s1.sigma_trans;

    const ShiftedMotions aligned_s1 = apply_error_profile(fine_s1, ErrorProfile::none(), cfg);
    ShiftedMotions aligned_s2 = apply_error_profile(fine_s2, profile, cfg);
    run.motions_s1 = batch_to_coarse(aligned_s1.motions, cfg.fine_factor);
    run.motions_s2 = batch_to_coarse(aligned_s2.motions, cfg.fine_factor);
    run.truth_offset = std::move(aligned_s2.truth);

    auto [m1, m2] = simulate_measurements(path, profile, cfg, params, rng_m1, rng_m2);
    run.meas_s1 = std::move(m1);
    run.meas_s2 = std::move(m2);

    run.target_truth.reserve(cfg.coarse_steps);
    for (int k = 1; k <= cfg.coarse_steps; ++k) {
        run.target_truth.push_back(
            path.target_at(static_cast<long>(k) * cfg.fine_factor).translation().head<2>());
    }
    return run;
}

std::vector<double> SimRun::magnitudes(int sensor) const {
    const std::vector<RigidMotion>& motions = sensor == 1 ? motions_s1 : motions_s2;
    std::vector<double> out;
    out.reserve(motions.size());
    for (const RigidMotion& m : motions) {
        out.push_back(rotation_magnitude(m).value());
    }
    return out;
}

}  // namespace rotsync
