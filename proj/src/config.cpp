#include "rotsync/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "rotsync/errors.hpp"
#include "rotsync/montecarlo.hpp"

namespace rotsync {

ProcessModel TrackerConfig::process_model(double step_duration) const {
    ProcessModel pm;
    const double accel = 2.0 * process_position_std / step_duration;
    pm.accel_std = Eigen::Vector2d(accel, accel);
    pm.noise_form = noise_form;
    return pm;
}

MeasurementModel TrackerConfig::measurement_model() const {
    return position_measurement_model(measurement_std);
}

ErrorProfile ExperimentConfig::default_profile() {
    return ErrorProfile::ramp(50, 150, 1.0);
}

void ExperimentConfig::validate() const {
    sim.validate();
    estimator.validate();
    profile.validate(sim.fine_factor);
    if (strategy.offset_min <= 0.0) throw ConfigError("offset_min must be positive");
    if (strategy.warmup < 1) throw ConfigError("warmup must be >= 1");
    if (!(tracker.measurement_std > 0.0)) throw ConfigError("measurement_std must be positive");
    if (!(tracker.process_position_std > 0.0)) throw ConfigError("process_position_std must be positive");
    if (!(tracker.init_velocity_std > 0.0)) throw ConfigError("init_velocity_std must be positive");
    if (montecarlo.runs < 1) throw ConfigError("runs must be >= 1");
    if (montecarlo.jobs < 0) throw ConfigError("jobs must be >= 0");
}

CorrectionStrategy resolve_strategy(const StrategyConfig& cfg,
                                    std::span<const OffsetEstimate> estimates) {
    CorrectionStrategy strategy;
    strategy.kind = cfg.kind;
    strategy.offset_min = cfg.offset_min;
    if (!cfg.auto_u_max()) {
        strategy.u_max = cfg.u_max;
        return strategy;
    }
    if (estimates.empty()) {
        throw ArgumentError("auto u_max needs warm-up estimates");
    }
    std::vector<double> warmup;
    const std::size_t n = std::min(estimates.size(), static_cast<std::size_t>(cfg.warmup));
    warmup.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        warmup.push_back(estimates[i].uncertainty);
    }
    strategy.u_max = quantile(std::move(warmup), 0.75);
    return strategy;
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

[[noreturn]] void fail(std::string_view source, int line, const std::string& message) {
    std::ostringstream os;
    os << source << ":" << line << ": " << message;
    throw ConfigError(os.str());
}

double parse_double(std::string_view value, std::string_view source, int line) {
    double out = 0.0;
    const auto* end = value.data() + value.size();
    const auto res = std::from_chars(value.data(), end, out);
    if (res.ec != std::errc{} || res.ptr != end) {
        fail(source, line, "expected a number, got '" + std::string(value) + "'");
    }
    return out;
}

long long parse_int(std::string_view value, std::string_view source, int line) {
    long long out = 0;
    const auto* end = value.data() + value.size();
    const auto res = std::from_chars(value.data(), end, out);
    if (res.ec != std::errc{} || res.ptr != end) {
        fail(source, line, "expected an integer, got '" + std::string(value) + "'");
    }
    return out;
}

std::uint64_t parse_u64(std::string_view value, std::string_view source, int line) {
    std::uint64_t out = 0;
    const auto* end = value.data() + value.size();
    const auto res = std::from_chars(value.data(), end, out);
    if (res.ec != std::errc{} || res.ptr != end) {
        fail(source, line, "expected an unsigned integer, got '" + std::string(value) + "'");
    }
    return out;
}

std::vector<std::pair<int, double>> parse_steps(std::string_view value, std::string_view source,
                                                int line) {
    std::vector<std::pair<int, double>> events;
    std::string token;
    std::istringstream stream{std::string(value)};
    while (std::getline(stream, token, ',')) {
        const auto sep = token.find(':');
        if (sep == std::string::npos) {
            fail(source, line, "step events use step:offset, got '" + token + "'");
        }
        const auto step = parse_int(trim(std::string_view(token).substr(0, sep)), source, line);
        const auto offset = parse_double(trim(std::string_view(token).substr(sep + 1)), source, line);
        events.emplace_back(static_cast<int>(step), offset);
    }
    if (events.empty()) {
        fail(source, line, "step profile needs at least one step:offset event");
    }
    return events;
}

}  // namespace

ExperimentConfig parse_config(std::string_view text, std::string_view source_name) {
    ExperimentConfig cfg;
    std::string section;
    int line_no = 0;

    std::istringstream stream{std::string(text)};
    std::string raw;
    while (std::getline(stream, raw)) {
        ++line_no;
        std::string_view line = trim(raw);
        if (line.empty() || line.front() == '#' || line.front() == ';') continue;
        if (line.front() == '[') {
            if (line.back() != ']') fail(source_name, line_no, "unterminated section header");
            section = std::string(trim(line.substr(1, line.size() - 2)));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            fail(source_name, line_no, "expected key = value");
        }
        const std::string key = std::string(trim(line.substr(0, eq)));
        const std::string_view value = trim(line.substr(eq + 1));
        const std::string field = section + "." + key;

        if (field == "simulation.coarse_steps") {
            cfg.sim.coarse_steps = static_cast<int>(parse_int(value, source_name, line_no));
        } else if (field == "simulation.fine_factor") {
            cfg.sim.fine_factor = static_cast<int>(parse_int(value, source_name, line_no));
        } else if (field == "simulation.path") {
            if (value == "lissajous") cfg.sim.path = PathKind::lissajous;
            else if (value == "straight") cfg.sim.path = PathKind::straight;
            else fail(source_name, line_no, "path must be lissajous or straight");
        } else if (field == "simulation.radius") {
            cfg.sim.radius = parse_double(value, source_name, line_no);
        } else if (field == "simulation.sin_factor") {
            cfg.sim.sin_factor = parse_double(value, source_name, line_no);
        } else if (field == "simulation.cos_factor") {
            cfg.sim.cos_factor = parse_double(value, source_name, line_no);
        } else if (field == "simulation.speed") {
            cfg.sim.speed = parse_double(value, source_name, line_no);
        } else if (field == "simulation.noise_level") {
            cfg.sim.noise_level = parse_double(value, source_name, line_no);
        } else if (field == "simulation.seed") {
            cfg.sim.seed = parse_u64(value, source_name, line_no);
        } else if (field == "simulation.step_duration") {
            cfg.sim.step_duration = parse_double(value, source_name, line_no);
        } else if (field == "estimator.window") {
            cfg.estimator.window_size = static_cast<int>(parse_int(value, source_name, line_no));
        } else if (field == "estimator.interpolation") {
            cfg.estimator.interpolation_factor =
                static_cast<int>(parse_int(value, source_name, line_no));
        } else if (field == "estimator.temporal_factor") {
            cfg.estimator.temporal_factor = parse_double(value, source_name, line_no);
        } else if (field == "estimator.uncertainty_epsilon") {
            cfg.estimator.uncertainty_epsilon = parse_double(value, source_name, line_no);
        } else if (field == "estimator.recency_variant") {
            if (value == "recent") cfg.estimator.recency_variant = RecencyVariant::favor_recent;
            else if (value == "reversed") cfg.estimator.recency_variant = RecencyVariant::favor_oldest;
            else fail(source_name, line_no, "recency_variant must be recent or reversed");
        } else if (field == "profile.type") {
            if (value == "none") cfg.profile = ErrorProfile::none();
            else if (value == "ramp") cfg.profile.kind = ErrorProfile::Kind::ramp;
            else if (value == "steps") {
                cfg.profile.kind = ErrorProfile::Kind::steps;
                if (cfg.profile.step_events.empty()) {
                    cfg.profile.step_events = {{55, 0.5}, {90, -0.5}, {125, 1.0}, {160, -1.0}};
                }
            } else fail(source_name, line_no, "profile type must be none, ramp or steps");
        } else if (field == "profile.ramp_start") {
            cfg.profile.ramp_start = static_cast<int>(parse_int(value, source_name, line_no));
        } else if (field == "profile.ramp_end") {
            cfg.profile.ramp_end = static_cast<int>(parse_int(value, source_name, line_no));
        } else if (field == "profile.ramp_offset") {
            cfg.profile.ramp_offset = parse_double(value, source_name, line_no);
        } else if (field == "profile.steps") {
            cfg.profile.step_events = parse_steps(value, source_name, line_no);
        } else if (field == "strategy.kind") {
            if (value == "always_apply") cfg.strategy.kind = CorrectionStrategy::Kind::always_apply;
            else if (value == "uncertainty_gate")
                cfg.strategy.kind = CorrectionStrategy::Kind::uncertainty_gate;
            else if (value == "hybrid") cfg.strategy.kind = CorrectionStrategy::Kind::hybrid;
            else fail(source_name, line_no, "strategy kind must be always_apply, uncertainty_gate or hybrid");
        } else if (field == "strategy.u_max") {
            if (value == "auto") cfg.strategy.u_max = 0.0;
            else cfg.strategy.u_max = parse_double(value, source_name, line_no);
        } else if (field == "strategy.offset_min") {
            cfg.strategy.offset_min = parse_double(value, source_name, line_no);
        } else if (field == "strategy.warmup") {
            cfg.strategy.warmup = static_cast<int>(parse_int(value, source_name, line_no));
        } else if (field == "tracker.measurement_std") {
            cfg.tracker.measurement_std = parse_double(value, source_name, line_no);
        } else if (field == "tracker.process_position_std") {
            cfg.tracker.process_position_std = parse_double(value, source_name, line_no);
        } else if (field == "tracker.target_speed") {
            cfg.tracker.target_speed = parse_double(value, source_name, line_no);
        } else if (field == "tracker.noise_form") {
            if (value == "discrete") cfg.tracker.noise_form = ProcessModel::NoiseForm::discrete;
            else if (value == "continuous")
                cfg.tracker.noise_form = ProcessModel::NoiseForm::continuous;
            else fail(source_name, line_no, "noise_form must be discrete or continuous");
        } else if (field == "tracker.init_velocity_std") {
            cfg.tracker.init_velocity_std = parse_double(value, source_name, line_no);
        } else if (field == "montecarlo.runs") {
            cfg.montecarlo.runs = static_cast<int>(parse_int(value, source_name, line_no));
        } else if (field == "montecarlo.base_seed") {
            cfg.montecarlo.base_seed = parse_u64(value, source_name, line_no);
        } else if (field == "montecarlo.jobs") {
            cfg.montecarlo.jobs = static_cast<int>(parse_int(value, source_name, line_no));
        } else {
            fail(source_name, line_no, "unknown setting '" + field + "'");
        }
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str(), path.string());
}

namespace {

std::string format_value(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

}  // namespace

std::string render_config(const ExperimentConfig& cfg) {
    std::ostringstream os;
    os << "[simulation]\n";
    os << "coarse_steps = " << cfg.sim.coarse_steps << "\n";
    os << "fine_factor = " << cfg.sim.fine_factor << "\n";
    os << "path = " << (cfg.sim.path == PathKind::lissajous ? "lissajous" : "straight") << "\n";
    os << "radius = " << format_value(cfg.sim.radius) << "\n";
    os << "sin_factor = " << format_value(cfg.sim.sin_factor) << "\n";
    os << "cos_factor = " << format_value(cfg.sim.cos_factor) << "\n";
    os << "speed = " << format_value(cfg.sim.speed) << "\n";
    os << "noise_level = " << format_value(cfg.sim.noise_level) << "\n";
    os << "seed = " << cfg.sim.seed << "\n";
    os << "step_duration = " << format_value(cfg.sim.step_duration) << "\n";
    os << "\n[estimator]\n";
    os << "window = " << cfg.estimator.window_size << "\n";
    os << "interpolation = " << cfg.estimator.interpolation_factor << "\n";
    os << "temporal_factor = " << format_value(cfg.estimator.temporal_factor) << "\n";
    os << "uncertainty_epsilon = " << format_value(cfg.estimator.uncertainty_epsilon) << "\n";
    os << "recency_variant = "
       << (cfg.estimator.recency_variant == RecencyVariant::favor_recent ? "recent" : "reversed")
       << "\n";
    os << "\n[profile]\n";
    switch (cfg.profile.kind) {
        case ErrorProfile::Kind::none:
            os << "type = none\n";
            break;
        case ErrorProfile::Kind::ramp:
            os << "type = ramp\n";
            os << "ramp_start = " << cfg.profile.ramp_start << "\n";
            os << "ramp_end = " << cfg.profile.ramp_end << "\n";
            os << "ramp_offset = " << format_value(cfg.profile.ramp_offset) << "\n";
            break;
        case ErrorProfile::Kind::steps: {
            os << "type = steps\n";
            os << "steps = ";
            for (std::size_t i = 0; i < cfg.profile.step_events.size(); ++i) {
                if (i > 0) os << ",";
                os << cfg.profile.step_events[i].first << ":"
                   << format_value(cfg.profile.step_events[i].second);
            }
            os << "\n";
            break;
        }
    }
    os << "\n[strategy]\n";
    switch (cfg.strategy.kind) {
        case CorrectionStrategy::Kind::always_apply: os << "kind = always_apply\n"; break;
        case CorrectionStrategy::Kind::uncertainty_gate: os << "kind = uncertainty_gate\n"; break;
        case CorrectionStrategy::Kind::hybrid: os << "kind = hybrid\n"; break;
    }
    if (cfg.strategy.auto_u_max()) os << "u_max = auto\n";
    else os << "u_max = " << format_value(cfg.strategy.u_max) << "\n";
    os << "offset_min = " << format_value(cfg.strategy.offset_min) << "\n";
    os << "warmup = " << cfg.strategy.warmup << "\n";
    os << "\n[tracker]\n";
    os << "measurement_std = " << format_value(cfg.tracker.measurement_std) << "\n";
    os << "process_position_std = " << format_value(cfg.tracker.process_position_std) << "\n";
    os << "target_speed = " << format_value(cfg.tracker.target_speed) << "\n";
    os << "noise_form = "
       << (cfg.tracker.noise_form == ProcessModel::NoiseForm::discrete ? "discrete" : "continuous")
       << "\n";
    os << "init_velocity_std = " << format_value(cfg.tracker.init_velocity_std) << "\n";
    os << "\n[montecarlo]\n";
    os << "runs = " << cfg.montecarlo.runs << "\n";
    os << "base_seed = " << cfg.montecarlo.base_seed << "\n";
    os << "jobs = " << cfg.montecarlo.jobs << "\n";
    return os.str();
}

}  // namespace rotsync
