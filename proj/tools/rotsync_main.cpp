#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rotsync/config.hpp"
#include "rotsync/errors.hpp"
#include "rotsync/io.hpp"
#include "rotsync/montecarlo.hpp"
#include "rotsync/svg.hpp"

namespace fs = std::filesystem;
using namespace rotsync;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;
constexpr int kExitNumerical = 4;

/// Removes everything registered unless the command commits, so failed
/// commands leave no partial outputs behind.
class OutputGuard {
public:
    explicit OutputGuard(fs::path dir) : dir_(std::move(dir)) {
        std::error_code ec;
        fs::create_directories(dir_, ec);
        if (ec) {
            throw IoError("cannot create output directory " + dir_.string());
        }
    }

    ~OutputGuard() {
        if (committed_) return;
        for (const fs::path& p : written_) {
            std::error_code ec;
            fs::remove(p, ec);
        }
    }

    fs::path file(const std::string& name) {
        written_.push_back(dir_ / name);
        return written_.back();
    }

    const fs::path& dir() const { return dir_; }
    void commit() { committed_ = true; }

private:
    fs::path dir_;
    std::vector<fs::path> written_;
    bool committed_ = false;
};

struct CommonArgs {
    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<int> jobs;
};

ExperimentConfig resolve_config(const CommonArgs& args) {
    ExperimentConfig cfg =
        args.config_path.empty() ? ExperimentConfig{} : load_config(args.config_path);
    if (args.seed) {
        cfg.sim.seed = *args.seed;
        cfg.montecarlo.base_seed = *args.seed;
    }
    if (args.jobs) {
        cfg.montecarlo.jobs = *args.jobs;
    }
    cfg.validate();
    return cfg;
}

struct EstimationOutput {
    std::vector<EstimateRow> rows;
    std::vector<OffsetEstimate> estimates;
};

EstimationOutput run_estimation(const ExperimentConfig& cfg, const SimRunData& data) {
    const std::vector<double> r1 = data.magnitudes(1);
    const std::vector<double> r2 = data.magnitudes(2);

    EstimationOutput out;
    OnlineEstimator estimator(cfg.estimator);
    for (std::size_t i = 0; i < r1.size(); ++i) {
        const std::int64_t k = static_cast<std::int64_t>(i) + 1;
        const auto est = estimator.push(k, RotationMagnitude(r1[i]), RotationMagnitude(r2[i]));
        if (!est) continue;
        EstimateRow row;
        row.step = k;
        row.offset = est->offset;
        row.uncertainty = est->uncertainty;
        row.truth = data.truth_offset[i];
        row.abs_error = std::abs(est->offset - row.truth);
        out.rows.push_back(row);
        out.estimates.push_back(*est);
    }
    return out;
}

int cmd_simulate(const CommonArgs& args) {
    const ExperimentConfig cfg = resolve_config(args);
    OutputGuard guard(args.out_dir);

    const SimRun run = simulate(cfg.sim, cfg.profile,
                                MeasurementParams{cfg.tracker.measurement_std, cfg.tracker.target_speed});
    // Register before writing so failures clean up.
    for (const char* name : {"motions_s1.csv", "motions_s2.csv", "truth_offset.csv",
                             "measurements_s1.csv", "measurements_s2.csv", "target_truth.csv"}) {
        guard.file(name);
    }
    write_simrun(guard.dir(), run);

    std::ofstream echo(guard.file("config_resolved.ini"));
    if (!echo) {
        throw IoError("cannot write config echo");
    }
    echo << render_config(cfg);
    guard.commit();
    return kExitOk;
}

int cmd_estimate(const CommonArgs& args) {
    const ExperimentConfig cfg = resolve_config(args);
    OutputGuard guard(args.out_dir);

    const SimRunData data = read_simrun(guard.dir());
    const EstimationOutput est = run_estimation(cfg, data);
    write_estimates(guard.file("estimates.csv"), est.rows);

    const CorrectionStrategy strategy = resolve_strategy(cfg.strategy, est.estimates);
    std::vector<SyncVerdict> verdicts;
    verdicts.reserve(est.estimates.size());
    for (const OffsetEstimate& e : est.estimates) {
        verdicts.push_back(assess(e, strategy.u_max, strategy.offset_min));
    }
    write_verdicts(guard.file("verdicts.csv"), verdicts);
    guard.commit();
    return kExitOk;
}

int cmd_track(const CommonArgs& args) {
    const ExperimentConfig cfg = resolve_config(args);
    OutputGuard guard(args.out_dir);

    const SimRunData data = read_simrun(guard.dir());
    const std::vector<EstimateRow> rows = read_estimates(guard.dir() / "estimates.csv");

    std::vector<OffsetEstimate> estimates;
    estimates.reserve(rows.size());
    for (const EstimateRow& r : rows) {
        OffsetEstimate e;
        e.timestamp = r.step;
        e.offset = r.offset;
        e.uncertainty = r.uncertainty;
        estimates.push_back(e);
    }

    std::vector<StampedMeasurement> merged = data.meas_s1;
    merged.insert(merged.end(), data.meas_s2.begin(), data.meas_s2.end());
    for (StampedMeasurement& m : merged) {
        m.noise_std = cfg.tracker.measurement_std;
    }

    const ProcessModel pm = cfg.tracker.process_model(cfg.sim.step_duration);
    const MeasurementModel mm = cfg.tracker.measurement_model();

    const auto uncorrected = track_measurements(merged, pm, mm, cfg.tracker.init_velocity_std,
                                                cfg.sim.step_duration);
    write_trajectory(guard.file("tracker_uncorrected.csv"), uncorrected);

    CorrectionSession session(resolve_strategy(cfg.strategy, estimates));
    for (const OffsetEstimate& e : estimates) {
        session.push_estimate(e);
    }
    std::vector<StampedMeasurement> corrected;
    corrected.reserve(merged.size());
    for (const StampedMeasurement& m : merged) {
        const CorrectionOutcome outcome = session.correct(m);
        if (outcome.action != CorrectionAction::discarded) {
            corrected.push_back(outcome.measurement);
        }
    }
    // Correction can reorder stamps; track_measurements re-sorts.
    const auto tracked = track_measurements(corrected, pm, mm, cfg.tracker.init_velocity_std,
                                            cfg.sim.step_duration);
    write_trajectory(guard.file("tracker_corrected.csv"), tracked);
    guard.commit();
    return kExitOk;
}

int cmd_montecarlo(const CommonArgs& args) {
    const ExperimentConfig cfg = resolve_config(args);
    OutputGuard guard(args.out_dir);

    const McResult result = run_batch(cfg);
    write_aggregate(guard.file("aggregate.csv"), result.rows);

    LineChart offsets;
    offsets.title = "Offset estimate vs. ground truth";
    offsets.x_label = "coarse step";
    offsets.y_label = "offset [steps]";
    ChartBand band{"#9aa7b8", {}};
    ChartSeries truth{"truth", "#c0392b", {}};
    ChartSeries median{"estimate median", "#1e8449", {}};
    for (const AggregateRow& r : result.rows) {
        band.points.emplace_back(r.step, r.estimate_q25, r.estimate_q75);
        truth.points.emplace_back(r.step, r.truth);
        median.points.emplace_back(r.step, r.estimate_median);
    }
    offsets.band = band;
    offsets.series = {truth, median};
    write_line_chart(guard.file("offset_estimate.svg"), offsets);

    LineChart coupling;
    coupling.title = "Estimation error and uncertainty";
    coupling.x_label = "coarse step";
    coupling.y_label = "median value";
    ChartSeries err{"abs error median", "#c0392b", {}};
    ChartSeries unc{"uncertainty median", "#2471a3", {}};
    for (const AggregateRow& r : result.rows) {
        err.points.emplace_back(r.step, r.abs_error_median);
        unc.points.emplace_back(r.step, r.uncertainty_median);
    }
    coupling.series = {err, unc};
    write_line_chart(guard.file("error_uncertainty.svg"), coupling);

    std::ofstream runtime(guard.file("runtime.txt"));
    if (!runtime) {
        throw IoError("cannot write runtime.txt");
    }
    runtime << "median_estimate_seconds = " << format_double(result.median_estimate_seconds)
            << "\n";
    guard.commit();
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Rotation-based sensor time-offset estimation toolkit"};
    app.require_subcommand(1);

    CommonArgs args;
    const auto add_common = [&](CLI::App* cmd, bool with_jobs) {
        cmd->add_option("--config", args.config_path, "INI config file (defaults when omitted)");
        cmd->add_option("--out", args.out_dir, "run directory")->required();
        cmd->add_option("--seed", args.seed, "seed override");
        if (with_jobs) {
            cmd->add_option("--jobs", args.jobs, "worker pool size (0 = all cores)");
        }
    };

    CLI::App* simulate = app.add_subcommand("simulate", "generate a simulated run directory");
    add_common(simulate, false);
    CLI::App* estimate = app.add_subcommand("estimate", "estimate offsets for a simulated run");
    add_common(estimate, false);
    CLI::App* track = app.add_subcommand("track", "track the target with raw and corrected stamps");
    add_common(track, false);
    CLI::App* montecarlo = app.add_subcommand("montecarlo", "aggregate many seeded runs");
    add_common(montecarlo, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (simulate->parsed()) return cmd_simulate(args);
        if (estimate->parsed()) return cmd_estimate(args);
        if (track->parsed()) return cmd_track(args);
        if (montecarlo->parsed()) return cmd_montecarlo(args);
        std::cerr << "no subcommand\n";
        return kExitConfig;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const ArgumentError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const StreamError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const SimulationError& e) {
        std::cerr << "simulation error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return kExitIo;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
