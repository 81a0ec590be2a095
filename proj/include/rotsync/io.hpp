#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "rotsync/assessment.hpp"
#include "rotsync/montecarlo.hpp"
#include "rotsync/simulation.hpp"
#include "rotsync/tracking.hpp"

namespace rotsync {

/// Shortest round-trip decimal rendering of a double.
std::string format_double(double value);

/// One estimator output row as written to estimates.csv.
struct EstimateRow {
    std::int64_t step = 0;
    double offset = 0.0;
    double uncertainty = 0.0;
    double truth = 0.0;
    double abs_error = 0.0;
};

// Simulation run directory layout. All files are UTF-8 CSV with a header
// row, '.' decimal separator, one record per line.
void write_simrun(const std::filesystem::path& dir, const SimRun& run);

struct SimRunData {
    std::vector<RigidMotion> motions_s1, motions_s2;
    std::vector<double> truth_offset;
    std::vector<StampedMeasurement> meas_s1, meas_s2;
    std::vector<Eigen::Vector2d> target_truth;

    std::vector<double> magnitudes(int sensor) const;
};

SimRunData read_simrun(const std::filesystem::path& dir);

void write_estimates(const std::filesystem::path& path, std::span<const EstimateRow> rows);
std::vector<EstimateRow> read_estimates(const std::filesystem::path& path);

void write_verdicts(const std::filesystem::path& path, std::span<const SyncVerdict> verdicts);

void write_aggregate(const std::filesystem::path& path, std::span<const AggregateRow> rows);
std::vector<AggregateRow> read_aggregate(const std::filesystem::path& path);

void write_trajectory(const std::filesystem::path& path, std::span<const TrackPoint> trajectory);

}  // namespace rotsync
