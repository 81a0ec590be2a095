#include "rotsync/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "rotsync/errors.hpp"

namespace rotsync {

std::string format_double(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
    return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ArgumentError("missing input file " + path.string());
    }
    return in;
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream stream(line);
    while (std::getline(stream, field, ',')) {
        fields.push_back(field);
    }
    return fields;
}

double field_double(const std::string& field, const std::filesystem::path& path) {
    double out = 0.0;
    const auto res = std::from_chars(field.data(), field.data() + field.size(), out);
    if (res.ec != std::errc{} || res.ptr != field.data() + field.size()) {
        throw IoError("malformed number '" + field + "' in " + path.string());
    }
    return out;
}

/// Read a CSV with a header line; each data line must have `columns` fields.
std::vector<std::vector<std::string>> read_rows(const std::filesystem::path& path,
                                                std::size_t columns) {
    std::ifstream in = open_in(path);
    std::string line;
    if (!std::getline(in, line)) {
        throw IoError("empty file " + path.string());
    }
    std::vector<std::vector<std::string>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto fields = split_fields(line);
        if (fields.size() != columns) {
            throw IoError("expected " + std::to_string(columns) + " fields per row in " +
                          path.string());
        }
        rows.push_back(std::move(fields));
    }
    return rows;
}

void write_motions(const std::filesystem::path& path, std::span<const RigidMotion> motions) {
    std::ofstream out = open_out(path);
    out << "k,qw,qx,qy,qz,tx,ty,tz\n";
    for (std::size_t i = 0; i < motions.size(); ++i) {
        const auto& q = motions[i].rotation();
        const auto& t = motions[i].translation();
        out << (i + 1) << "," << format_double(q.w()) << "," << format_double(q.x()) << ","
            << format_double(q.y()) << "," << format_double(q.z()) << "," << format_double(t.x())
            << "," << format_double(t.y()) << "," << format_double(t.z()) << "\n";
    }
}

std::vector<RigidMotion> read_motions(const std::filesystem::path& path) {
    std::vector<RigidMotion> motions;
    for (const auto& row : read_rows(path, 8)) {
        const Eigen::Quaterniond q(field_double(row[1], path), field_double(row[2], path),
                                   field_double(row[3], path), field_double(row[4], path));
        const Eigen::Vector3d t(field_double(row[5], path), field_double(row[6], path),
                                field_double(row[7], path));
        motions.emplace_back(q, t);
    }
    return motions;
}

void write_measurements(const std::filesystem::path& path,
                        std::span<const StampedMeasurement> measurements) {
    std::ofstream out = open_out(path);
    out << "stamp,x,y\n";
    for (const StampedMeasurement& m : measurements) {
        out << format_double(m.timestamp) << "," << format_double(m.position.x()) << ","
            << format_double(m.position.y()) << "\n";
    }
}

std::vector<StampedMeasurement> read_measurements(const std::filesystem::path& path, int sensor_id) {
    std::vector<StampedMeasurement> measurements;
    for (const auto& row : read_rows(path, 3)) {
        StampedMeasurement m;
        m.sensor_id = sensor_id;
        m.timestamp = field_double(row[0], path);
        m.position = Eigen::Vector2d(field_double(row[1], path), field_double(row[2], path));
        measurements.push_back(m);
    }
    return measurements;
}

}  // namespace

void write_simrun(const std::filesystem::path& dir, const SimRun& run) {
    write_motions(dir / "motions_s1.csv", run.motions_s1);
    write_motions(dir / "motions_s2.csv", run.motions_s2);

    std::ofstream truth = open_out(dir / "truth_offset.csv");
    truth << "k,offset\n";
    for (std::size_t i = 0; i < run.truth_offset.size(); ++i) {
        truth << (i + 1) << "," << format_double(run.truth_offset[i]) << "\n";
    }

    write_measurements(dir / "measurements_s1.csv", run.meas_s1);
    write_measurements(dir / "measurements_s2.csv", run.meas_s2);

    std::ofstream target = open_out(dir / "target_truth.csv");
    target << "k,x,y\n";
    for (std::size_t i = 0; i < run.target_truth.size(); ++i) {
        target << (i + 1) << "," << format_double(run.target_truth[i].x()) << ","
               << format_double(run.target_truth[i].y()) << "\n";
    }
}

SimRunData read_simrun(const std::filesystem::path& dir) {
    SimRunData data;
    data.motions_s1 = read_motions(dir / "motions_s1.csv");
    data.motions_s2 = read_motions(dir / "motions_s2.csv");
    for (const auto& row : read_rows(dir / "truth_offset.csv", 2)) {
        data.truth_offset.push_back(field_double(row[1], dir / "truth_offset.csv"));
    }
    data.meas_s1 = read_measurements(dir / "measurements_s1.csv", 1);
    data.meas_s2 = read_measurements(dir / "measurements_s2.csv", 2);
    for (const auto& row : read_rows(dir / "target_truth.csv", 3)) {
        data.target_truth.emplace_back(field_double(row[1], dir / "target_truth.csv"),
                                       field_double(row[2], dir / "target_truth.csv"));
    }
    if (data.motions_s1.size() != data.motions_s2.size() ||
        data.motions_s1.size() != data.truth_offset.size()) {
        throw IoError("inconsistent row counts in " + dir.string());
    }
    return data;
}

std::vector<double> SimRunData::magnitudes(int sensor) const {
    const std::vector<RigidMotion>& motions = sensor == 1 ? motions_s1 : motions_s2;
    std::vector<double> out;
    out.reserve(motions.size());
    for (const RigidMotion& m : motions) {
        out.push_back(rotation_magnitude(m).value());
    }
    return out;
}

void write_estimates(const std::filesystem::path& path, std::span<const EstimateRow> rows) {
    std::ofstream out = open_out(path);
    out << "k,offset,uncertainty,truth_offset,abs_error\n";
    for (const EstimateRow& r : rows) {
        out << r.step << "," << format_double(r.offset) << "," << format_double(r.uncertainty)
            << "," << format_double(r.truth) << "," << format_double(r.abs_error) << "\n";
    }
}

std::vector<EstimateRow> read_estimates(const std::filesystem::path& path) {
    std::vector<EstimateRow> rows;
    for (const auto& fields : read_rows(path, 5)) {
        EstimateRow r;
        r.step = static_cast<std::int64_t>(field_double(fields[0], path));
        r.offset = field_double(fields[1], path);
        r.uncertainty = field_double(fields[2], path);
        r.truth = field_double(fields[3], path);
        r.abs_error = field_double(fields[4], path);
        rows.push_back(r);
    }
    return rows;
}

void write_verdicts(const std::filesystem::path& path, std::span<const SyncVerdict> verdicts) {
    std::ofstream out = open_out(path);
    out << "k,state,offset,uncertainty\n";
    for (const SyncVerdict& v : verdicts) {
        out << v.timestamp << "," << to_string(v.state) << "," << format_double(v.offset) << ","
            << format_double(v.uncertainty) << "\n";
    }
}

void write_aggregate(const std::filesystem::path& path, std::span<const AggregateRow> rows) {
    std::ofstream out = open_out(path);
    out << "k,truth_offset,estimate_median,estimate_q25,estimate_q75,abs_error_median,"
           "uncertainty_median\n";
    for (const AggregateRow& r : rows) {
        out << r.step << "," << format_double(r.truth) << "," << format_double(r.estimate_median)
            << "," << format_double(r.estimate_q25) << "," << format_double(r.estimate_q75) << ","
            << format_double(r.abs_error_median) << "," << format_double(r.uncertainty_median)
            << "\n";
    }
}

std::vector<AggregateRow> read_aggregate(const std::filesystem::path& path) {
    std::vector<AggregateRow> rows;
    for (const auto& fields : read_rows(path, 7)) {
        AggregateRow r;
        r.step = static_cast<int>(field_double(fields[0], path));
        r.truth = field_double(fields[1], path);
        r.estimate_median = field_double(fields[2], path);
        r.estimate_q25 = field_double(fields[3], path);
        r.estimate_q75 = field_double(fields[4], path);
        r.abs_error_median = field_double(fields[5], path);
        r.uncertainty_median = field_double(fields[6], path);
        rows.push_back(r);
    }
    return rows;
}

void write_trajectory(const std::filesystem::path& path, std::span<const TrackPoint> trajectory) {
    std::ofstream out = open_out(path);
    out << "index,time,x,vx,y,vy,speed,cov_trace\n";
    for (std::size_t i = 0; i < trajectory.size(); ++i) {
        const TrackPoint& p = trajectory[i];
        out << i << "," << format_double(p.time) << "," << format_double(p.state.mean(0)) << ","
            << format_double(p.state.mean(1)) << "," << format_double(p.state.mean(2)) << ","
            << format_double(p.state.mean(3)) << "," << format_double(p.speed()) << ","
            << format_double(p.state.cov.trace()) << "\n";
    }
}

}  // namespace rotsync
