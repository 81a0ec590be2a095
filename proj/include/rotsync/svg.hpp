#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace rotsync {

/// Minimal self-contained SVG line charts; the CSV files remain the source
/// of truth, these are for quick visual inspection.

struct ChartSeries {
    std::string label;
    std::string color;  // SVG color
    std::vector<std::pair<double, double>> points;
};

struct ChartBand {
    std::string color;
    std::vector<std::tuple<double, double, double>> points;  // x, y_low, y_high
};

struct LineChart {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<ChartSeries> series;
    std::optional<ChartBand> band;
};

void write_line_chart(const std::filesystem::path& path, const LineChart& chart);

}  // namespace rotsync
