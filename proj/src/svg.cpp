#include "rotsync/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "rotsync/errors.hpp"

namespace rotsync {

namespace {

constexpr double kWidth = 900.0;
constexpr double kHeight = 480.0;
constexpr double kMarginLeft = 70.0;
constexpr double kMarginRight = 20.0;
constexpr double kMarginTop = 40.0;
constexpr double kMarginBottom = 55.0;

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();

    void include(double v) {
        if (std::isfinite(v)) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    void pad() {
        if (!(lo < hi)) {
            lo -= 1.0;
            hi += 1.0;
        }
        const double span = hi - lo;
        lo -= 0.05 * span;
        hi += 0.05 * span;
    }
};

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

}  // namespace

void write_line_chart(const std::filesystem::path& path, const LineChart& chart) {
    Range xr, yr;
    for (const ChartSeries& s : chart.series) {
        for (const auto& [x, y] : s.points) {
            xr.include(x);
            yr.include(y);
        }
    }
    if (chart.band) {
        for (const auto& [x, lo, hi] : chart.band->points) {
            xr.include(x);
            yr.include(lo);
            yr.include(hi);
        }
    }
    if (!std::isfinite(xr.lo) || !std::isfinite(yr.lo)) {
        throw ArgumentError("chart has no finite data points");
    }
    xr.pad();
    yr.pad();

    const double plot_w = kWidth - kMarginLeft - kMarginRight;
    const double plot_h = kHeight - kMarginTop - kMarginBottom;
    const auto px = [&](double x) { return kMarginLeft + (x - xr.lo) / (xr.hi - xr.lo) * plot_w; };
    const auto py = [&](double y) { return kMarginTop + (yr.hi - y) / (yr.hi - yr.lo) * plot_h; };

    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"16\" "
        << "font-family=\"sans-serif\">" << chart.title << "</text>\n";

    // Grid and tick labels.
    for (int i = 0; i <= 5; ++i) {
        const double fx = xr.lo + (xr.hi - xr.lo) * i / 5.0;
        const double fy = yr.lo + (yr.hi - yr.lo) * i / 5.0;
        out << "<line x1=\"" << px(fx) << "\" y1=\"" << kMarginTop << "\" x2=\"" << px(fx)
            << "\" y2=\"" << kMarginTop + plot_h << "\" stroke=\"#dddddd\"/>\n";
        out << "<line x1=\"" << kMarginLeft << "\" y1=\"" << py(fy) << "\" x2=\""
            << kMarginLeft + plot_w << "\" y2=\"" << py(fy) << "\" stroke=\"#dddddd\"/>\n";
        out << "<text x=\"" << px(fx) << "\" y=\"" << kHeight - kMarginBottom + 18
            << "\" text-anchor=\"middle\" font-size=\"11\" font-family=\"sans-serif\">" << fmt(fx)
            << "</text>\n";
        out << "<text x=\"" << kMarginLeft - 8 << "\" y=\"" << py(fy) + 4
            << "\" text-anchor=\"end\" font-size=\"11\" font-family=\"sans-serif\">" << fmt(fy)
            << "</text>\n";
    }
    out << "<rect x=\"" << kMarginLeft << "\" y=\"" << kMarginTop << "\" width=\"" << plot_w
        << "\" height=\"" << plot_h << "\" fill=\"none\" stroke=\"black\"/>\n";

    if (chart.band && chart.band->points.size() > 1) {
        out << "<polygon fill=\"" << chart.band->color << "\" fill-opacity=\"0.35\" stroke=\"none\" points=\"";
        for (const auto& [x, lo, hi] : chart.band->points) {
            out << px(x) << "," << py(hi) << " ";
            (void)lo;
        }
        for (auto it = chart.band->points.rbegin(); it != chart.band->points.rend(); ++it) {
            out << px(std::get<0>(*it)) << "," << py(std::get<1>(*it)) << " ";
        }
        out << "\"/>\n";
    }

    for (const ChartSeries& s : chart.series) {
        if (s.points.empty()) continue;
        out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"";
        for (const auto& [x, y] : s.points) {
            out << px(x) << "," << py(y) << " ";
        }
        out << "\"/>\n";
    }

    // Legend.
    double ly = kMarginTop + 14;
    for (const ChartSeries& s : chart.series) {
        const double lx = kMarginLeft + plot_w - 170;
        out << "<line x1=\"" << lx << "\" y1=\"" << ly - 4 << "\" x2=\"" << lx + 24 << "\" y2=\""
            << ly - 4 << "\" stroke=\"" << s.color << "\" stroke-width=\"2\"/>\n";
        out << "<text x=\"" << lx + 30 << "\" y=\"" << ly
            << "\" font-size=\"12\" font-family=\"sans-serif\">" << s.label << "</text>\n";
        ly += 16;
    }

    out << "<text x=\"" << kMarginLeft + plot_w / 2 << "\" y=\"" << kHeight - 12
        << "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\">" << chart.x_label
        << "</text>\n";
    out << "<text x=\"16\" y=\"" << kMarginTop + plot_h / 2
        << "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\" transform=\"rotate(-90 16 "
        << kMarginTop + plot_h / 2 << ")\">" << chart.y_label << "</text>\n";
    out << "</svg>\n";
}

}  // namespace rotsync
