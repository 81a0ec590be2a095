#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "rotsync/config.hpp"
#include "rotsync/errors.hpp"
#include "rotsync/io.hpp"
#include "rotsync/svg.hpp"

using namespace rotsync;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("rotsync_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("parse_config: empty text yields the defaults") {
    const ExperimentConfig cfg = parse_config("", "inline");
    CHECK(cfg.sim.coarse_steps == 200);
    CHECK(cfg.sim.fine_factor == 100);
    CHECK(cfg.estimator.window_size == 50);
    CHECK(cfg.estimator.interpolation_factor == 10);
    CHECK(cfg.profile.kind == ErrorProfile::Kind::ramp);
    CHECK(cfg.montecarlo.runs == 1000);
}

TEST_CASE("parse_config: sections, comments, overrides and the steps list") {
    const char* text = R"(# comment
[simulation]
coarse_steps = 120
noise_level = 2.0
; another comment
[estimator]
window = 20
recency_variant = reversed

[profile]
type = steps
steps = 10:0.5,40:-1.0

[strategy]
u_max = 3.5

[montecarlo]
jobs = 4
)";
    const ExperimentConfig cfg = parse_config(text, "inline");
    CHECK(cfg.sim.coarse_steps == 120);
    CHECK(cfg.sim.noise_level == 2.0);
    CHECK(cfg.estimator.window_size == 20);
    CHECK(cfg.estimator.recency_variant == RecencyVariant::favor_oldest);
    REQUIRE(cfg.profile.step_events.size() == 2);
    CHECK(cfg.profile.step_events[1].first == 40);
    CHECK(cfg.profile.step_events[1].second == -1.0);
    CHECK_FALSE(cfg.strategy.auto_u_max());
    CHECK(cfg.strategy.u_max == 3.5);
    CHECK(cfg.montecarlo.jobs == 4);
}

TEST_CASE("parse_config: diagnostics carry the line and field") {
    try {
        parse_config("[estimator]\nwindow = banana\n", "bad.ini");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        const std::string message = e.what();
        CHECK(message.find("bad.ini:2") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_config("[nope]\nx = 1\n", "inline"), ConfigError);
    CHECK_THROWS_AS(parse_config("[estimator]\nwindow 20\n", "inline"), ConfigError);
    // Semantic validation also rejects.
    CHECK_THROWS_AS(parse_config("[estimator]\nwindow = 2\n", "inline"), ConfigError);
}

TEST_CASE("render_config: echo parses back to the same settings") {
    ExperimentConfig cfg;
    cfg.sim.seed = 99;
    cfg.sim.noise_level = 2.0;
    cfg.estimator.window_size = 24;
    cfg.profile = ErrorProfile::steps({{5, 0.25}, {60, -0.75}});
    cfg.strategy.u_max = 1.25;
    cfg.montecarlo.runs = 7;

    const ExperimentConfig round = parse_config(render_config(cfg), "echo");
    CHECK(round.sim.seed == 99);
    CHECK(round.sim.noise_level == 2.0);
    CHECK(round.estimator.window_size == 24);
    REQUIRE(round.profile.step_events.size() == 2);
    CHECK(round.profile.step_events[0].second == 0.25);
    CHECK(round.strategy.u_max == 1.25);
    CHECK(round.montecarlo.runs == 7);
}

TEST_CASE("resolve_strategy: auto u_max is the warm-up 75th percentile") {
    StrategyConfig cfg;
    cfg.warmup = 4;
    std::vector<OffsetEstimate> estimates;
    for (double u : {1.0, 2.0, 3.0, 4.0, 100.0}) {  // the 100 lies past the warm-up
        OffsetEstimate e;
        e.timestamp = static_cast<std::int64_t>(estimates.size()) + 1;
        e.uncertainty = u;
        estimates.push_back(e);
    }
    const CorrectionStrategy strategy = resolve_strategy(cfg, estimates);
    CHECK(strategy.u_max == doctest::Approx(3.25));  // quantile of {1,2,3,4}

    cfg.u_max = 9.0;
    CHECK(resolve_strategy(cfg, estimates).u_max == 9.0);
    cfg.u_max = 0.0;
    CHECK_THROWS_AS(resolve_strategy(cfg, {}), ArgumentError);
}

TEST_CASE("simrun CSV round trip preserves every value") {
    SimConfig sim;
    sim.coarse_steps = 12;
    sim.fine_factor = 5;
    sim.noise_level = 0.7;
    sim.seed = 3;
    const SimRun run = simulate(sim, ErrorProfile::steps({{4, 0.4}}), MeasurementParams{});
    const fs::path dir = temp_dir("simrun");
    write_simrun(dir, run);

    const SimRunData data = read_simrun(dir);
    REQUIRE(data.motions_s1.size() == run.motions_s1.size());
    for (std::size_t i = 0; i < run.motions_s1.size(); ++i) {
        // Reading renormalizes the quaternion, which can move the last ulp.
        CHECK(data.motions_s1[i].rotation().coeffs().isApprox(
            run.motions_s1[i].rotation().coeffs(), 1e-15));
        CHECK(data.motions_s2[i].translation() == run.motions_s2[i].translation());
    }
    CHECK(data.truth_offset == run.truth_offset);
    for (std::size_t i = 0; i < run.meas_s1.size(); ++i) {
        CHECK(data.meas_s1[i].position == run.meas_s1[i].position);
        CHECK(data.meas_s2[i].timestamp == run.meas_s2[i].timestamp);
        CHECK(data.meas_s1[i].sensor_id == 1);
        CHECK(data.meas_s2[i].sensor_id == 2);
    }
    CHECK(read_simrun(dir).magnitudes(2) == run.magnitudes(2));

    CHECK_THROWS_AS(read_simrun(temp_dir("missing")), ArgumentError);
}

TEST_CASE("estimate and aggregate CSV round trips") {
    const fs::path dir = temp_dir("csv");

    std::vector<EstimateRow> rows;
    for (int k = 0; k < 5; ++k) {
        rows.push_back(EstimateRow{k + 10, 0.1 * k, 1.0 / (k + 1), 0.05 * k, 0.05 * k});
    }
    write_estimates(dir / "estimates.csv", rows);
    const auto back = read_estimates(dir / "estimates.csv");
    REQUIRE(back.size() == rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(back[i].step == rows[i].step);
        CHECK(back[i].offset == rows[i].offset);
        CHECK(back[i].uncertainty == rows[i].uncertainty);
    }

    std::vector<AggregateRow> agg;
    for (int k = 0; k < 4; ++k) {
        AggregateRow r;
        r.step = k;
        r.truth = 0.25 * k;
        r.estimate_q25 = 0.2 * k;
        r.estimate_median = 0.25 * k;
        r.estimate_q75 = 0.3 * k;
        r.abs_error_median = 0.01;
        r.uncertainty_median = 2.0;
        agg.push_back(r);
    }
    write_aggregate(dir / "aggregate.csv", agg);
    const auto agg_back = read_aggregate(dir / "aggregate.csv");
    REQUIRE(agg_back.size() == agg.size());
    CHECK(agg_back[3].estimate_q75 == doctest::Approx(0.9));
}

TEST_CASE("verdict CSV rows carry k, state, offset, uncertainty") {
    const fs::path dir = temp_dir("verdicts");
    std::vector<SyncVerdict> verdicts{
        {12, SyncState::in_sync, 0.0, 0.5},
        {13, SyncState::offset_detected, 1.5, 0.4},
        {14, SyncState::unassessable, 0.2, 9.0},
    };
    write_verdicts(dir / "verdicts.csv", verdicts);
    std::ifstream in(dir / "verdicts.csv");
    std::string line;
    std::getline(in, line);
    CHECK(line == "k,state,offset,uncertainty");
    std::getline(in, line);
    CHECK(line == "12,in_sync,0,0.5");
    std::getline(in, line);
    CHECK(line.find("offset_detected") != std::string::npos);
}

TEST_CASE("format_double: shortest round-trip text") {
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(-2.5e-9) == "-2.5e-09");
}

TEST_CASE("write_line_chart: produces a self-contained SVG") {
    const fs::path dir = temp_dir("svg");
    LineChart chart;
    chart.title = "demo";
    chart.x_label = "x";
    chart.y_label = "y";
    ChartSeries s{"series", "#ff0000", {{0, 0}, {1, 1}, {2, 0.5}}};
    chart.series.push_back(s);
    chart.band = ChartBand{"#cccccc", {{0, -0.1, 0.1}, {1, 0.8, 1.2}, {2, 0.3, 0.7}}};
    write_line_chart(dir / "chart.svg", chart);

    std::ifstream in(dir / "chart.svg");
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string svg = buffer.str();
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("polyline") != std::string::npos);
    CHECK(svg.find("polygon") != std::string::npos);
    CHECK(svg.find("</svg>") != std::string::npos);
}
