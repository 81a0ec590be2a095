// Timing harness comparing the OpenMP similarity kernel against the serial
// reference on the window sizes the experiments use.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <random>
#include <vector>

#include <omp.h>

#include "rotsync/estimator.hpp"
#include "rotsync/reference.hpp"
#include "rotsync/signal.hpp"

using namespace rotsync;

namespace {

MagnitudeWindow random_window(int w, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> value(0.0, 0.5);
    MagnitudeWindow win;
    win.anchor = w;
    win.samples.resize(w);
    for (double& v : win.samples) v = value(rng);
    return win;
}

template <typename F>
double median_call_seconds(F&& fn, int repeats) {
    std::vector<double> times;
    times.reserve(repeats);
    for (int i = 0; i < repeats; ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        fn();
        const auto t1 = std::chrono::steady_clock::now();
        times.push_back(std::chrono::duration<double>(t1 - t0).count());
    }
    std::sort(times.begin(), times.end());
    return times[times.size() / 2];
}

}  // namespace

int main() {
    std::mt19937_64 rng(7);
    const int repeats = 20;

    std::printf("%8s %4s %10s %14s %14s %10s\n", "window", "b", "serial[ms]", "kernel 1t[ms]",
                "kernel nt[ms]", "speedup");
    for (const auto& [w, b] : std::vector<std::pair<int, int>>{{50, 10}, {100, 10}, {100, 40}, {200, 40}}) {
        const MagnitudeWindow win1 = random_window(w, rng);
        const MagnitudeWindow win2 = random_window(w, rng);
        const InterpolatedWindow r1 = interpolate(win1, b);
        const InterpolatedWindow r2 = interpolate(win2, b);

        volatile double sink = 0.0;
        const double serial = median_call_seconds(
            [&] { sink = sink + reference::similarity_scan(r1, r2, 0.9).front().score; }, repeats);

        omp_set_num_threads(1);
        const double kernel1 = median_call_seconds(
            [&] { sink = sink + similarity_scan(r1, r2, 0.9).front().score; }, repeats);

        omp_set_num_threads(omp_get_num_procs());
        const double kerneln = median_call_seconds(
            [&] { sink = sink + similarity_scan(r1, r2, 0.9).front().score; }, repeats);

        std::printf("%8d %4d %10.3f %14.3f %14.3f %9.2fx\n", w, b, serial * 1e3, kernel1 * 1e3,
                    kerneln * 1e3, kernel1 / kerneln);
    }

    // Full estimate at the latency-test operating point.
    omp_set_num_threads(omp_get_num_procs());
    EstimatorConfig cfg;
    cfg.window_size = 100;
    cfg.interpolation_factor = 10;
    const MagnitudeWindow win1 = random_window(cfg.window_size, rng);
    MagnitudeWindow win2 = random_window(cfg.window_size, rng);
    win2.anchor = win1.anchor;
    const double estimate = median_call_seconds(
        [&] { (void)estimate_offset(win1, win2, cfg); }, repeats);
    std::printf("\nestimate_offset w=100 b=10: %.3f ms median\n", estimate * 1e3);
    return 0;
}
