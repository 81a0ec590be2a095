#include "rotsync/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rotsync/errors.hpp"

namespace rotsync {

void EstimatorConfig::validate() const {
    if (window_size < 4) {
        throw ConfigError("window_size must be >= 4");
    }
    if (interpolation_factor < 1) {
        throw ConfigError("interpolation_factor must be >= 1");
    }
    if (interp_size() % 2 != 0) {
        throw ConfigError("window_size * interpolation_factor must be even");
    }
    if (!(temporal_factor > 0.0) || temporal_factor > 1.0) {
        throw ConfigError("temporal_factor must lie in (0, 1]");
    }
    if (!(uncertainty_epsilon > 0.0)) {
        throw ConfigError("uncertainty_epsilon must be positive");
    }
}

int argmin_shift(std::span<const ShiftScore> scores) {
    if (scores.empty()) {
        throw ArgumentError("empty score curve");
    }
    const int n = static_cast<int>(scores.size());
    const int half = n / 2;
    int best = 0;
    double best_score = scores[half].score;  // shift 0
    for (int a = 1; a <= half; ++a) {
        for (const int s : {-a, a}) {
            if (s > half - 1) continue;
            const double sc = scores[s + half].score;
            if (sc < best_score) {
                best = s;
                best_score = sc;
            }
        }
    }
    return best;
}

double uncertainty(const MagnitudeWindow& win1, const MagnitudeWindow& win2, double epsilon) {
    if (win1.samples.size() != win2.samples.size()) {
        throw ArgumentError("uncertainty needs windows of equal length");
    }
    if (win1.samples.size() < 2) {
        throw ArgumentError("uncertainty needs windows of at least 2 samples");
    }
    if (!(epsilon > 0.0)) {
        throw ConfigError("uncertainty epsilon must be positive");
    }
    double variation = 0.0;
    for (const auto* win : {&win1, &win2}) {
        for (std::size_t l = 0; l + 1 < win->samples.size(); ++l) {
            variation += std::abs(win->samples[l + 1] - win->samples[l]);
        }
    }
    return 1.0 / std::max(epsilon, variation);
}

OffsetEstimate estimate_offset(const MagnitudeWindow& win1, const MagnitudeWindow& win2,
                               const EstimatorConfig& cfg) {
    cfg.validate();
    const auto w = static_cast<std::size_t>(cfg.window_size);
    if (win1.samples.size() != w || win2.samples.size() != w) {
        throw ArgumentError("windows must hold exactly window_size samples");
    }
    if (win1.anchor != win2.anchor) {
        throw ArgumentError("windows must share their anchor step");
    }

    const InterpolatedWindow r1 = interpolate(win1, cfg.interpolation_factor);
    const InterpolatedWindow r2 = interpolate(win2, cfg.interpolation_factor);
    std::vector<ShiftScore> scores = similarity_scan(r1, r2, cfg.temporal_factor, cfg.recency_variant);
    const int best = argmin_shift(scores);

    OffsetEstimate est;
    est.timestamp = win1.anchor;
    est.offset = static_cast<double>(best) / cfg.interpolation_factor;
    est.uncertainty = uncertainty(win1, win2, cfg.uncertainty_epsilon);
    if (cfg.keep_score_curve) {
        est.score_curve = std::move(scores);
    }
    return est;
}

OnlineEstimator::OnlineEstimator(EstimatorConfig cfg) : cfg_(cfg) {
    cfg_.validate();
    buf1_.resize(cfg_.window_size, 0.0);
    buf2_.resize(cfg_.window_size, 0.0);
}

MagnitudeWindow OnlineEstimator::snapshot(const std::vector<double>& buf, std::int64_t anchor) const {
    MagnitudeWindow win;
    win.anchor = anchor;
    win.samples.resize(buf.size());
    // head_ points at the oldest sample once the ring is full.
    for (std::size_t i = 0; i < buf.size(); ++i) {
        win.samples[i] = buf[(head_ + i) % buf.size()];
    }
    return win;
}

std::optional<OffsetEstimate> OnlineEstimator::push(std::int64_t step, RotationMagnitude r1,
                                                    RotationMagnitude r2) {
    if (next_step_ && step != *next_step_) {
        throw StreamError("estimator steps must increase by exactly 1");
    }
    next_step_ = step + 1;

    buf1_[head_] = r1.value();
    buf2_[head_] = r2.value();
    head_ = (head_ + 1) % buf1_.size();
    if (count_ < buf1_.size()) {
        ++count_;
    }
    if (!window_full()) {
        return std::nullopt;
    }
    return estimate_offset(snapshot(buf1_, step), snapshot(buf2_, step), cfg_);
}

double constant_offset_baseline(std::span<const double> r1, std::span<const double> r2) {
    if (r1.size() != r2.size()) {
        throw ArgumentError("baseline needs series of equal length");
    }
    if (r1.size() < 2) {
        throw ArgumentError("baseline needs at least 2 samples");
    }
    const int n = static_cast<int>(r1.size());

    const double mean1 = std::accumulate(r1.begin(), r1.end(), 0.0) / n;
    const double mean2 = std::accumulate(r2.begin(), r2.end(), 0.0) / n;
    std::vector<double> f(r1.begin(), r1.end());
    std::vector<double> g(r2.begin(), r2.end());
    for (double& v : f) v -= mean1;
    for (double& v : g) v -= mean2;

    const std::vector<double> phi = cross_correlation(f, g);
    const auto phi_at = [&](int lag) {
        int tau = lag % n;
        if (tau < 0) tau += n;
        return phi[tau];
    };

    // Same deterministic preference order as the estimator's argmin.
    const int lo = -n / 2;
    const int hi = (n - 1) / 2;
    int best = 0;
    double best_score = phi_at(0);
    for (int a = 1; a <= std::max(-lo, hi); ++a) {
        for (const int lag : {-a, a}) {
            if (lag < lo || lag > hi) continue;
            if (phi_at(lag) > best_score) {
                best = lag;
                best_score = phi_at(lag);
            }
        }
    }
    return static_cast<double>(best);
}

}  // namespace rotsync
