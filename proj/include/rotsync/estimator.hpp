#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "rotsync/geometry.hpp"
#include "rotsync/signal.hpp"

namespace rotsync {

struct EstimatorConfig {
    int window_size = 50;           // w, coarse samples per window
    int interpolation_factor = 10;  // b, offset resolution is 1/b coarse steps
    double temporal_factor = 0.9;   // recency decay in (0, 1]
    double uncertainty_epsilon = 1e-9;
    RecencyVariant recency_variant = RecencyVariant::favor_recent;
    bool keep_score_curve = false;

    int interp_size() const { return window_size * interpolation_factor; }
    void validate() const;
};

/// One per-step offset estimate: s* in coarse steps (resolution 1/b) plus
/// the uncertainty of the estimate. High uncertainty means "unassessable",
/// not "wrong".
struct OffsetEstimate {
    std::int64_t timestamp = 0;
    double offset = 0.0;
    double uncertainty = 0.0;
    std::optional<std::vector<ShiftScore>> score_curve;
};

/// Argmin over a similarity curve. Ties break toward the smallest |shift|,
/// then toward the negative shift, so results are deterministic.
int argmin_shift(std::span<const ShiftScore> scores);

/// Estimate the time offset between two magnitude windows sharing an anchor.
/// Positive offsets mean sensor 2 lags sensor 1: r2[k] ~ r1[k - s*].
OffsetEstimate estimate_offset(const MagnitudeWindow& win1, const MagnitudeWindow& win2,
                               const EstimatorConfig& cfg);

/// Reciprocal of the total rotational variation across both raw windows,
/// guarded by epsilon. Flat windows saturate at 1/epsilon.
double uncertainty(const MagnitudeWindow& win1, const MagnitudeWindow& win2, double epsilon);

/// Streaming wrapper around estimate_offset: ring-buffers the last w
/// magnitudes per sensor and emits one estimate per step once full.
/// Single stream, single thread; separate instances are independent.
class OnlineEstimator {
public:
    explicit OnlineEstimator(EstimatorConfig cfg);

    /// Steps must increase by exactly 1. Returns an estimate from the w-th
    /// push onward, nothing before.
    std::optional<OffsetEstimate> push(std::int64_t step, RotationMagnitude r1, RotationMagnitude r2);

    bool window_full() const { return count_ >= static_cast<std::size_t>(cfg_.window_size); }
    const EstimatorConfig& config() const { return cfg_; }

private:
    EstimatorConfig cfg_;
    std::vector<double> buf1_, buf2_;
    std::size_t head_ = 0;  // slot the next sample lands in
    std::size_t count_ = 0;
    std::optional<std::int64_t> next_step_;

    MagnitudeWindow snapshot(const std::vector<double>& buf, std::int64_t anchor) const;
};

/// Single constant offset from whole series via periodic cross-correlation
/// of the mean-removed magnitudes; argmax mapped to [-N/2, N/2). Positive
/// results mean sensor 2 lags sensor 1, matching estimate_offset.
double constant_offset_baseline(std::span<const double> r1, std::span<const double> r2);

}  // namespace rotsync
