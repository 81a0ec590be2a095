#pragma once

#include <cstdint>
#include <deque>
#include <string>

#include <Eigen/Dense>

#include "rotsync/estimator.hpp"

namespace rotsync {

enum class SyncState { in_sync, offset_detected, unassessable };

const char* to_string(SyncState state);

/// Per-step synchronicity verdict derived from an offset estimate.
struct SyncVerdict {
    std::int64_t timestamp = 0;
    SyncState state = SyncState::in_sync;
    double offset = 0.0;
    double uncertainty = 0.0;
};

/// Policy for applying offset estimates to measurement timestamps.
struct CorrectionStrategy {
    enum class Kind { always_apply, uncertainty_gate, hybrid };

    Kind kind = Kind::hybrid;
    double u_max = 1.0;      // uncertainty_gate and hybrid
    double offset_min = 0.5; // hybrid only, in coarse steps
};

/// A sensor observation of the target: 2-D position with the timestamp the
/// sensor assigned (which is what correction may move).
struct StampedMeasurement {
    int sensor_id = 1;
    double timestamp = 0.0;  // coarse steps
    Eigen::Vector2d position = Eigen::Vector2d::Zero();
    double noise_std = 0.0;
};

enum class CorrectionAction { corrected, discarded, unchanged };

struct CorrectionOutcome {
    CorrectionAction action = CorrectionAction::unchanged;
    StampedMeasurement measurement;
};

/// unassessable when u exceeds u_max; otherwise offset_detected when |s*|
/// reaches offset_min, else in_sync.
SyncVerdict assess(const OffsetEstimate& est, double u_max, double offset_min);

/// Apply one offset estimate to one measurement. Sensor 1 is the reference
/// clock and always passes through unchanged; sensor 2 timestamps move by
/// -s*. Only uncertainty_gate ever discards.
CorrectionOutcome correct(const StampedMeasurement& m, const OffsetEstimate& est,
                          const CorrectionStrategy& strategy);

/// Pairs measurements with the most recent estimate anchored at or before
/// their stamp (zero-order hold). Measurements seen before any usable
/// estimate pass through unchanged. Single-threaded per sensor pair.
class CorrectionSession {
public:
    explicit CorrectionSession(CorrectionStrategy strategy) : strategy_(strategy) {}

    void push_estimate(const OffsetEstimate& est);
    CorrectionOutcome correct(const StampedMeasurement& m) const;

private:
    CorrectionStrategy strategy_;
    std::deque<OffsetEstimate> estimates_;  // ascending anchors
};

}  // namespace rotsync
