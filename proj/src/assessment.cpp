#include "rotsync/assessment.hpp"

#include <algorithm>
#include <cmath>

#include "rotsync/errors.hpp"

namespace rotsync {

const char* to_string(SyncState state) {
    switch (state) {
        case SyncState::in_sync: return "in_sync";
        case SyncState::offset_detected: return "offset_detected";
        case SyncState::unassessable: return "unassessable";
    }
    return "unknown";
}

SyncVerdict assess(const OffsetEstimate& est, double u_max, double offset_min) {
    if (!(u_max > 0.0) || !(offset_min > 0.0)) {
        throw ArgumentError("assessment thresholds must be positive");
    }
    SyncVerdict v;
    v.timestamp = est.timestamp;
    v.offset = est.offset;
    v.uncertainty = est.uncertainty;
    if (est.uncertainty > u_max) {
        v.state = SyncState::unassessable;
    } else if (std::abs(est.offset) >= offset_min) {
        v.state = SyncState::offset_detected;
    } else {
        v.state = SyncState::in_sync;
    }
    return v;
}

namespace {

CorrectionOutcome shifted(const StampedMeasurement& m, double offset) {
    if (offset == 0.0) {
        return {CorrectionAction::unchanged, m};
    }
    StampedMeasurement out = m;
    out.timestamp = m.timestamp - offset;
    return {CorrectionAction::corrected, out};
}

}  // namespace

CorrectionOutcome correct(const StampedMeasurement& m, const OffsetEstimate& est,
                          const CorrectionStrategy& strategy) {
    if (m.sensor_id == 1) {
        return {CorrectionAction::unchanged, m};
    }
    switch (strategy.kind) {
        case CorrectionStrategy::Kind::always_apply:
            return shifted(m, est.offset);
        case CorrectionStrategy::Kind::uncertainty_gate:
            if (est.uncertainty <= strategy.u_max) {
                return shifted(m, est.offset);
            }
            return {CorrectionAction::discarded, m};
        case CorrectionStrategy::Kind::hybrid:
            // Confident estimates apply; large offsets apply even when the
            // estimate is uncertain. Nothing is ever discarded.
            if (est.uncertainty <= strategy.u_max || std::abs(est.offset) >= strategy.offset_min) {
                return shifted(m, est.offset);
            }
            return {CorrectionAction::unchanged, m};
    }
    throw ArgumentError("unknown correction strategy");
}

void CorrectionSession::push_estimate(const OffsetEstimate& est) {
    if (!estimates_.empty() && est.timestamp <= estimates_.back().timestamp) {
        throw StreamError("estimates must arrive with increasing anchors");
    }
    estimates_.push_back(est);
}

CorrectionOutcome CorrectionSession::correct(const StampedMeasurement& m) const {
    if (m.sensor_id == 1) {
        return {CorrectionAction::unchanged, m};
    }
    // Latest estimate anchored at or before the stamp.
    auto it = std::upper_bound(estimates_.begin(), estimates_.end(), m.timestamp,
                               [](double t, const OffsetEstimate& e) {
                                   return t < static_cast<double>(e.timestamp);
                               });
    if (it == estimates_.begin()) {
        return {CorrectionAction::unchanged, m};
    }
    return rotsync::correct(m, *std::prev(it), strategy_);
}

}  // namespace rotsync
