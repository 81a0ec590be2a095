#pragma once

#include <span>
#include <vector>

#include "rotsync/signal.hpp"

namespace rotsync::reference {

// Serial reference implementations, written as literal double loops straight
// from the defining sums and kept independent of the production kernels.
// Tests compare the two paths; the benchmark times them against each other.

/// Naive similarity scan: for every shift, recompute overlap normalization
/// and recency weights inline. O(n^2) with a pow per term.
std::vector<ShiftScore> similarity_scan(const InterpolatedWindow& r1, const InterpolatedWindow& r2,
                                        double decay,
                                        RecencyVariant variant = RecencyVariant::favor_recent);

/// Argmin over a score curve with the production tie-break policy
/// (smallest |shift| first, negative before positive), rebuilt here from
/// the policy statement rather than shared code.
int argmin_shift(std::span<const ShiftScore> scores);

/// Naive periodic cross-correlation with explicit index wrapping.
std::vector<double> cross_correlation(std::span<const double> f, std::span<const double> g);

}  // namespace rotsync::reference
