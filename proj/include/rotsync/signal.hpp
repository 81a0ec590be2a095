#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace rotsync {

/// The last w rotation magnitudes of one sensor. Index w-1 holds the newest
/// sample; `anchor` is the coarse step that sample belongs to.
struct MagnitudeWindow {
    std::vector<double> samples;
    std::int64_t anchor = 0;
};

/// A magnitude window linearly upsampled by an integer factor. Output index
/// l corresponds to source position l/factor; positions past the last source
/// sample (there are factor-1 of them) are clamped to it.
struct InterpolatedWindow {
    std::vector<double> samples;
    int factor = 1;       // b
    int source_size = 0;  // w

    int size() const { return static_cast<int>(samples.size()); }
};

/// Similarity score of one candidate shift, in interpolated samples.
struct ShiftScore {
    int shift = 0;
    double score = 0.0;
};

/// Direction of the recency weighting inside the window. `favor_recent`
/// gives the newest sample weight 1 and decays older ones; `favor_oldest`
/// is the reversed ordering, kept selectable for comparison runs.
enum class RecencyVariant { favor_recent, favor_oldest };

InterpolatedWindow interpolate(const MagnitudeWindow& window, int factor);

/// Finite periodic cross-correlation: phi[tau] = sum_m f[m] * g[(m+tau) mod N].
std::vector<double> cross_correlation(std::span<const double> f, std::span<const double> g);

/// Single cross-correlation value with the index wrapped, for any tau.
double cross_correlation_at(std::span<const double> f, std::span<const double> g, std::int64_t tau);

/// Sum of absolute differences between two interpolated windows at a shift,
/// taken over the overlapping samples only.
double shifted_abs_difference(const InterpolatedWindow& r1, const InterpolatedWindow& r2, int shift);

/// Reciprocal of the overlap count at a shift: 1 / (interp_size - |shift|).
double overlap_normalizer(int shift, int interp_size);

/// Recency weight of interpolated sample m in a window of interp_size
/// samples, with decay factor in (0, 1].
double recency_weight(int m, int interp_size, double decay,
                      RecencyVariant variant = RecencyVariant::favor_recent);

/// Overlap-normalized, recency-weighted absolute-difference score for every
/// candidate shift in [-n/2, n/2 - 1], n = interpolated window size (even).
/// The scan over shifts runs in parallel; per-shift sums accumulate in
/// ascending sample order, so results do not depend on the thread count.
std::vector<ShiftScore> similarity_scan(const InterpolatedWindow& r1, const InterpolatedWindow& r2,
                                        double decay, RecencyVariant variant = RecencyVariant::favor_recent);

}  // namespace rotsync
