#include "rotsync/signal.hpp"

#include <cmath>
#include <cstdlib>

#include "rotsync/errors.hpp"

namespace rotsync {

InterpolatedWindow interpolate(const MagnitudeWindow& window, int factor) {
    if (factor < 1) {
        throw ConfigError("interpolation factor must be >= 1");
    }
    const int w = static_cast<int>(window.samples.size());
    if (w < 2) {
        throw ArgumentError("interpolation needs a window of at least 2 samples");
    }
    InterpolatedWindow out;
    out.factor = factor;
    out.source_size = w;
    out.samples.resize(static_cast<std::size_t>(w) * factor);
    const std::vector<double>& src = window.samples;
    for (int l = 0; l < w * factor; ++l) {
        const int i = l / factor;
        const int r = l % factor;
        if (i >= w - 1) {
            out.samples[l] = src[w - 1];  // clamped tail, at most factor-1 samples
        } else if (r == 0) {
            out.samples[l] = src[i];
        } else {
            const double frac = static_cast<double>(r) / factor;
            out.samples[l] = src[i] + frac * (src[i + 1] - src[i]);
        }
    }
    return out;
}

std::vector<double> cross_correlation(std::span<const double> f, std::span<const double> g) {
    if (f.size() != g.size()) {
        throw ArgumentError("cross_correlation needs series of equal length");
    }
    if (f.empty()) {
        throw ArgumentError("cross_correlation needs at least one sample");
    }
    const std::size_t n = f.size();
    std::vector<double> phi(n, 0.0);
    for (std::size_t tau = 0; tau < n; ++tau) {
        double acc = 0.0;
        for (std::size_t m = 0; m < n; ++m) {
            std::size_t j = m + tau;
            if (j >= n) j -= n;
            acc += f[m] * g[j];
        }
        phi[tau] = acc;
    }
    return phi;
}

double cross_correlation_at(std::span<const double> f, std::span<const double> g, std::int64_t tau) {
    if (f.size() != g.size() || f.empty()) {
        throw ArgumentError("cross_correlation needs non-empty series of equal length");
    }
    const std::int64_t n = static_cast<std::int64_t>(f.size());
    double acc = 0.0;
    for (std::int64_t m = 0; m < n; ++m) {
        std::int64_t j = (m + tau) % n;
        if (j < 0) j += n;
        acc += f[m] * g[j];
    }
    return acc;
}

namespace {

void require_matching(const InterpolatedWindow& r1, const InterpolatedWindow& r2) {
    if (r1.samples.size() != r2.samples.size() || r1.factor != r2.factor) {
        throw ArgumentError("interpolated windows must match in size and factor");
    }
    if (r1.samples.size() < 2) {
        throw ArgumentError("interpolated windows must hold at least 2 samples");
    }
}

}  // namespace

double shifted_abs_difference(const InterpolatedWindow& r1, const InterpolatedWindow& r2, int shift) {
    require_matching(r1, r2);
    const int n = r1.size();
    if (shift < -n / 2 || shift > n / 2 - 1) {
        throw ArgumentError("shift outside the scanned interval");
    }
    double acc = 0.0;
    if (shift >= 0) {
        for (int m = 0; m <= n - 1 - shift; ++m) {
            acc += std::abs(r1.samples[m] - r2.samples[m + shift]);
        }
    } else {
        for (int m = -shift; m <= n - 1; ++m) {
            acc += std::abs(r1.samples[m] - r2.samples[m + shift]);
        }
    }
    return acc;
}

double overlap_normalizer(int shift, int interp_size) {
    if (std::abs(shift) >= interp_size) {
        throw ArgumentError("shift leaves no overlapping samples");
    }
    return 1.0 / (interp_size - std::abs(shift));
}

double recency_weight(int m, int interp_size, double decay, RecencyVariant variant) {
    if (!(decay > 0.0) || decay > 1.0) {
        throw ConfigError("recency decay must lie in (0, 1]");
    }
    if (m < 0 || m >= interp_size) {
        throw ArgumentError("weight index outside the window");
    }
    const double exponent = variant == RecencyVariant::favor_recent
                                ? static_cast<double>(interp_size - 1 - m) / interp_size
                                : static_cast<double>(m) / interp_size;
    return std::pow(decay, exponent);
}

std::vector<ShiftScore> similarity_scan(const InterpolatedWindow& r1, const InterpolatedWindow& r2,
                                        double decay, RecencyVariant variant) {
    require_matching(r1, r2);
    if (!(decay > 0.0) || decay > 1.0) {
        throw ConfigError("recency decay must lie in (0, 1]");
    }
    const int n = r1.size();
    if (n % 2 != 0) {
        throw ArgumentError("interpolated window size must be even");
    }
    const int half = n / 2;

    std::vector<double> weight(n);
    for (int m = 0; m < n; ++m) {
        weight[m] = recency_weight(m, n, decay, variant);
    }

    const double* a = r1.samples.data();
    const double* b = r2.samples.data();
    std::vector<ShiftScore> scores(n);
#pragma omp parallel for schedule(static) if (n >= 256)
    for (int i = 0; i < n; ++i) {
        const int s = i - half;
        double acc = 0.0;
        if (s >= 0) {
            for (int m = 0; m <= n - 1 - s; ++m) {
                acc += weight[m] * std::abs(a[m] - b[m + s]);
            }
        } else {
            for (int m = -s; m <= n - 1; ++m) {
                acc += weight[m + s] * std::abs(a[m] - b[m + s]);
            }
        }
        scores[i] = ShiftScore{s, acc / (n - std::abs(s))};
    }
    return scores;
}

}  // namespace rotsync
