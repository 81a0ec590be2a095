#include "rotsync/reference.hpp"

#include <cmath>
#include <cstdlib>

#include "rotsync/errors.hpp"

namespace rotsync::reference {

std::vector<ShiftScore> similarity_scan(const InterpolatedWindow& r1, const InterpolatedWindow& r2,
                                        double decay, RecencyVariant variant) {
    if (r1.samples.size() != r2.samples.size() || r1.samples.size() < 2 || r1.samples.size() % 2 != 0) {
        throw ArgumentError("reference scan needs matching even-sized windows");
    }
    const int n = static_cast<int>(r1.samples.size());
    const auto weight_at = [&](int m) {
        const double exponent = variant == RecencyVariant::favor_recent
                                    ? static_cast<double>(n - 1 - m) / n
                                    : static_cast<double>(m) / n;
        return std::pow(decay, exponent);
    };

    std::vector<ShiftScore> scores;
    scores.reserve(n);
    for (int s = -n / 2; s <= n / 2 - 1; ++s) {
        const double eta = 1.0 / (n - std::abs(s));
        double sum = 0.0;
        if (s >= 0) {
            for (int m = 0; m <= n - 1 - s; ++m) {
                sum += weight_at(m) * std::abs(r1.samples[m] - r2.samples[m + s]);
            }
        } else {
            for (int m = -s; m <= n - 1; ++m) {
                sum += weight_at(m + s) * std::abs(r1.samples[m] - r2.samples[m + s]);
            }
        }
        scores.push_back(ShiftScore{s, eta * sum});
    }
    return scores;
}

int argmin_shift(std::span<const ShiftScore> scores) {
    if (scores.empty()) {
        throw ArgumentError("empty score curve");
    }
    // Visit shifts by growing |s|, negative side first, keep the first
    // strict improvement; later ties cannot displace the preferred shift.
    const int n = static_cast<int>(scores.size());
    const int half = n / 2;
    const auto score_of = [&](int s) { return scores[s + half].score; };

    int best = 0;
    double best_score = score_of(0);
    for (int a = 1; a <= half; ++a) {
        for (const int s : {-a, a}) {
            if (s < -half || s > half - 1) continue;
            if (score_of(s) < best_score) {
                best = s;
                best_score = score_of(s);
            }
        }
    }
    return best;
}

std::vector<double> cross_correlation(std::span<const double> f, std::span<const double> g) {
    if (f.size() != g.size() || f.empty()) {
        throw ArgumentError("reference cross-correlation needs non-empty equal-length series");
    }
    const int n = static_cast<int>(f.size());
    std::vector<double> phi(n, 0.0);
    for (int tau = 0; tau < n; ++tau) {
        double acc = 0.0;
        for (int m = 0; m < n; ++m) {
            acc += f[m] * g[(m + tau) % n];
        }
        phi[tau] = acc;
    }
    return phi;
}

}  // namespace rotsync::reference
