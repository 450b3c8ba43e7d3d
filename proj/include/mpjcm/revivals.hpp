#pragma once

// Revival-center detection and series comparison helpers.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <vector>

#include "mpjcm/error.hpp"

namespace mpjcm {

/// Moving-window standard deviation of `y`: at each sample, the RMS of the
/// window's values about the window mean. The window spans `window` time
/// units centred on the sample and is clipped at the ends.
inline std::vector<double> envelope(std::span<const double> t, std::span<const double> y, double window) {
    if (t.size() != y.size()) throw ConfigError("envelope: time and value lengths differ");
    if (t.size() < 2) throw ConfigError("envelope: need at least two samples");
    const double dt = t[1] - t[0];
    const auto width = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(window / dt)));
    const std::size_t half = width / 2;

    std::vector<double> out(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        const std::size_t lo = i >= half ? i - half : 0;
        const std::size_t hi = std::min(y.size(), i + half + 1);
        double mean = 0.0;
        for (std::size_t k = lo; k < hi; ++k) mean += y[k];
        mean /= static_cast<double>(hi - lo);
        double var = 0.0;
        for (std::size_t k = lo; k < hi; ++k) var += (y[k] - mean) * (y[k] - mean);
        out[i] = std::sqrt(var / static_cast<double>(hi - lo));
    }
    return out;
}

struct RevivalOptions {
    /// Envelope window as a fraction of the predicted revival time.
    double window_fraction = 0.1;
    /// Percentile of the envelope taken as the collapse-plateau level.
    double plateau_percentile = 20.0;
    /// Centers must exceed this multiple of the plateau level.
    double threshold_factor = 3.0;
    /// Minimum separation between centers, as a fraction of the predicted revival time.
    double separation_fraction = 0.5;
};

struct RevivalReport {
    std::vector<double> centers;
    double plateau = 0.0;
    double threshold = 0.0;

    /// (last - first) / (count - 1); NaN with fewer than two centers.
    double mean_spacing() const {
        if (centers.size() < 2) return std::nan("");
        return (centers.back() - centers.front()) / static_cast<double>(centers.size() - 1);
    }
    double first() const { return centers.empty() ? std::nan("") : centers.front(); }
};

/// Locate revival centers of a collapse-revival signal.
///
/// Candidates are interior local maxima of the envelope above
/// threshold_factor x plateau, after the initial oscillation has first
/// collapsed below threshold. Candidates closer than the separation to a
/// taller accepted one are dropped. Maxima within half a window of either end
/// are ignored since the envelope is clipped there.
inline RevivalReport revival_centers(std::span<const double> t, std::span<const double> y, double predicted_revival,
                                     const RevivalOptions& opt = {}) {
    if (!(predicted_revival > 0.0)) throw ConfigError("predicted revival time must be positive");
    const double window = opt.window_fraction * predicted_revival;
    const auto env = envelope(t, y, window);

    std::vector<double> sorted = env;
    std::sort(sorted.begin(), sorted.end());
    const double rank = opt.plateau_percentile / 100.0 * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(rank));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double plateau = sorted[lo] + (rank - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);

    RevivalReport report;
    report.plateau = plateau;
    report.threshold = opt.threshold_factor * plateau;

    const double dt = t[1] - t[0];
    const auto edge = static_cast<std::size_t>(std::lround(window / dt)) / 2 + 1;
    std::size_t start = 0;
    while (start < env.size() && env[start] > report.threshold) ++start;
    start = std::max(start, edge);

    std::vector<std::size_t> candidates;
    for (std::size_t i = start; i + edge < env.size(); ++i)
        if (env[i] > report.threshold && env[i] >= env[i - 1] && env[i] > env[i + 1]) candidates.push_back(i);
    std::stable_sort(candidates.begin(), candidates.end(),
                     [&](std::size_t a, std::size_t b) { return env[a] > env[b]; });

    const double separation = opt.separation_fraction * predicted_revival;
    std::vector<std::size_t> accepted;
    for (std::size_t c : candidates) {
        const bool isolated = std::none_of(accepted.begin(), accepted.end(),
                                           [&](std::size_t a) { return std::abs(t[c] - t[a]) < separation; });
        if (isolated) accepted.push_back(c);
    }
    std::sort(accepted.begin(), accepted.end());
    for (std::size_t a : accepted) report.centers.push_back(t[a]);
    return report;
}

/// Pearson correlation coefficient.
inline double pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw ConfigError("pearson: need equal-length series of size >= 2");
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    return sxy / std::sqrt(sxx * syy);
}

inline double rms(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s / static_cast<double>(x.size()));
}

/// RMS(reference - candidate) / RMS(reference).
inline double normalized_rms(std::span<const double> reference, std::span<const double> candidate) {
    if (reference.size() != candidate.size() || reference.empty())
        throw ConfigError("normalized_rms: need equal-length, non-empty series");
    std::vector<double> diff(reference.size());
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = reference[i] - candidate[i];
    return rms(diff) / rms(reference);
}

}  // namespace mpjcm
