#pragma once

// Initial field and atom states: truncated real Fock amplitudes and the
// two-level superposition cos(theta)|+> + exp(-i phi) sin(theta)|->.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mpjcm/error.hpp"

namespace mpjcm {

/// Probability mass allowed beyond the truncation level.
inline constexpr double kTailBudget = 1e-14;
/// Accepted deviation of sum C_n^2 from one.
inline constexpr double kNormTolerance = 1e-12;

/// Real Fock-basis amplitudes C_0..C_nmax of a pure single-mode field.
class FieldState {
public:
    /// Takes ownership of `amplitudes` and renormalizes them.
    /// Throws InvalidStateError for empty, non-finite or all-zero input.
    static FieldState from_amplitudes(std::vector<double> amplitudes, std::string label) {
        if (amplitudes.empty()) throw InvalidStateError("field state needs at least one amplitude");
        double norm2 = 0.0;
        for (double c : amplitudes) {
            if (!std::isfinite(c)) throw InvalidStateError("non-finite amplitude in " + label);
            norm2 += c * c;
        }
        if (!(norm2 > 0.0)) throw InvalidStateError("state '" + label + "' has zero norm");
        const double scale = 1.0 / std::sqrt(norm2);
        for (double& c : amplitudes) c *= scale;
        return FieldState(std::move(amplitudes), std::move(label));
    }

    std::span<const double> amplitudes() const { return amplitudes_; }
    int n_max() const { return static_cast<int>(amplitudes_.size()) - 1; }
    const std::string& label() const { return label_; }

    /// C_n, zero above the truncation level.
    double amplitude(long n) const {
        if (n < 0 || n > n_max()) return 0.0;
        return amplitudes_[static_cast<std::size_t>(n)];
    }

private:
    FieldState(std::vector<double> amplitudes, std::string label)
        : amplitudes_(std::move(amplitudes)), label_(std::move(label)) {}

    std::vector<double> amplitudes_;
    std::string label_;
};

/// Atomic superposition angles, reduced to theta in [0, pi/2], phi in [0, 2pi).
/// Reduction uses only global-phase equivalences, so physics is unchanged.
class AtomState {
public:
    AtomState() = default;
    AtomState(double theta, double phi) {
        if (!std::isfinite(theta) || !std::isfinite(phi))
            throw ConfigError("atom angles must be finite");
        constexpr double pi = std::numbers::pi;
        theta = std::fmod(theta, pi);
        if (theta < 0.0) theta += pi;
        if (theta > pi / 2) {
            // cos(pi - t) = -cos t: flip the overall sign and move it onto phi.
            theta = pi - theta;
            phi += pi;
        }
        phi = std::fmod(phi, 2 * pi);
        if (phi < 0.0) phi += 2 * pi;
        if (phi >= 2 * pi) phi = 0.0;
        theta_ = theta;
        phi_ = phi;
    }

    static AtomState excited() { return {}; }
    static AtomState ground() { return {std::numbers::pi / 2, 0.0}; }

    double theta() const { return theta_; }
    double phi() const { return phi_; }

private:
    double theta_ = 0.0;
    double phi_ = 0.0;
};

/// Truncation request: a fixed level, or the automatic policy for a given
/// transition order m.
struct Truncation {
    std::optional<int> n_max;
    int m = 1;

    static Truncation fixed(int n) { return {n, 1}; }
    static Truncation automatic(int m) { return {std::nullopt, m}; }
};

/// Starting point of the automatic policy: mean + 10 sqrt(mean + 1) + m + 4.
inline int default_n_max(double mean_photon, int m) {
    return static_cast<int>(std::ceil(mean_photon + 10.0 * std::sqrt(mean_photon + 1.0))) + m + 4;
}

namespace detail {

// e^{-a^2/2} a^i / sqrt(i!) by recurrence, continued until the remaining
// mass is far below the tail budget.
inline std::vector<double> poisson_amplitudes(double alpha) {
    if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw ConfigError("alpha must be a finite non-negative number");
    if (alpha * alpha / 2 > 700.0) throw ConfigError("alpha too large for double-precision amplitudes");
    std::vector<double> c{std::exp(-alpha * alpha / 2)};
    if (alpha == 0.0) return c;
    const double mean = alpha * alpha;
    for (std::size_t i = 0;; ++i) {
        const double next = c.back() * alpha / std::sqrt(static_cast<double>(i + 1));
        c.push_back(next);
        if (static_cast<double>(i) > mean + 1.0 && next * next < 1e-36) break;
    }
    return c;
}

inline double tail_mass(const std::vector<double>& levels, int n_max) {
    double total = 0.0;
    double tail = 0.0;
    for (std::size_t n = 0; n < levels.size(); ++n) {
        const double p = levels[n] * levels[n];
        total += p;
        if (static_cast<long>(n) > n_max) tail += p;
    }
    return total > 0.0 ? tail / total : 0.0;
}

// Cut a long, unnormalized amplitude sequence according to `trunc`.
inline FieldState truncate(std::vector<double> levels, std::string label, const Truncation& trunc) {
    double total = 0.0;
    double first = 0.0;
    for (std::size_t n = 0; n < levels.size(); ++n) {
        total += levels[n] * levels[n];
        first += static_cast<double>(n) * levels[n] * levels[n];
    }
    if (!(total > 0.0)) throw InvalidStateError("state '" + label + "' has zero norm");
    const double mean = first / total;

    int n_max = 0;
    if (trunc.n_max) {
        n_max = *trunc.n_max;
        if (n_max < 0) throw ConfigError("n_max must be non-negative");
        const double tail = tail_mass(levels, n_max);
        if (tail > kTailBudget)
            throw TruncationError("n_max = " + std::to_string(n_max) + " leaves tail mass " + detail::brief(tail) +
                                  " for " + label + " (budget 1e-14)");
    } else {
        if (trunc.m < 1) throw ConfigError("transition order m must be >= 1");
        n_max = default_n_max(mean, trunc.m);
        while (tail_mass(levels, n_max) > kTailBudget) n_max += std::max(8, n_max / 4);
    }
    levels.resize(static_cast<std::size_t>(n_max) + 1, 0.0);
    return FieldState::from_amplitudes(std::move(levels), std::move(label));
}

inline std::string format_alpha(double alpha) {
    std::string s = std::to_string(alpha);
    s.erase(s.find_last_not_of('0') + 1);
    if (!s.empty() && s.back() == '.') s.pop_back();
    return s;
}

}  // namespace detail

/// Glauber coherent state with real amplitude alpha.
inline FieldState coherent_state(double alpha, const Truncation& trunc = {}) {
    return detail::truncate(detail::poisson_amplitudes(alpha), "coherent(alpha=" + detail::format_alpha(alpha) + ")",
                            trunc);
}

/// Coherent amplitudes placed on Fock levels 0, k, 2k, ...
inline FieldState k_photon_coherent_state(double alpha, int k, const Truncation& trunc = {}) {
    if (k < 1) throw ConfigError("k must be >= 1");
    const auto poisson = detail::poisson_amplitudes(alpha);
    std::vector<double> levels((poisson.size() - 1) * static_cast<std::size_t>(k) + 1, 0.0);
    for (std::size_t i = 0; i < poisson.size(); ++i) levels[i * static_cast<std::size_t>(k)] = poisson[i];
    return detail::truncate(std::move(levels),
                            "kphoton(alpha=" + detail::format_alpha(alpha) + ",k=" + std::to_string(k) + ")", trunc);
}

/// Four-component cat with support on levels 0, 4, 8, ...
inline FieldState orthogonal_even_coherent_state(double alpha, const Truncation& trunc = {}) {
    auto levels = detail::poisson_amplitudes(alpha);
    for (std::size_t n = 0; n < levels.size(); ++n)
        if (n % 4 != 0) levels[n] = 0.0;
    return detail::truncate(std::move(levels), "orthogonal_even(alpha=" + detail::format_alpha(alpha) + ")", trunc);
}

/// Normalization constant B = [2 cosh a^2 + 2 cos a^2]^{-1/2} of the
/// orthogonal-even state, C_{2n} = B a^{2n}/sqrt((2n)!) [1 + (-1)^n].
inline double orthogonal_even_normalization(double alpha) {
    const double x = alpha * alpha;
    return 1.0 / std::sqrt(2.0 * std::cosh(x) + 2.0 * std::cos(x));
}

enum class Parity { even, odd };

/// Even or odd coherent state (two-component cat).
inline FieldState parity_coherent_state(double alpha, Parity parity, const Truncation& trunc = {}) {
    if (parity == Parity::odd && alpha == 0.0) throw InvalidStateError("odd coherent state of alpha = 0 is empty");
    auto levels = detail::poisson_amplitudes(alpha);
    const std::size_t keep = parity == Parity::even ? 0 : 1;
    for (std::size_t n = 0; n < levels.size(); ++n)
        if (n % 2 != keep) levels[n] = 0.0;
    const std::string name = parity == Parity::even ? "even" : "odd";
    return detail::truncate(std::move(levels), name + "(alpha=" + detail::format_alpha(alpha) + ")", trunc);
}

/// P(n) = C_n^2.
inline std::vector<double> photon_distribution(const FieldState& state) {
    std::vector<double> p;
    p.reserve(state.amplitudes().size());
    for (double c : state.amplitudes()) p.push_back(c * c);
    return p;
}

inline double mean_photon(const FieldState& state) {
    double mean = 0.0;
    const auto c = state.amplitudes();
    for (std::size_t n = 0; n < c.size(); ++n) mean += static_cast<double>(n) * c[n] * c[n];
    return mean;
}

/// True when C_n C_{n+1} and C_n C_{n+2} vanish for all n, i.e. the support
/// spacing is at least three. Such states have <a> = <a^2> = 0 at all times
/// under one-photon evolution from the excited atom.
inline bool natural_phenomenon_class(const FieldState& state, double tolerance = 0.0) {
    const auto c = state.amplitudes();
    for (std::size_t n = 0; n < c.size(); ++n) {
        if (n + 1 < c.size() && std::abs(c[n] * c[n + 1]) > tolerance) return false;
        if (n + 2 < c.size() && std::abs(c[n] * c[n + 2]) > tolerance) return false;
    }
    return true;
}

/// gcd of the gaps between occupied levels; 0 for a single occupied level.
inline int support_spacing(const FieldState& state, double threshold = 0.0) {
    const auto c = state.amplitudes();
    int spacing = 0;
    long previous = -1;
    for (std::size_t n = 0; n < c.size(); ++n) {
        if (std::abs(c[n]) <= threshold) continue;
        if (previous >= 0) spacing = std::gcd(spacing, static_cast<int>(static_cast<long>(n) - previous));
        previous = static_cast<long>(n);
    }
    return spacing;
}

}  // namespace mpjcm
