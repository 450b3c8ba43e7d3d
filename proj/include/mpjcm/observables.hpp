#pragma once

// Field moments, atomic inversion, fluctuation factors and the analytic
// predictors built on them.

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "mpjcm/dynamics.hpp"
#include "mpjcm/error.hpp"
#include "mpjcm/states.hpp"

namespace mpjcm {

/// Normal-order moment <a^dag^s2 a^s1>.
///
/// a^s |n+s> = sqrt(h(n,s)) |n>, so each atomic manifold contributes
/// sum_n psi*(n+s2) psi(n+s1) sqrt(h(n,s1) h(n,s2)). The ground manifold is
/// walked level by level, so dark and coupled amplitudes mix correctly.
inline complex moment(const JointState& joint, int s1, int s2) {
    if (s1 < 0 || s2 < 0) throw ConfigError("moment orders must be non-negative");
    const long shift = std::max(s1, s2);
    complex total{};

    const auto upper_levels = static_cast<long>(joint.excited.size());
    for (long n = 0; n + shift < upper_levels; ++n) {
        const double weight = std::sqrt(rising_product(n, s1) * rising_product(n, s2));
        total += std::conj(joint.upper(n + s2)) * joint.upper(n + s1) * weight;
    }
    const auto ground_levels = static_cast<long>(joint.ground_levels());
    for (long n = 0; n + shift < ground_levels; ++n) {
        const double weight = std::sqrt(rising_product(n, s1) * rising_product(n, s2));
        total += std::conj(joint.ground(n + s2)) * joint.ground(n + s1) * weight;
    }
    return total;
}

/// <a^dag a>
inline double mean_photon(const JointState& joint) { return moment(joint, 1, 1).real(); }

/// <sigma_z> with eigenvalues +1 on |+>, -1 on |->.
inline double atomic_inversion(const JointState& joint) {
    double upper = 0.0;
    double lower = 0.0;
    for (const auto& v : joint.excited) upper += std::norm(v);
    for (const auto& v : joint.coupled) lower += std::norm(v);
    for (const auto& v : joint.dark) lower += std::norm(v);
    return upper - lower;
}

/// Fluctuation factors of one quadrature pair.
/// order 1: f = 2 Var(X) - 1/2 with X = (a + a^dag)/2.
/// order 2: f = <a^dag2 a2> + Re<a^4> - 2 (Re<a^2>)^2 for X2 = (a^2 + a^dag2)/4.
struct FluctuationPair {
    double f = 0.0;
    double s = 0.0;
    int order = 1;
    /// <n> at the same instant; needed to turn order-2 factors into variances.
    double mean_photon = 0.0;

    double variance_x() const { return order == 1 ? (f + 0.5) / 2.0 : (f + 2.0 * mean_photon + 1.0) / 8.0; }
    double variance_y() const { return order == 1 ? (s + 0.5) / 2.0 : (s + 2.0 * mean_photon + 1.0) / 8.0; }
    double uncertainty_product() const { return variance_x() * variance_y(); }
    /// Lower bound of uncertainty_product(): 1/16, or (2<n>+1)^2/64 for order 2.
    double uncertainty_bound() const {
        if (order == 1) return 1.0 / 16.0;
        const double c = 2.0 * mean_photon + 1.0;
        return c * c / 64.0;
    }
};

inline FluctuationPair normal_fluctuations(const JointState& joint) {
    const double n = mean_photon(joint);
    const complex a = moment(joint, 1, 0);
    const complex a2 = moment(joint, 2, 0);
    return {n + a2.real() - 2.0 * a.real() * a.real(), n - a2.real() - 2.0 * a.imag() * a.imag(), 1, n};
}

inline FluctuationPair squared_fluctuations(const JointState& joint) {
    const double n = mean_photon(joint);
    const double n2 = moment(joint, 2, 2).real();
    const complex a2 = moment(joint, 2, 0);
    const complex a4 = moment(joint, 4, 0);
    return {n2 + a4.real() - 2.0 * a2.real() * a2.real(), n2 - a4.real() - 2.0 * a2.imag() * a2.imag(), 2, n};
}

/// Revival time solving 2 T [sqrt(n + spacing) - sqrt(n)] = 2 pi; tends to
/// (2 pi / spacing) sqrt(n) for large n.
inline double revival_time(double n_mean, int spacing) {
    if (!(n_mean > 0.0)) throw DomainError("revival time needs a positive mean photon number");
    if (spacing < 1) throw ConfigError("support spacing must be >= 1");
    return std::numbers::pi / (std::sqrt(n_mean + spacing) - std::sqrt(n_mean));
}

/// Ratio of the <a^2> phase rate to the one-photon inversion rate:
/// (sqrt(h(n+2,m)) - sqrt(h(n,m))) / (2 sqrt(n+1)).
inline double f_normal_exact(long n, int m) {
    if (n < 0 || m < 1) throw ConfigError("f_normal_exact needs n >= 0, m >= 1");
    return (rabi_frequency(n + 2, m) - rabi_frequency(n, m)) / (2.0 * std::sqrt(static_cast<double>(n) + 1.0));
}

/// Large-n form of the proportionality factor: (m/2) n^{(m-3)/2} for the
/// normal factors, m n^{(m-3)/2} for the amplitude-squared ones.
inline double f_asymptotic(double n, int m, int order) {
    if (!(n > 0.0) || m < 1) throw ConfigError("f_asymptotic needs n > 0, m >= 1");
    if (order != 1 && order != 2) throw ConfigError("fluctuation order must be 1 or 2");
    const double scale = order == 1 ? 0.5 * m : static_cast<double>(m);
    return scale * std::pow(n, 0.5 * (m - 3));
}

/// sum_n |P(n) - P(n+m)| over every n where either side is occupied.
/// Small when neighbouring occupied levels carry comparable weight.
inline double trapping_defect(const FieldState& state, int m) {
    if (m < 1) throw ConfigError("transition order m must be >= 1");
    double defect = 0.0;
    for (long n = 0; n <= state.n_max(); ++n) {
        const double p = state.amplitude(n) * state.amplitude(n);
        const double q = state.amplitude(n + m) * state.amplitude(n + m);
        defect += std::abs(p - q);
    }
    return defect;
}

namespace detail {

inline double initial_mean_or_throw(const FieldState& field) {
    const double n0 = mpjcm::mean_photon(field);
    if (!(n0 > 0.0)) throw DomainError("rescaled factor undefined for zero initial photon number");
    return n0;
}

}  // namespace detail

/// Normal factor S1 of the m-photon model, time-rescaled so that its <a^2>
/// phases run at the one-photon inversion rate:
///   Q(T) = [S1(T / f_asymptotic(<n(0)>, m, 1)) - <n(0)>] / <n(0)>.
inline double rescaled_normal_factor(const FieldState& field, const AtomState& atom, int m, double T) {
    const double n0 = detail::initial_mean_or_throw(field);
    const double rate = f_asymptotic(n0, m, 1);
    const auto joint = evolve_eha(field, atom, ModelConfig::eha(m), T / rate);
    return (normal_fluctuations(joint).s - n0) / n0;
}

/// Q1(T) = [S1(2T/3) - <n(0)>] / <n(0)> of the three-photon model.
inline double rescaled_q1(const FieldState& field, const AtomState& atom, double T) {
    const double n0 = detail::initial_mean_or_throw(field);
    const auto joint = evolve_eha(field, atom, ModelConfig::eha(3), 2.0 * T / 3.0);
    return (normal_fluctuations(joint).s - n0) / n0;
}

/// Q2(T) = [S2(T/3) - <n(0)>^2] / <n(0)>^2 of the three-photon model.
inline double rescaled_q2(const FieldState& field, const AtomState& atom, double T) {
    const double n0 = detail::initial_mean_or_throw(field);
    const auto joint = evolve_eha(field, atom, ModelConfig::eha(3), T / 3.0);
    return (squared_fluctuations(joint).s - n0 * n0) / (n0 * n0);
}

// ---------------------------------------------------------------------------
// Closed-form special cases. These take the field directly and never touch
// the joint-state machinery; they exist to cross-check it.
// ---------------------------------------------------------------------------

struct FirstMoments {
    complex a;
    complex a2;
};

/// <a(T)> and <a^2(T)> for m = 1 and an excited atom, summed term by term.
inline FirstMoments reference_a_a2_m1(const FieldState& field, double T) {
    const auto w = [](long n) { return std::sqrt(static_cast<double>(n) + 1.0); };
    double a = 0.0;
    double a2 = 0.0;
    for (long n = 0; n <= field.n_max(); ++n) {
        const double cn = field.amplitude(n);
        const double nn = static_cast<double>(n);
        const double c1 = field.amplitude(n + 1);
        if (cn != 0.0 && c1 != 0.0)
            a += cn * c1 * std::sqrt(nn + 1) *
                 (std::cos(T * w(n)) * std::cos(T * w(n + 1)) +
                  std::sqrt((nn + 2) / (nn + 1)) * std::sin(T * w(n)) * std::sin(T * w(n + 1)));
        const double c2 = field.amplitude(n + 2);
        if (cn != 0.0 && c2 != 0.0)
            a2 += cn * c2 * std::sqrt((nn + 1) * (nn + 2)) *
                  (std::cos(T * w(n)) * std::cos(T * w(n + 2)) +
                   std::sqrt((nn + 3) / (nn + 1)) * std::sin(T * w(n)) * std::sin(T * w(n + 2)));
    }
    return {a, a2};
}

/// Inversion series for arbitrary (theta, phi), including the dark levels:
///   sum_n {[P(n) cos^2 th - P(n+m) sin^2 th] cos(2T w_n)
///          - C_n C_{n+m} sin(phi) sin(2 th) sin(2T w_n)} - sin^2 th sum_{j<m} P(j).
inline double reference_inversion(const FieldState& field, const AtomState& atom, int m, double T) {
    const double c2 = std::cos(atom.theta()) * std::cos(atom.theta());
    const double s2 = std::sin(atom.theta()) * std::sin(atom.theta());
    const double cross = std::sin(atom.phi()) * std::sin(2.0 * atom.theta());
    double sum = 0.0;
    for (long n = 0; n <= field.n_max(); ++n) {
        const double cn = field.amplitude(n);
        const double cm = field.amplitude(n + m);
        const double w = rabi_frequency(n, m);
        sum += (cn * cn * c2 - cm * cm * s2) * std::cos(2.0 * T * w) - cn * cm * cross * std::sin(2.0 * T * w);
    }
    for (long j = 0; j < m; ++j) sum -= s2 * field.amplitude(j) * field.amplitude(j);
    return sum;
}

/// Strong-intensity form <n(0)> sum_n P(n) cos[T (sqrt(h(n+2,m)) - sqrt(h(n,m)))]
/// of Re<a^2(T)> for a coherent-like field and an excited atom.
inline double reference_a2_strong(const FieldState& field, int m, double T) {
    const double n0 = mpjcm::mean_photon(field);
    double sum = 0.0;
    for (long n = 0; n <= field.n_max(); ++n) {
        const double p = field.amplitude(n) * field.amplitude(n);
        if (p == 0.0) continue;
        sum += p * std::cos(T * (rabi_frequency(n + 2, m) - rabi_frequency(n, m)));
    }
    return n0 * sum;
}

namespace detail {

// Occupation of the levels 0, 3, 6, ...; throws unless the field lives there.
inline std::vector<double> three_photon_occupation(const FieldState& field) {
    std::vector<double> p;
    for (long n = 0; n <= field.n_max(); ++n) {
        const double c = field.amplitude(n);
        if (n % 3 != 0) {
            if (c != 0.0) throw InputClassError("field is not a three-photon state (level " + std::to_string(n) + ")");
            continue;
        }
        p.push_back(c * c);
    }
    return p;
}

}  // namespace detail

/// F2(T) ~ <n(0)>^2 - <n(0)> sum_n P(n) cos(2T sqrt(3n+4)) for a three-photon
/// coherent field (occupied levels 3n) in the one-photon model, excited atom.
inline double reference_f2_threephoton(const FieldState& field, double T) {
    const auto p = detail::three_photon_occupation(field);
    const double n0 = mpjcm::mean_photon(field);
    double sum = 0.0;
    for (std::size_t n = 0; n < p.size(); ++n) sum += p[n] * std::cos(2.0 * T * std::sqrt(3.0 * n + 4.0));
    return n0 * n0 - n0 * sum;
}

/// sum_n P(n) cos(2T sqrt(3n+1)): inversion of the same three-photon setup.
inline double reference_inversion_threephoton(const FieldState& field, double T) {
    const auto p = detail::three_photon_occupation(field);
    double sum = 0.0;
    for (std::size_t n = 0; n < p.size(); ++n) sum += p[n] * std::cos(2.0 * T * std::sqrt(3.0 * n + 1.0));
    return sum;
}

}  // namespace mpjcm
