#pragma once

// Closed-form evolution of the resonant m-photon Jaynes-Cummings model.
//
// The interaction couples only the pairs {|+,n>, |-,n+m>}, so the joint state
// is stored per pair plus the m ground-state levels |-,j>, j < m, that the
// interaction never reaches ("dark" levels). Times are scaled, T = lambda t.

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "mpjcm/error.hpp"
#include "mpjcm/states.hpp"

namespace mpjcm {

using complex = std::complex<double>;

enum class Approach {
    eha,   ///< effective hamiltonian, no Stark shift
    meha,  ///< effective hamiltonian plus dynamic Stark shift -a^dag a (beta1 s+s- + beta2 s-s+)
};

inline const char* to_string(Approach a) { return a == Approach::eha ? "eha" : "meha"; }

struct ModelConfig {
    int m = 1;
    Approach approach = Approach::eha;
    double beta1 = 0.0;
    double beta2 = 0.0;
    double lambda = 1.0;
    // Cavity and atomic frequencies only enter through the resonance
    // condition omega_a = m omega_0; they never reach interaction-picture
    // amplitudes.
    double omega0 = 1.0;

    double omega_atom() const { return m * omega0; }

    static ModelConfig eha(int m) { return {m, Approach::eha}; }
    static ModelConfig meha(int m, double beta1, double beta2, double lambda = 1.0) {
        return {m, Approach::meha, beta1, beta2, lambda};
    }

    void validate() const {
        if (m < 1) throw ConfigError("transition order m must be >= 1");
        if (!(lambda > 0.0) || !std::isfinite(lambda)) throw ConfigError("coupling lambda must be positive");
        if (!std::isfinite(beta1) || !std::isfinite(beta2) || beta1 < 0.0 || beta2 < 0.0)
            throw ConfigError("Stark parameters must be finite and non-negative");
        if (approach == Approach::eha && (beta1 != 0.0 || beta2 != 0.0))
            throw ConfigError("Stark parameters require the meha approach");
    }
};

/// Joint atom-field state at scaled time T.
///
/// excited[n] is the amplitude of |+,n>, coupled[n] that of |-,n+m>, for
/// n = 0..n_max; dark[j] that of |-,j>, j < m.
struct JointState {
    std::vector<complex> excited;
    std::vector<complex> coupled;
    std::vector<complex> dark;
    double time = 0.0;
    ModelConfig config;

    int m() const { return config.m; }
    std::size_t pairs() const { return excited.size(); }

    /// Amplitude of |-,level>; zero outside the represented space.
    complex ground(long level) const {
        if (level < 0) return 0.0;
        const auto j = static_cast<std::size_t>(level);
        if (j < dark.size()) return dark[j];
        const std::size_t n = j - dark.size();
        return n < coupled.size() ? coupled[n] : complex{};
    }
    /// Amplitude of |+,level>.
    complex upper(long level) const {
        if (level < 0 || static_cast<std::size_t>(level) >= excited.size()) return 0.0;
        return excited[static_cast<std::size_t>(level)];
    }
    /// Number of ground-state Fock levels held, n_max + m + 1.
    std::size_t ground_levels() const { return dark.size() + coupled.size(); }

    double norm_squared() const {
        double s = 0.0;
        for (const auto& v : excited) s += std::norm(v);
        for (const auto& v : coupled) s += std::norm(v);
        for (const auto& v : dark) s += std::norm(v);
        return s;
    }
};

/// Rising product (n+1)(n+2)...(n+m) = (n+m)!/n!; 1 for m = 0.
inline double rising_product(long n, long m) {
    if (n < 0 || m < 0) throw ConfigError("rising_product needs non-negative arguments");
    double p = 1.0;
    for (long j = 1; j <= m; ++j) p *= static_cast<double>(n + j);
    if (!std::isfinite(p)) throw OverflowError("rising product overflows for n = " + std::to_string(n));
    return p;
}

/// sqrt((n+m)!/n!), the Rabi frequency of the pair {|+,n>, |-,n+m>}.
inline double rabi_frequency(long n, long m) { return std::sqrt(rising_product(n, m)); }

/// State at T = 0: C_n cos(theta)|+,n> + exp(-i phi) C_n sin(theta)|-,n>.
inline JointState initial_joint_state(const FieldState& field, const AtomState& atom, const ModelConfig& config) {
    config.validate();
    const auto m = static_cast<long>(config.m);
    const std::size_t pairs = field.amplitudes().size();
    const complex phase = std::polar(1.0, -atom.phi());
    const double ct = std::cos(atom.theta());
    const double st = std::sin(atom.theta());

    JointState s;
    s.config = config;
    s.excited.resize(pairs);
    s.coupled.resize(pairs);
    s.dark.resize(static_cast<std::size_t>(m));
    for (std::size_t n = 0; n < pairs; ++n) {
        s.excited[n] = field.amplitude(static_cast<long>(n)) * ct;
        s.coupled[n] = phase * field.amplitude(static_cast<long>(n) + m) * st;
    }
    for (long j = 0; j < m; ++j) s.dark[static_cast<std::size_t>(j)] = phase * field.amplitude(j) * st;
    return s;
}

/// Effective-hamiltonian evolution:
///   excited(n) = C_n cos(th) cos(T w_n) - i e^{-i phi} C_{n+m} sin(th) sin(T w_n)
///   coupled(n) = e^{-i phi} C_{n+m} sin(th) cos(T w_n) - i C_n cos(th) sin(T w_n)
/// with w_n = sqrt(h(n, m)); dark levels are constant.
inline JointState evolve_eha(const FieldState& field, const AtomState& atom, const ModelConfig& config, double T) {
    if (config.approach != Approach::eha) throw ConfigError("evolve_eha called with a meha configuration");
    if (!std::isfinite(T)) throw ConfigError("time must be finite");
    JointState s = initial_joint_state(field, atom, config);
    s.time = T;
    const complex minus_i{0.0, -1.0};
    for (std::size_t n = 0; n < s.pairs(); ++n) {
        const double w = rabi_frequency(static_cast<long>(n), config.m);
        const double c = std::cos(T * w);
        const double sn = std::sin(T * w);
        const complex up = s.excited[n];
        const complex down = s.coupled[n];
        s.excited[n] = up * c + minus_i * down * sn;
        s.coupled[n] = down * c + minus_i * up * sn;
    }
    return s;
}

/// Stark-shifted evolution. With t = T/lambda, V_n = [n b1 + (n+m) b2]/2 and
/// W_n = sqrt((n b1 - (n+m) b2)^2 + 4 lambda^2 h(n,m))/2:
///   excited(n) = e^{i t V}{u cos(tW) + (i/W)[(n b1 - V) u - lambda w d] sin(tW)}
///   coupled(n) = e^{i t V}{d cos(tW) - (i/W)[(V - (n+m) b2) d + lambda w u] sin(tW)}
/// where u, d are the T = 0 amplitudes. Dark level j picks up e^{i t j b2}.
///
/// The radicand uses lambda^2; with a bare lambda the expression would not
/// reduce to evolve_eha at b1 = b2 = 0.
inline JointState evolve_meha(const FieldState& field, const AtomState& atom, const ModelConfig& config, double T) {
    if (config.approach != Approach::meha) throw ConfigError("evolve_meha called with an eha configuration");
    if (!std::isfinite(T)) throw ConfigError("time must be finite");
    JointState s = initial_joint_state(field, atom, config);
    s.time = T;
    const double t = T / config.lambda;
    const double b1 = config.beta1;
    const double b2 = config.beta2;
    const double lambda = config.lambda;
    const complex i{0.0, 1.0};
    for (std::size_t idx = 0; idx < s.pairs(); ++idx) {
        const auto n = static_cast<double>(idx);
        const double nm = n + config.m;
        const double w = rabi_frequency(static_cast<long>(idx), config.m);
        const double v = 0.5 * (n * b1 + nm * b2);
        const double split = n * b1 - nm * b2;
        const double omega = 0.5 * std::sqrt(split * split + 4.0 * lambda * lambda * w * w);
        const double c = std::cos(t * omega);
        const double sn = std::sin(t * omega) / omega;
        const complex phase = std::polar(1.0, t * v);
        const complex u = s.excited[idx];
        const complex d = s.coupled[idx];
        s.excited[idx] = phase * (u * c + i * ((n * b1 - v) * u - lambda * w * d) * sn);
        s.coupled[idx] = phase * (d * c - i * ((v - nm * b2) * d + lambda * w * u) * sn);
    }
    for (std::size_t j = 0; j < s.dark.size(); ++j)
        s.dark[j] *= std::polar(1.0, t * static_cast<double>(j) * b2);
    return s;
}

/// Dispatch on config.approach.
inline JointState evolve(const FieldState& field, const AtomState& atom, const ModelConfig& config, double T) {
    return config.approach == Approach::eha ? evolve_eha(field, atom, config, T)
                                            : evolve_meha(field, atom, config, T);
}

}  // namespace mpjcm
