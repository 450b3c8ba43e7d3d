#pragma once

// Brute-force reference: the interaction-picture generator as an explicit
// real symmetric matrix over the truncated joint basis, integrated with the
// classical fourth-order Runge-Kutta method. Nothing here evaluates the
// closed-form amplitudes; the Rabi couplings are rebuilt from the product
// rule locally.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mpjcm/dynamics.hpp"
#include "mpjcm/error.hpp"
#include "mpjcm/states.hpp"

namespace mpjcm::oracle {

using mpjcm::complex;
using Vector = std::vector<complex>;

enum class Level { upper, lower };

/// (atom level, Fock n) <-> flat index 2n + (0 for |+>, 1 for |->).
struct JointBasisIndex {
    Level atom = Level::upper;
    long n = 0;

    std::size_t flat() const { return static_cast<std::size_t>(2 * n + (atom == Level::upper ? 0 : 1)); }
    static JointBasisIndex from_flat(std::size_t i) {
        return {i % 2 == 0 ? Level::upper : Level::lower, static_cast<long>(i / 2)};
    }
};

/// Real symmetric generator H_I / lambda over Fock levels 0..n_max for both
/// atomic levels. Only the upper triangle of the off-diagonal part is stored.
class HamiltonianMatrix {
public:
    struct Entry {
        std::size_t row;
        std::size_t col;
        double value;
    };

    HamiltonianMatrix(long n_max, std::vector<double> diagonal, std::vector<Entry> couplings)
        : n_max_(n_max), diagonal_(std::move(diagonal)), couplings_(std::move(couplings)) {}

    long n_max() const { return n_max_; }
    std::size_t dimension() const { return diagonal_.size(); }
    std::span<const double> diagonal() const { return diagonal_; }
    std::span<const Entry> couplings() const { return couplings_; }

    /// Matrix element <i|H|j>.
    double at(std::size_t i, std::size_t j) const {
        if (i >= dimension() || j >= dimension()) throw ConfigError("matrix index out of range");
        if (i == j) return diagonal_[i];
        const auto [r, c] = std::minmax(i, j);
        for (const auto& e : couplings_)
            if (e.row == r && e.col == c) return e.value;
        return 0.0;
    }
    double at(JointBasisIndex bra, JointBasisIndex ket) const { return at(bra.flat(), ket.flat()); }

    /// Row-major dense copy.
    std::vector<double> dense() const {
        const std::size_t d = dimension();
        std::vector<double> out(d * d, 0.0);
        for (std::size_t i = 0; i < d; ++i) out[i * d + i] = diagonal_[i];
        for (const auto& e : couplings_) {
            out[e.row * d + e.col] = e.value;
            out[e.col * d + e.row] = e.value;
        }
        return out;
    }

    /// Connected blocks of the coupling graph; each is invariant under H.
    std::vector<std::vector<std::size_t>> components() const {
        const std::size_t d = dimension();
        std::vector<std::size_t> parent(d);
        std::iota(parent.begin(), parent.end(), std::size_t{0});
        const auto find = [&](std::size_t x) {
            while (parent[x] != x) x = parent[x] = parent[parent[x]];
            return x;
        };
        for (const auto& e : couplings_)
            if (e.value != 0.0) parent[find(e.row)] = find(e.col);
        std::vector<std::vector<std::size_t>> groups;
        std::vector<long> slot(d, -1);
        for (std::size_t i = 0; i < d; ++i) {
            const std::size_t root = find(i);
            if (slot[root] < 0) {
                slot[root] = static_cast<long>(groups.size());
                groups.emplace_back();
            }
            groups[static_cast<std::size_t>(slot[root])].push_back(i);
        }
        return groups;
    }

private:
    long n_max_;
    std::vector<double> diagonal_;
    std::vector<Entry> couplings_;
};

namespace detail {

inline double coupling(long n, long m) {
    long double p = 1.0L;
    for (long k = n + 1; k <= n + m; ++k) p *= static_cast<long double>(k);
    return static_cast<double>(std::sqrt(p));
}

}  // namespace detail

/// Generator in scaled time T = lambda t:
///   <+,n|H|-,n+m> = sqrt((n+1)...(n+m)),
///   <+,n|H|+,n> = -n beta1 / lambda,  <-,n|H|-,n> = -n beta2 / lambda (MEHA).
inline HamiltonianMatrix build_generator(const ModelConfig& config, long n_max) {
    config.validate();
    if (n_max < config.m) throw ConfigError("generator needs n_max >= m");
    const auto levels = static_cast<std::size_t>(n_max + 1);
    std::vector<double> diagonal(2 * levels, 0.0);
    if (config.approach == Approach::meha) {
        for (long n = 0; n <= n_max; ++n) {
            diagonal[JointBasisIndex{Level::upper, n}.flat()] = -static_cast<double>(n) * config.beta1 / config.lambda;
            diagonal[JointBasisIndex{Level::lower, n}.flat()] = -static_cast<double>(n) * config.beta2 / config.lambda;
        }
    }
    std::vector<HamiltonianMatrix::Entry> couplings;
    for (long n = 0; n + config.m <= n_max; ++n) {
        const std::size_t up = JointBasisIndex{Level::upper, n}.flat();
        const std::size_t down = JointBasisIndex{Level::lower, n + config.m}.flat();
        couplings.push_back({std::min(up, down), std::max(up, down), detail::coupling(n, config.m)});
    }
    return {n_max, std::move(diagonal), std::move(couplings)};
}

/// Product state (cos th |+> + e^{-i phi} sin th |->) x sum_n C_n |n> in the
/// flat basis with Fock levels 0..n_max.
inline Vector product_state(const FieldState& field, const AtomState& atom, long n_max) {
    Vector psi(2 * static_cast<std::size_t>(n_max + 1));
    const complex lower = std::polar(std::sin(atom.theta()), -atom.phi());
    for (long n = 0; n <= n_max; ++n) {
        psi[JointBasisIndex{Level::upper, n}.flat()] = field.amplitude(n) * std::cos(atom.theta());
        psi[JointBasisIndex{Level::lower, n}.flat()] = field.amplitude(n) * lower;
    }
    return psi;
}

/// Flat vector of a JointState; its basis holds Fock levels 0..n_max + m.
inline Vector to_flat(const JointState& s) {
    const long levels = static_cast<long>(s.ground_levels());
    Vector psi(2 * static_cast<std::size_t>(levels));
    for (long n = 0; n < levels; ++n) {
        psi[JointBasisIndex{Level::upper, n}.flat()] = s.upper(n);
        psi[JointBasisIndex{Level::lower, n}.flat()] = s.ground(n);
    }
    return psi;
}

/// Inverse of to_flat for a field truncated at `field_n_max`. Upper levels
/// above field_n_max are outside the JointState layout and must be empty.
inline JointState from_flat(std::span<const complex> psi, const ModelConfig& config, long field_n_max, double T) {
    const long m = config.m;
    const long levels = field_n_max + m + 1;
    if (psi.size() != 2 * static_cast<std::size_t>(levels)) throw ConfigError("flat vector has the wrong dimension");
    JointState s;
    s.config = config;
    s.time = T;
    for (long n = 0; n <= field_n_max; ++n) {
        s.excited.push_back(psi[JointBasisIndex{Level::upper, n}.flat()]);
        s.coupled.push_back(psi[JointBasisIndex{Level::lower, n + m}.flat()]);
    }
    for (long j = 0; j < m; ++j) s.dark.push_back(psi[JointBasisIndex{Level::lower, j}.flat()]);
    return s;
}

/// Step-size control. A fixed step applies one dt everywhere. Otherwise each
/// invariant block gets its own fixed dt from a-priori RK4 error bounds on
/// an oscillation of frequency r (the block's Gershgorin radius) carrying
/// amplitude |c| over the horizon T:
///   phase:  |c| T r (r dt)^4 / 120           <= tolerance
///   norm:   |c|^2 T r (r dt)^5 / 72          <= norm_budget |c| / (4 sum|c|)
/// capped at r dt <= 0.5 and dt <= max_step.
struct StepPolicy {
    std::optional<double> fixed_step;
    double tolerance = 1e-7;
    double max_step = 0.05;
    /// Allowed change of the squared norm over the whole integration.
    double norm_budget = 1e-8;

    static StepPolicy fixed(double dt) {
        StepPolicy p;
        p.fixed_step = dt;
        return p;
    }
};

/// One classical RK4 step of i dpsi/dT = H psi written out by stages,
/// with H dense row-major of size k x k.
inline Vector rk4_step(std::span<const double> h, std::span<const complex> psi, double dt) {
    const std::size_t k = psi.size();
    const complex minus_i{0.0, -1.0};
    const auto deriv = [&](const Vector& y) {
        Vector out(k);
        for (std::size_t r = 0; r < k; ++r) {
            complex acc{};
            for (std::size_t c = 0; c < k; ++c) acc += h[r * k + c] * y[c];
            out[r] = minus_i * acc;
        }
        return out;
    };
    const auto shifted = [&](const Vector& d, double scale) {
        Vector y(psi.begin(), psi.end());
        for (std::size_t r = 0; r < k; ++r) y[r] += scale * d[r];
        return y;
    };
    const Vector start(psi.begin(), psi.end());
    const Vector k1 = deriv(start);
    const Vector k2 = deriv(shifted(k1, dt / 2));
    const Vector k3 = deriv(shifted(k2, dt / 2));
    const Vector k4 = deriv(shifted(k3, dt));
    Vector next = start;
    for (std::size_t r = 0; r < k; ++r) next[r] += dt / 6.0 * (k1[r] + 2.0 * k2[r] + 2.0 * k3[r] + k4[r]);
    return next;
}

namespace detail {

// For a linear time-invariant generator the four RK4 stages collapse to the
// step matrix R = I + A + A^2/2 + A^3/6 + A^4/24 with A = -i H dt.
inline Vector rk4_step_matrix(std::span<const double> h, std::size_t k, double dt) {
    Vector a(k * k);
    for (std::size_t i = 0; i < k * k; ++i) a[i] = complex{0.0, -dt * h[i]};
    const auto multiply = [k](const Vector& x, const Vector& y) {
        Vector out(k * k);
        for (std::size_t r = 0; r < k; ++r)
            for (std::size_t s = 0; s < k; ++s) {
                complex acc{};
                for (std::size_t c = 0; c < k; ++c) acc += x[r * k + c] * y[c * k + s];
                out[r * k + s] = acc;
            }
        return out;
    };
    // Horner: I + A(I + A/2(I + A/3(I + A/4)))
    Vector acc(k * k);
    for (std::size_t r = 0; r < k; ++r) acc[r * k + r] = 1.0;
    for (int order = 4; order >= 1; --order) {
        Vector term = multiply(a, acc);
        for (auto& v : term) v /= static_cast<double>(order);
        for (std::size_t r = 0; r < k; ++r) term[r * k + r] += 1.0;
        acc = std::move(term);
    }
    return acc;
}

inline void advance(const Vector& step, std::size_t k, Vector& y, long steps) {
    Vector next(k);
    for (long s = 0; s < steps; ++s) {
        for (std::size_t r = 0; r < k; ++r) {
            double re = 0.0;
            double im = 0.0;
            for (std::size_t c = 0; c < k; ++c) {
                const complex a = step[r * k + c];
                re += a.real() * y[c].real() - a.imag() * y[c].imag();
                im += a.real() * y[c].imag() + a.imag() * y[c].real();
            }
            next[r] = {re, im};
        }
        y.swap(next);
    }
}

}  // namespace detail

/// Integrate i dpsi/dT = H psi from T = 0 and return the state at each of
/// the non-decreasing `times`. Throws NumericBudgetError when the norm drifts
/// beyond policy.norm_budget.
inline std::vector<Vector> integrate_to(const HamiltonianMatrix& H, const Vector& initial,
                                        std::span<const double> times, const StepPolicy& policy = {}) {
    if (initial.size() != H.dimension()) throw ConfigError("initial state does not match the generator dimension");
    if (!std::is_sorted(times.begin(), times.end()) || (!times.empty() && times.front() < 0.0))
        throw ConfigError("integration times must be non-negative and non-decreasing");
    if (policy.fixed_step && !(*policy.fixed_step > 0.0)) throw ConfigError("step size must be positive");

    std::vector<Vector> out(times.size(), Vector(initial.size()));
    const double horizon = times.empty() ? 0.0 : times.back();

    const auto blocks = H.components();
    std::vector<double> weights(blocks.size(), 0.0);
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        for (std::size_t idx : blocks[b]) weights[b] += std::norm(initial[idx]);
        weights[b] = std::sqrt(weights[b]);
    }
    const double total_weight = std::accumulate(weights.begin(), weights.end(), 0.0);

    for (std::size_t b = 0; b < blocks.size(); ++b) {
        const auto& block = blocks[b];
        const double weight = weights[b];
        if (weight == 0.0) continue;  // stays exactly zero
        const std::size_t k = block.size();
        Vector y(k);
        for (std::size_t r = 0; r < k; ++r) y[r] = initial[block[r]];

        std::vector<double> h(k * k);
        double radius = 0.0;
        for (std::size_t r = 0; r < k; ++r) {
            double row = 0.0;
            for (std::size_t c = 0; c < k; ++c) {
                h[r * k + c] = H.at(block[r], block[c]);
                row += std::abs(h[r * k + c]);
            }
            radius = std::max(radius, row);
        }

        double dt = 0.0;
        if (policy.fixed_step) {
            dt = *policy.fixed_step;
        } else {
            dt = policy.max_step;
            if (radius > 0.0 && horizon > 0.0) {
                const double phase = std::pow(120.0 * policy.tolerance / (weight * horizon * radius), 0.25);
                const double norm =
                    std::pow(18.0 * policy.norm_budget / (weight * total_weight * horizon * radius), 0.2);
                dt = std::min(dt, std::min({0.5, phase, norm}) / radius);
            }
        }

        double now = 0.0;
        for (std::size_t i = 0; i < times.size(); ++i) {
            const double span = times[i] - now;
            if (span > 0.0) {
                const auto steps = static_cast<long>(std::ceil(span / dt - 1e-9));
                const auto step = detail::rk4_step_matrix(h, k, span / static_cast<double>(steps));
                detail::advance(step, k, y, steps);
                now = times[i];
            }
            for (std::size_t r = 0; r < k; ++r) out[i][block[r]] = y[r];
        }
    }

    double norm0 = 0.0;
    for (const auto& v : initial) norm0 += std::norm(v);
    for (std::size_t i = 0; i < out.size(); ++i) {
        double norm = 0.0;
        for (const auto& v : out[i]) norm += std::norm(v);
        if (!std::isfinite(norm) || std::abs(norm - norm0) > policy.norm_budget)
            throw NumericBudgetError("integrator norm drift " + mpjcm::detail::brief(norm - norm0) +
                                     " at T = " + mpjcm::detail::brief(times[i]));
    }
    return out;
}

/// Single-time convenience over integrate_to.
inline Vector integrate(const HamiltonianMatrix& H, const Vector& initial, double T, const StepPolicy& policy = {}) {
    const double times[] = {T};
    return integrate_to(H, initial, times, policy).front();
}

/// JointState in, JointState out; the basis is sized from the state's layout.
inline JointState integrate(const JointState& initial, double T, const StepPolicy& policy = {}) {
    const long field_n_max = static_cast<long>(initial.pairs()) - 1;
    const auto H = build_generator(initial.config, field_n_max + initial.m());
    const auto psi = integrate(H, to_flat(initial), T, policy);
    return from_flat(psi, initial.config, field_n_max, initial.time + T);
}

/// Integrate the product state of `field` and `atom` to every time in `times`.
inline std::vector<JointState> simulate(const FieldState& field, const AtomState& atom, const ModelConfig& config,
                                        std::span<const double> times, const StepPolicy& policy = {}) {
    const long n_basis = field.n_max() + config.m;
    const auto H = build_generator(config, n_basis);
    const auto states = integrate_to(H, product_state(field, atom, n_basis), times, policy);
    std::vector<JointState> out;
    out.reserve(states.size());
    for (std::size_t i = 0; i < states.size(); ++i)
        out.push_back(from_flat(states[i], config, field.n_max(), times[i]));
    return out;
}

/// Largest componentwise modulus difference over every amplitude.
inline double max_deviation(const JointState& a, const JointState& b) {
    if (a.excited.size() != b.excited.size() || a.coupled.size() != b.coupled.size() ||
        a.dark.size() != b.dark.size())
        throw ConfigError("max_deviation: joint states have different dimensions");
    double worst = 0.0;
    const auto scan = [&worst](const std::vector<complex>& x, const std::vector<complex>& y) {
        for (std::size_t i = 0; i < x.size(); ++i) worst = std::max(worst, std::abs(x[i] - y[i]));
    };
    scan(a.excited, b.excited);
    scan(a.coupled, b.coupled);
    scan(a.dark, b.dark);
    return worst;
}

}  // namespace mpjcm::oracle
