#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <exception>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include "mpjcm/dynamics.hpp"
#include "mpjcm/error.hpp"
#include "mpjcm/observables.hpp"
#include "mpjcm/states.hpp"

namespace mpjcm {

/// Uniform time grid with named observable columns.
struct TimeSeries {
    std::vector<double> t_grid;
    std::vector<std::pair<std::string, std::vector<double>>> columns;
    std::vector<std::pair<std::string, std::string>> metadata;

    const std::vector<double>& column(std::string_view name) const {
        for (const auto& [key, values] : columns)
            if (key == name) return values;
        throw ConfigError("no column named '" + std::string(name) + "'");
    }
};

inline constexpr std::array<std::string_view, 13> kObservableNames = {
    "inversion", "mean_photon", "F1", "S1", "F2", "S2", "Q1",
    "Q2", "Re_a", "Im_a", "Re_a2", "Im_a2", "uncertainty_product",
};

inline bool is_observable(std::string_view name) {
    return std::find(kObservableNames.begin(), kObservableNames.end(), name) != kObservableNames.end();
}

/// T_i = i t_max / (steps - 1), i = 0..steps-1.
inline std::vector<double> uniform_grid(double t_max, int steps) {
    if (steps < 2) throw ConfigError("a time grid needs at least two points");
    if (!(t_max > 0.0) || !std::isfinite(t_max)) throw ConfigError("t_max must be positive so the grid increases");
    std::vector<double> grid(static_cast<std::size_t>(steps));
    for (int i = 0; i < steps; ++i) grid[static_cast<std::size_t>(i)] = t_max * i / (steps - 1);
    return grid;
}

namespace detail {

// Evaluate every requested observable at one instant.
inline std::vector<double> evaluate_point(const FieldState& field, const AtomState& atom, const ModelConfig& config,
                                          const std::vector<std::string>& names, double T) {
    bool need_joint = false;
    for (const auto& name : names)
        if (name != "Q1" && name != "Q2") need_joint = true;

    JointState joint;
    if (need_joint) joint = evolve(field, atom, config, T);

    std::optional<FluctuationPair> normal;
    std::optional<FluctuationPair> squared;
    std::optional<complex> a;
    std::optional<complex> a2;
    const auto get_normal = [&] { return normal ? *normal : *(normal = normal_fluctuations(joint)); };
    const auto get_squared = [&] { return squared ? *squared : *(squared = squared_fluctuations(joint)); };
    const auto get_a = [&] { return a ? *a : *(a = moment(joint, 1, 0)); };
    const auto get_a2 = [&] { return a2 ? *a2 : *(a2 = moment(joint, 2, 0)); };

    std::vector<double> out;
    out.reserve(names.size());
    for (const auto& name : names) {
        if (name == "inversion") out.push_back(atomic_inversion(joint));
        else if (name == "mean_photon") out.push_back(mean_photon(joint));
        else if (name == "F1") out.push_back(get_normal().f);
        else if (name == "S1") out.push_back(get_normal().s);
        else if (name == "F2") out.push_back(get_squared().f);
        else if (name == "S2") out.push_back(get_squared().s);
        else if (name == "Q1") out.push_back(rescaled_q1(field, atom, T));
        else if (name == "Q2") out.push_back(rescaled_q2(field, atom, T));
        else if (name == "Re_a") out.push_back(get_a().real());
        else if (name == "Im_a") out.push_back(get_a().imag());
        else if (name == "Re_a2") out.push_back(get_a2().real());
        else if (name == "Im_a2") out.push_back(get_a2().imag());
        else if (name == "uncertainty_product") out.push_back(get_normal().uncertainty_product());
        else throw ConfigError("unknown observable '" + name + "'");
    }
    return out;
}

}  // namespace detail

/// Evaluate `names` on a uniform grid over [0, t_max]. Q1 and Q2 always use
/// the three-photon model and ignore `config`. With workers > 1 the grid is
/// split across threads; every point owns its output slot, so the result
/// does not depend on the worker count.
inline TimeSeries sweep(const FieldState& field, const AtomState& atom, const ModelConfig& config, double t_max,
                        int steps, const std::vector<std::string>& names, int workers = 1) {
    config.validate();
    if (names.empty()) throw ConfigError("no observables requested");
    for (const auto& name : names)
        if (!is_observable(name)) throw ConfigError("unknown observable '" + name + "'");

    TimeSeries series;
    series.t_grid = uniform_grid(t_max, steps);
    const std::size_t points = series.t_grid.size();
    std::vector<std::vector<double>> rows(points);

    const auto run = [&](std::size_t begin, std::size_t stride) {
        for (std::size_t i = begin; i < points; i += stride)
            rows[i] = detail::evaluate_point(field, atom, config, names, series.t_grid[i]);
    };
    workers = std::clamp(workers, 1, static_cast<int>(points));
    if (workers == 1) {
        run(0, 1);
    } else {
        std::vector<std::jthread> pool;
        std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                try {
                    run(static_cast<std::size_t>(w), static_cast<std::size_t>(workers));
                } catch (...) {
                    errors[static_cast<std::size_t>(w)] = std::current_exception();
                }
            });
        pool.clear();
        for (auto& e : errors)
            if (e) std::rethrow_exception(e);
    }

    for (std::size_t k = 0; k < names.size(); ++k) {
        std::vector<double> column(points);
        for (std::size_t i = 0; i < points; ++i) column[i] = rows[i][k];
        series.columns.emplace_back(names[k], std::move(column));
    }
    return series;
}

}  // namespace mpjcm
