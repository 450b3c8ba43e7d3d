#pragma once

// The simulate / predict / check commands behind the command-line tool.
// Each returns a process exit code and never lets a library error escape.

#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "mpjcm/csv.hpp"
#include "mpjcm/dynamics.hpp"
#include "mpjcm/error.hpp"
#include "mpjcm/observables.hpp"
#include "mpjcm/oracle.hpp"
#include "mpjcm/run_config.hpp"
#include "mpjcm/states.hpp"
#include "mpjcm/timeseries.hpp"

namespace mpjcm {

enum ExitCode : int {
    kExitOk = 0,
    kExitCheckFailed = 1,
    kExitConfigError = 2,
    kExitNumericBudget = 3,
};

namespace detail {

inline std::string join(const std::vector<std::string>& names) {
    std::string out;
    for (const auto& n : names) out += (out.empty() ? "" : ",") + n;
    return out;
}

inline std::vector<std::pair<std::string, std::string>> describe(const RunConfig& cfg, const FieldState& field) {
    return {
        {"state.kind", cfg.state.kind},
        {"state.alpha", format_number(cfg.state.alpha)},
        {"state.k", std::to_string(cfg.state.k)},
        {"atom.theta", format_number(cfg.atom.theta)},
        {"atom.phi", format_number(cfg.atom.phi)},
        {"model.m", std::to_string(cfg.model.m)},
        {"model.approach", cfg.model.approach},
        {"model.beta1", format_number(cfg.model.beta1)},
        {"model.beta2", format_number(cfg.model.beta2)},
        {"model.lambda", format_number(cfg.model.lambda)},
        {"grid.t_max", format_number(cfg.grid.t_max)},
        {"grid.steps", std::to_string(cfg.grid.steps)},
        {"truncation.n_max", std::to_string(field.n_max())},
        {"truncation.policy", cfg.n_max ? "fixed" : "auto"},
        {"observables", join(cfg.observables)},
        {"field.label", field.label()},
        {"field.mean_photon", format_number(mean_photon(field))},
    };
}

template <typename Body>
int guarded(std::ostream& err, Body&& body) {
    try {
        return body();
    } catch (const NumericBudgetError& e) {
        err << "numeric budget violated: " << e.what() << '\n';
        return kExitNumericBudget;
    } catch (const ConfigError& e) {
        err << "configuration error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const DomainError& e) {
        err << "configuration error: " << e.what() << '\n';
        return kExitConfigError;
    }
}

}  // namespace detail

/// Evaluate the configured observables on the time grid and write CSV to
/// cfg.output ("-" selects `out`).
inline int run_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    return detail::guarded(err, [&] {
        cfg.validate();
        const auto field = make_field(cfg);
        const auto atom = make_atom(cfg);
        const auto model = make_model(cfg);

        auto series = sweep(field, atom, model, cfg.grid.t_max, cfg.grid.steps, cfg.observables, cfg.workers);
        for (double T : series.t_grid) {
            const double drift = std::abs(evolve(field, atom, model, T).norm_squared() - 1.0);
            if (drift > 1e-10)
                throw NumericBudgetError("norm drift " + format_number(drift) + " at T = " + format_number(T));
        }
        series.metadata = detail::describe(cfg, field);
        series.metadata.insert(series.metadata.begin(), {"command", "simulate"});

        if (cfg.output == "-") {
            write_csv(out, series);
        } else {
            std::ofstream file(cfg.output, std::ios::binary);
            if (!file) throw ConfigError("cannot open output file '" + cfg.output + "'");
            write_csv(file, series);
            if (!file) throw ConfigError("failed writing '" + cfg.output + "'");
        }
        return static_cast<int>(kExitOk);
    });
}

/// Analytic predictions for the configured state: revival times, the
/// proportionality factors, trapping defect and natural-phenomenon class.
inline int run_predict(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    return detail::guarded(err, [&] {
        const auto field = make_field(cfg);
        const int m = cfg.model.m;
        if (m < 1) throw ConfigError("model.m: must be >= 1");
        const double n0 = mean_photon(field);
        const int spacing = support_spacing(field, 1e-300);

        const auto line = [&out](const std::string& key, const std::string& value) {
            out << key << " = " << value << '\n';
        };
        line("state", field.label());
        line("n_max", std::to_string(field.n_max()));
        line("mean_photon", format_number(n0));
        line("support_spacing", std::to_string(spacing));
        line("natural_phenomenon", natural_phenomenon_class(field, 1e-14) ? "true" : "false");
        if (n0 > 0.0) {
            const double coherent_tr = revival_time(n0, 1);
            line("revival_time.spacing_1", format_number(coherent_tr));
            line("revival_time.asymptotic_spacing_1", format_number(2.0 * std::numbers::pi * std::sqrt(n0)));
            if (spacing > 1) {
                line("revival_time.spacing_" + std::to_string(spacing), format_number(revival_time(n0, spacing)));
                line("revival_time.spacing_1_over_" + std::to_string(spacing),
                     format_number(coherent_tr / spacing));
            }
            line("f_normal_exact", format_number(f_normal_exact(std::lround(n0), m)));
            line("f_asymptotic.order_1", format_number(f_asymptotic(n0, m, 1)));
            line("f_asymptotic.order_2", format_number(f_asymptotic(n0, m, 2)));
        } else {
            line("revival_time.spacing_1", "undefined");
        }
        line("trapping_defect.m_" + std::to_string(m), format_number(trapping_defect(field, m)));
        return static_cast<int>(kExitOk);
    });
}

struct CheckOptions {
    /// Uniform integrator step; empty selects the per-block a-priori steps.
    std::optional<double> dt;
    std::vector<double> times{1.0, 5.0, 20.0};
    double deviation_budget = 1e-6;
};

/// Compare closed-form amplitudes with the integrated generator and run the
/// invariant checks on the configured setup. Prints one line per check.
inline int run_check(const RunConfig& cfg, const CheckOptions& options, std::ostream& out, std::ostream& err) {
    return detail::guarded(err, [&] {
        cfg.validate();
        const auto field = make_field(cfg);
        const auto atom = make_atom(cfg);
        const auto model = make_model(cfg);
        bool all_ok = true;

        const auto report = [&](const std::string& name, double value, double budget) {
            const bool ok = std::isfinite(value) && value <= budget;
            all_ok = all_ok && ok;
            out << (ok ? "PASS " : "FAIL ") << name << " = " << format_number(value) << " (budget "
                << format_number(budget) << ")\n";
        };

        oracle::StepPolicy policy;
        if (options.dt) policy = oracle::StepPolicy::fixed(*options.dt);
        try {
            const auto integrated = oracle::simulate(field, atom, model, options.times, policy);
            double worst = 0.0;
            for (std::size_t i = 0; i < options.times.size(); ++i)
                worst = std::max(worst, oracle::max_deviation(evolve(field, atom, model, options.times[i]),
                                                              integrated[i]));
            report("oracle_max_deviation", worst, options.deviation_budget);
        } catch (const NumericBudgetError& e) {
            all_ok = false;
            out << "FAIL oracle_integration: " << e.what() << '\n';
        }

        const auto stark_free = ModelConfig::meha(model.m, 0.0, 0.0, 1.0);
        double reduction = 0.0;
        for (double T : options.times)
            reduction = std::max(reduction, oracle::max_deviation(evolve_meha(field, atom, stark_free, T),
                                                                  evolve_eha(field, atom, ModelConfig::eha(model.m), T)));
        report("meha_zero_stark_vs_eha", reduction, 1e-12);

        const auto grid = uniform_grid(cfg.grid.t_max, cfg.grid.steps);
        double norm_drift = 0.0;
        double excitation_drift = 0.0;
        double heisenberg_normal = 0.0;
        double heisenberg_squared = 0.0;
        std::optional<double> excitation0;
        for (double T : grid) {
            const auto joint = evolve(field, atom, model, T);
            norm_drift = std::max(norm_drift, std::abs(joint.norm_squared() - 1.0));
            const double excitation = mean_photon(joint) + 0.5 * model.m * atomic_inversion(joint);
            if (!excitation0) excitation0 = excitation;
            excitation_drift = std::max(excitation_drift, std::abs(excitation - *excitation0));
            const auto normal = normal_fluctuations(joint);
            heisenberg_normal = std::max(heisenberg_normal, normal.uncertainty_bound() - normal.uncertainty_product());
            const auto squared = squared_fluctuations(joint);
            heisenberg_squared =
                std::max(heisenberg_squared, squared.uncertainty_bound() - squared.uncertainty_product());
        }
        report("norm_drift", norm_drift, 1e-10);
        report("excitation_drift", excitation_drift, 1e-8);
        report("heisenberg_normal_violation", heisenberg_normal, 1e-12);
        report("heisenberg_squared_violation", heisenberg_squared, 1e-10);

        out << (all_ok ? "check passed" : "check FAILED") << '\n';
        return static_cast<int>(all_ok ? kExitOk : kExitCheckFailed);
    });
}

}  // namespace mpjcm
