// Command-line front end: simulate, predict, check.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "mpjcm/commands.hpp"
#include "mpjcm/run_config.hpp"

namespace {

struct Overrides {
    std::optional<std::string> config;
    std::optional<std::string> state;
    std::optional<double> alpha;
    std::optional<int> k;
    std::optional<double> theta;
    std::optional<double> phi;
    std::optional<int> m;
    std::optional<std::string> approach;
    std::optional<double> beta1;
    std::optional<double> beta2;
    std::optional<double> lambda;
    std::optional<double> t_max;
    std::optional<int> steps;
    std::optional<std::string> nmax;
    std::optional<std::string> observables;
    std::optional<std::string> out;
    std::optional<int> workers;
};

void add_common(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--config", o.config, "JSON run configuration; flags override its keys");
    cmd->add_option("--state", o.state, "coherent | kphoton | orthogonal_even | even | odd");
    cmd->add_option("--alpha", o.alpha, "real coherent amplitude");
    cmd->add_option("--k", o.k, "photon spacing of a kphoton state");
    cmd->add_option("--theta", o.theta, "atomic superposition angle (rad)");
    cmd->add_option("--phi", o.phi, "atomic relative phase (rad)");
    cmd->add_option("--m", o.m, "photons per atomic transition");
    cmd->add_option("--approach", o.approach, "eha | meha");
    cmd->add_option("--beta1", o.beta1, "Stark shift of the upper level (meha)");
    cmd->add_option("--beta2", o.beta2, "Stark shift of the lower level (meha)");
    cmd->add_option("--lambda", o.lambda, "atom-field coupling");
    cmd->add_option("--t-max", o.t_max, "end of the scaled-time grid");
    cmd->add_option("--steps", o.steps, "number of grid points");
    cmd->add_option("--nmax", o.nmax, "Fock truncation level or 'auto'");
    cmd->add_option("--observables", o.observables, "comma-separated observable names");
    cmd->add_option("--out", o.out, "CSV output path, '-' for stdout");
    cmd->add_option("--workers", o.workers, "threads used for the time grid");
}

mpjcm::RunConfig resolve(const Overrides& o) {
    mpjcm::RunConfig cfg = o.config ? mpjcm::load_run_config(*o.config) : mpjcm::RunConfig{};
    if (o.state) cfg.state.kind = *o.state;
    if (o.alpha) cfg.state.alpha = *o.alpha;
    if (o.k) cfg.state.k = *o.k;
    if (o.theta) cfg.atom.theta = *o.theta;
    if (o.phi) cfg.atom.phi = *o.phi;
    if (o.m) cfg.model.m = *o.m;
    if (o.approach) cfg.model.approach = *o.approach;
    if (o.beta1) cfg.model.beta1 = *o.beta1;
    if (o.beta2) cfg.model.beta2 = *o.beta2;
    if (o.lambda) cfg.model.lambda = *o.lambda;
    if (o.t_max) cfg.grid.t_max = *o.t_max;
    if (o.steps) cfg.grid.steps = *o.steps;
    if (o.nmax) {
        if (*o.nmax == "auto") {
            cfg.n_max.reset();
        } else {
            try {
                std::size_t used = 0;
                cfg.n_max = std::stoi(*o.nmax, &used);
                if (used != o.nmax->size()) throw std::invalid_argument("trailing characters");
            } catch (const std::exception&) {
                throw mpjcm::ConfigError("--nmax: expected an integer or 'auto', got '" + *o.nmax + "'");
            }
        }
    }
    if (o.observables) cfg.observables = mpjcm::split_names(*o.observables);
    if (o.out) cfg.output = *o.out;
    if (o.workers) cfg.workers = *o.workers;
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multiphoton Jaynes-Cummings simulator: fluctuation factors and revival-collapse diagnostics"};
    app.require_subcommand(1);

    Overrides sim_opts;
    Overrides pred_opts;
    Overrides check_opts;
    std::optional<double> dt;
    auto* simulate = app.add_subcommand("simulate", "evaluate observables on a time grid and write CSV");
    auto* predict = app.add_subcommand("predict", "analytic revival times, proportionality factors, trapping");
    auto* check = app.add_subcommand("check", "compare closed-form evolution with the integrated generator");
    add_common(simulate, sim_opts);
    add_common(predict, pred_opts);
    add_common(check, check_opts);
    check->add_option("--dt", dt, "uniform integrator step (default: per-block a-priori steps)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? mpjcm::kExitOk : mpjcm::kExitConfigError;
    }

    try {
        if (*simulate) return mpjcm::run_simulate(resolve(sim_opts), std::cout, std::cerr);
        if (*predict) return mpjcm::run_predict(resolve(pred_opts), std::cout, std::cerr);
        mpjcm::CheckOptions options;
        options.dt = dt;
        return mpjcm::run_check(resolve(check_opts), options, std::cout, std::cerr);
    } catch (const mpjcm::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return mpjcm::kExitConfigError;
    }
}
