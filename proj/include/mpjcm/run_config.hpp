#pragma once

// Run configuration shared by the command-line front end: a JSON document
// with fixed key paths, plus the state/model factories it resolves to.

#include <algorithm>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mpjcm/dynamics.hpp"
#include "mpjcm/error.hpp"
#include "mpjcm/states.hpp"
#include "mpjcm/timeseries.hpp"

namespace mpjcm {

struct RunConfig {
    struct State {
        std::string kind = "coherent";  // coherent | kphoton | orthogonal_even | even | odd
        double alpha = 5.0;
        int k = 1;
    } state;
    struct Atom {
        double theta = 0.0;
        double phi = 0.0;
    } atom;
    struct Model {
        int m = 1;
        std::string approach = "eha";
        double beta1 = 0.0;
        double beta2 = 0.0;
        double lambda = 1.0;
    } model;
    struct Grid {
        double t_max = 60.0;
        int steps = 601;
    } grid;
    std::optional<int> n_max;  // empty = automatic
    std::vector<std::string> observables{"inversion"};
    std::string output = "-";
    int workers = 1;

    void validate() const;
};

inline const std::vector<std::string>& state_kinds() {
    static const std::vector<std::string> kinds{"coherent", "kphoton", "orthogonal_even", "even", "odd"};
    return kinds;
}

inline void RunConfig::validate() const {
    const auto& kinds = state_kinds();
    if (std::find(kinds.begin(), kinds.end(), state.kind) == kinds.end())
        throw ConfigError("state.kind: unknown state kind '" + state.kind + "'");
    if (!(state.alpha >= 0.0)) throw ConfigError("state.alpha: must be non-negative");
    if (state.k < 1) throw ConfigError("state.k: must be >= 1");
    if (model.approach != "eha" && model.approach != "meha")
        throw ConfigError("model.approach: expected 'eha' or 'meha', got '" + model.approach + "'");
    if (model.m < 1) throw ConfigError("model.m: must be >= 1");
    if (grid.steps < 2) throw ConfigError("grid.steps: need at least two grid points");
    if (!(grid.t_max > 0.0)) throw ConfigError("grid.t_max: must be positive");
    if (n_max && *n_max < 0) throw ConfigError("truncation.n_max: must be non-negative");
    if (observables.empty()) throw ConfigError("observables: list is empty");
    for (const auto& name : observables)
        if (!is_observable(name)) throw ConfigError("observables: unknown observable '" + name + "'");
    if (workers < 1) throw ConfigError("workers: must be >= 1");
}

namespace detail {

using nlohmann::json;

inline void reject_unknown(const json& node, const std::string& path, std::initializer_list<const char*> allowed) {
    if (!node.is_object()) throw ConfigError(path + ": expected an object");
    for (const auto& [key, value] : node.items()) {
        const bool known = std::any_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; });
        if (!known) throw ConfigError("unknown configuration key '" + (path.empty() ? key : path + "." + key) + "'");
    }
}

template <typename T>
void read(const json& node, const char* key, const std::string& path, T& out) {
    if (!node.contains(key)) return;
    try {
        out = node.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(path + "." + key + ": wrong value type");
    }
}

}  // namespace detail

/// Parse a configuration document. Missing keys keep their defaults;
/// unknown keys are rejected.
inline RunConfig parse_run_config(const std::string& text) {
    using detail::json;
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("configuration is not valid JSON: ") + e.what());
    }
    detail::reject_unknown(doc, "", {"state", "atom", "model", "grid", "truncation", "observables", "output", "workers"});

    RunConfig cfg;
    if (doc.contains("state")) {
        const auto& s = doc["state"];
        detail::reject_unknown(s, "state", {"kind", "alpha", "k"});
        detail::read(s, "kind", "state", cfg.state.kind);
        detail::read(s, "alpha", "state", cfg.state.alpha);
        detail::read(s, "k", "state", cfg.state.k);
    }
    if (doc.contains("atom")) {
        const auto& a = doc["atom"];
        detail::reject_unknown(a, "atom", {"theta", "phi"});
        detail::read(a, "theta", "atom", cfg.atom.theta);
        detail::read(a, "phi", "atom", cfg.atom.phi);
    }
    if (doc.contains("model")) {
        const auto& m = doc["model"];
        detail::reject_unknown(m, "model", {"m", "approach", "beta1", "beta2", "lambda"});
        detail::read(m, "m", "model", cfg.model.m);
        detail::read(m, "approach", "model", cfg.model.approach);
        detail::read(m, "beta1", "model", cfg.model.beta1);
        detail::read(m, "beta2", "model", cfg.model.beta2);
        detail::read(m, "lambda", "model", cfg.model.lambda);
    }
    if (doc.contains("grid")) {
        const auto& g = doc["grid"];
        detail::reject_unknown(g, "grid", {"t_max", "steps"});
        detail::read(g, "t_max", "grid", cfg.grid.t_max);
        detail::read(g, "steps", "grid", cfg.grid.steps);
    }
    if (doc.contains("truncation")) {
        const auto& t = doc["truncation"];
        detail::reject_unknown(t, "truncation", {"n_max"});
        if (t.contains("n_max")) {
            const auto& v = t["n_max"];
            if (v.is_string() && v.get<std::string>() == "auto") cfg.n_max.reset();
            else if (v.is_number_integer()) cfg.n_max = v.get<int>();
            else throw ConfigError("truncation.n_max: expected an integer or \"auto\"");
        }
    }
    detail::read(doc, "observables", "", cfg.observables);
    detail::read(doc, "output", "", cfg.output);
    detail::read(doc, "workers", "", cfg.workers);
    return cfg;
}

inline RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read configuration file '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_run_config(buffer.str());
}

/// Comma-separated observable list, whitespace ignored.
inline std::vector<std::string> split_names(const std::string& list) {
    std::vector<std::string> names;
    std::string current;
    for (char c : list + ",") {
        if (c == ',') {
            if (!current.empty()) names.push_back(current);
            current.clear();
        } else if (c != ' ' && c != '\t') {
            current += c;
        }
    }
    return names;
}

inline ModelConfig make_model(const RunConfig& cfg) {
    ModelConfig model;
    model.m = cfg.model.m;
    model.approach = cfg.model.approach == "meha" ? Approach::meha : Approach::eha;
    model.beta1 = cfg.model.beta1;
    model.beta2 = cfg.model.beta2;
    model.lambda = cfg.model.lambda;
    model.validate();
    return model;
}

inline AtomState make_atom(const RunConfig& cfg) { return {cfg.atom.theta, cfg.atom.phi}; }

inline FieldState make_field(const RunConfig& cfg) {
    const Truncation trunc{cfg.n_max, cfg.model.m};
    const auto& s = cfg.state;
    if (s.kind == "coherent") return coherent_state(s.alpha, trunc);
    if (s.kind == "kphoton") return k_photon_coherent_state(s.alpha, s.k, trunc);
    if (s.kind == "orthogonal_even") return orthogonal_even_coherent_state(s.alpha, trunc);
    if (s.kind == "even") return parity_coherent_state(s.alpha, Parity::even, trunc);
    if (s.kind == "odd") return parity_coherent_state(s.alpha, Parity::odd, trunc);
    throw ConfigError("state.kind: unknown state kind '" + s.kind + "'");
}

}  // namespace mpjcm
