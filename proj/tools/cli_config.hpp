// cli_config.hpp: run configuration, JSON round trip and figure presets

#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include <lscar/lscar.hpp>

namespace lscar::cli {

using json = nlohmann::ordered_json;

struct ConfigError : std::runtime_error {
    ConfigError(const std::string& field, const std::string& what)
        : std::runtime_error("invalid config field '" + field + "': " + what), field(field) {}
    std::string field;
};

inline const std::set<std::string>& known_outputs() {
    static const std::set<std::string> s = {"spectrum", "scars", "size", "entanglement", "stats"};
    return s;
}

inline const std::map<std::string, double>& default_tolerances() {
    static const std::map<std::string, double> t = {
        {"cluster", 1e-7},  // scar candidate window, relative to ||L||_inf
        {"sv", 1e-8},       // scar singular-value threshold
        {"gram", 1e12},     // Gram condition number flagged as ill-conditioned
        {"residual", 1e-8}, // eigenpair residual, relative to max(1, ||L||_inf)
        {"zero", 1e-8},     // split sizes below this count as vanishing
        {"imag", 1e-8},     // |Re(lambda + mu N)| below this counts as purely imaginary
    };
    return t;
}

struct RunConfig {
    ModelConfig model;
    int realizations = 1;
    std::set<std::string> outputs = {"spectrum"};
    std::map<std::string, double> tolerances = default_tolerances();
    std::string output_dir = "out";
    int workers = 1;
    std::string partition = "both"; // entanglement: intersite | intrasite | both
    bool compute = true;            // false: stages may only consume cached artifacts
    int min_count = 1000;           // bin population for the smooth fits

    double tol(const std::string& name) const { return tolerances.at(name); }

    RealizationOptions realization_options() const {
        RealizationOptions o;
        o.eig.residual_tol = tol("residual");
        o.detection.tol_cluster = tol("cluster");
        o.detection.tol_sv = tol("sv");
        o.detection.max_gram_condition = tol("gram");
        return o;
    }

    void validate() const {
        if (realizations < 1) throw ConfigError("realizations", "must be at least 1");
        if (workers < 1) throw ConfigError("workers", "must be at least 1");
        if (!(model.mu >= 0.0)) throw ConfigError("mu", "must be non-negative");
        if (model.fermionic()) {
            if (model.N < 2 || model.N % 2 != 0 || model.N > 12)
                throw ConfigError("N", "SYK models need an even number of Majoranas between 2 and 12");
            if (model.q < 2 || model.q % 2 != 0 || model.q > model.N)
                throw ConfigError("q", "must be even with 2 <= q <= N");
            if (model.scheme == VectorizationScheme::SpinTensor)
                throw ConfigError("scheme", "SYK models use 'standard' or 'pseudo-fermion'");
        } else {
            if (model.N < 2 || model.N > 6) throw ConfigError("N", "XXZ chains are limited to 2..6 sites");
            if (!(model.h >= 0.0)) throw ConfigError("h", "must be non-negative");
            if (model.scheme != VectorizationScheme::SpinTensor) throw ConfigError("scheme", "XXZ uses 'spin'");
        }
        for (const auto& o : outputs)
            if (!known_outputs().count(o)) throw ConfigError("outputs", "unknown output '" + o + "'");
        for (const auto& [k, v] : tolerances) {
            if (!default_tolerances().count(k)) throw ConfigError("tolerances." + k, "unknown tolerance");
            if (!(v > 0.0)) throw ConfigError("tolerances." + k, "must be positive");
        }
        if (partition != "intersite" && partition != "intrasite" && partition != "both")
            throw ConfigError("partition", "expected intersite, intrasite or both");
        if (outputs.count("stats") && realizations < 2) throw ConfigError("realizations", "stats needs at least 2");
        if (min_count < 2) throw ConfigError("min_count", "must be at least 2");
    }
};

/// Parameters that determine per-realization artifacts (used as the cache key).
inline json model_json(const RunConfig& c) {
    json j;
    j["model"] = to_string(c.model.model);
    j["N"] = c.model.N;
    if (c.model.fermionic()) {
        j["q"] = c.model.q;
    } else {
        j["J"] = c.model.J;
        j["delta"] = c.model.Delta;
        j["h"] = c.model.h;
    }
    j["mu"] = c.model.mu;
    j["scheme"] = to_string(c.model.scheme);
    j["seed"] = c.model.seed;
    j["tolerances"] = c.tolerances;
    return j;
}

/// Everything that determines output content; the output directory and worker count do not.
inline json to_json(const RunConfig& c) {
    json j = model_json(c);
    j["realizations"] = c.realizations;
    j["outputs"] = c.outputs;
    j["partition"] = c.partition;
    j["min_count"] = c.min_count;
    return j;
}

namespace detail {

template <class T>
void read_field(const json& j, const char* key, T& out) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(key, e.what());
    }
}

} // namespace detail

/// Fields absent from `j` keep their current values. Switching to XXZ also switches the scheme.
inline void apply_json(RunConfig& c, const json& j) {
    if (!j.is_object()) throw ConfigError("<root>", "config must be a JSON object");
    static const std::set<std::string> keys = {"model",   "N",          "q",       "mu",          "J",
                                               "delta",   "h",          "scheme",  "realizations", "seed",
                                               "outputs", "tolerances", "output_dir", "workers", "partition",
                                               "min_count"};
    for (const auto& [k, v] : j.items())
        if (!keys.count(k)) throw ConfigError(k, "unknown field");
    if (j.contains("model")) {
        std::string m;
        detail::read_field(j, "model", m);
        try {
            c.model.model = parse_model(m);
        } catch (const std::invalid_argument& e) {
            throw ConfigError("model", e.what());
        }
        c.model.scheme = c.model.fermionic() ? VectorizationScheme::PseudoFermion : VectorizationScheme::SpinTensor;
        if (!j.contains("N")) c.model.N = c.model.fermionic() ? 12 : 6;
    }
    detail::read_field(j, "N", c.model.N);
    detail::read_field(j, "q", c.model.q);
    detail::read_field(j, "mu", c.model.mu);
    detail::read_field(j, "J", c.model.J);
    detail::read_field(j, "delta", c.model.Delta);
    detail::read_field(j, "h", c.model.h);
    if (j.contains("scheme")) {
        std::string s;
        detail::read_field(j, "scheme", s);
        try {
            c.model.scheme = parse_scheme(s);
        } catch (const std::invalid_argument& e) {
            throw ConfigError("scheme", e.what());
        }
    }
    detail::read_field(j, "realizations", c.realizations);
    detail::read_field(j, "seed", c.model.seed);
    if (j.contains("outputs")) {
        std::set<std::string> o;
        detail::read_field(j, "outputs", o);
        c.outputs = o;
    }
    if (j.contains("tolerances")) {
        std::map<std::string, double> t;
        detail::read_field(j, "tolerances", t);
        for (const auto& [k, v] : t) c.tolerances[k] = v;
    }
    detail::read_field(j, "output_dir", c.output_dir);
    detail::read_field(j, "workers", c.workers);
    detail::read_field(j, "partition", c.partition);
    detail::read_field(j, "min_count", c.min_count);
}

struct FigurePreset {
    std::string id;
    std::string description;
    json config;
};

/// Parameter presets for each reproducible figure panel.
inline const std::vector<FigurePreset>& figure_presets() {
    static const std::vector<FigurePreset> p = {
        {"fig1-left", "Majorana SYK spectrum with scars, N=12", {{"model", "majorana-syk"}, {"outputs", {"spectrum", "scars"}}}},
        {"fig1-middle", "complex SYK spectrum with scars, N=12", {{"model", "complex-syk"}, {"outputs", {"spectrum", "scars"}}}},
        {"fig1-right", "XXZ spectrum with U(1) scars, N=6", {{"model", "xxz"}, {"N", 6}, {"outputs", {"spectrum", "scars"}}}},
        {"fig2", "Majorana SYK operator size and variance", {{"model", "majorana-syk"}, {"outputs", {"size", "scars"}}}},
        {"fig3", "Majorana SYK even-odd size moments", {{"model", "majorana-syk"}, {"outputs", {"size", "scars"}}}},
        {"fig4", "complex SYK operator size and variance", {{"model", "complex-syk"}, {"outputs", {"size", "scars"}}}},
        {"fig5", "complex SYK even-odd size moments", {{"model", "complex-syk"}, {"outputs", {"size", "scars"}}}},
        {"fig6", "complex SYK normalized split-size histogram, 200 realizations",
         {{"model", "complex-syk"}, {"realizations", 200}, {"min_count", 200}, {"outputs", {"size", "stats"}}}},
        {"fig7", "Majorana SYK entanglement entropy", {{"model", "majorana-syk"}, {"outputs", {"entanglement", "scars"}}}},
        {"fig8", "complex SYK entanglement entropy", {{"model", "complex-syk"}, {"outputs", {"entanglement", "scars"}}}},
        {"fig9", "XXZ sizes and normalized X+Z size histogram, 1000 realizations",
         {{"model", "xxz"}, {"N", 6}, {"realizations", 1000}, {"outputs", {"spectrum", "size", "stats"}}}},
        {"fig10", "XXZ entanglement entropy", {{"model", "xxz"}, {"N", 6}, {"outputs", {"entanglement", "scars"}}}},
    };
    return p;
}

inline const FigurePreset& find_preset(const std::string& id) {
    for (const auto& p : figure_presets())
        if (p.id == id) return p;
    std::string known;
    for (const auto& p : figure_presets()) known += (known.empty() ? "" : ", ") + p.id;
    throw ConfigError("figure", "unknown figure id '" + id + "' (known: " + known + ")");
}

} // namespace lscar::cli
