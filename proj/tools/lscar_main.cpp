// lscar: command-line driver for spectra, scars, sizes, entanglement and ensemble statistics

#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "cli_run.hpp"

extern "C" void openblas_set_num_threads(int);

namespace {

using namespace lscar;
using namespace lscar::cli;

struct Flags {
    std::string config_file;
    std::string model, scheme, out, partition, split;
    int N = 0, q = 0, realizations = 0, workers = 0, min_count = 0;
    double mu = 0, J = 0, delta = 0, h = 0;
    std::uint64_t seed = 0;
    std::vector<std::string> outputs;
    std::map<std::string, double> tol;
    bool no_compute = false;
    bool quiet = false;
};

struct Bound {
    CLI::App* app;
    std::map<std::string, CLI::Option*> opt;
    bool given(const std::string& name) const {
        const auto it = opt.find(name);
        return it != opt.end() && it->second->count() > 0;
    }
};

Bound add_common(CLI::App* sub, Flags& f) {
    Bound b{sub, {}};
    b.opt["config"] = sub->add_option("--config", f.config_file, "JSON config file (flags override its fields)")
                          ->check(CLI::ExistingFile);
    b.opt["model"] = sub->add_option("--model", f.model, "majorana-syk | complex-syk | xxz");
    b.opt["N"] = sub->add_option("--N", f.N, "Majorana count (SYK) or number of sites (XXZ)");
    b.opt["q"] = sub->add_option("--q", f.q, "SYK interaction order");
    b.opt["mu"] = sub->add_option("--mu", f.mu, "dissipation strength");
    b.opt["J"] = sub->add_option("--J", f.J, "XXZ exchange coupling");
    b.opt["delta"] = sub->add_option("--delta", f.delta, "XXZ anisotropy");
    b.opt["h"] = sub->add_option("--h", f.h, "XXZ random-field strength");
    b.opt["scheme"] = sub->add_option("--scheme", f.scheme, "standard | pseudo-fermion (SYK), spin (XXZ)");
    b.opt["realizations"] = sub->add_option("--realizations", f.realizations, "number of disorder realizations");
    b.opt["seed"] = sub->add_option("--seed", f.seed, "master seed; realization r uses stream r");
    b.opt["out"] = sub->add_option("--out", f.out, "output directory");
    b.opt["workers"] = sub->add_option("--workers", f.workers, "concurrent realizations");
    b.opt["min_count"] = sub->add_option("--min-count", f.min_count, "bin population used by the smooth fits");
    for (const auto& [name, value] : default_tolerances()) {
        f.tol[name] = value;
        b.opt["tol." + name] = sub->add_option("--tol." + name, f.tol[name], "tolerance '" + name + "'");
    }
    b.opt["no_compute"] = sub->add_flag("--no-compute", f.no_compute, "only consume cached per-realization artifacts");
    sub->add_flag("--quiet", f.quiet, "suppress progress messages");
    return b;
}

RunConfig build_config(const Bound& b, const Flags& f, const json& preset) {
    RunConfig cfg;
    if (!preset.is_null()) apply_json(cfg, preset);
    if (b.given("config")) {
        json file;
        try {
            file = json::parse(read_file(f.config_file));
        } catch (const json::parse_error& e) {
            throw ConfigError("<file>", e.what());
        }
        apply_json(cfg, file);
    }
    json over = json::object();
    if (b.given("model")) over["model"] = f.model;
    if (b.given("N")) over["N"] = f.N;
    if (b.given("q")) over["q"] = f.q;
    if (b.given("mu")) over["mu"] = f.mu;
    if (b.given("J")) over["J"] = f.J;
    if (b.given("delta")) over["delta"] = f.delta;
    if (b.given("h")) over["h"] = f.h;
    if (b.given("scheme")) over["scheme"] = f.scheme;
    if (b.given("realizations")) over["realizations"] = f.realizations;
    if (b.given("seed")) over["seed"] = f.seed;
    if (b.given("out")) over["output_dir"] = f.out;
    if (b.given("workers")) over["workers"] = f.workers;
    if (b.given("min_count")) over["min_count"] = f.min_count;
    json tol = json::object();
    for (const auto& [name, value] : f.tol)
        if (b.given("tol." + name)) tol[name] = value;
    if (!tol.empty()) over["tolerances"] = tol;
    apply_json(cfg, over);
    cfg.compute = !f.no_compute;
    return cfg;
}

} // namespace

int main(int argc, char** argv) {
    openblas_set_num_threads(1);
    CLI::App app{"Lindblad scar toolkit: vectorized Lindbladians of dissipative SYK and XXZ models"};
    app.set_help_flag("--help", "print this help message and exit");
    app.require_subcommand(1);
    Flags f;

    std::map<std::string, Bound> subs;
    const std::vector<std::pair<std::string, std::string>> stages = {
        {"spectrum", "eigenvalues with sector labels and scar flags"},
        {"scars", "numerical scar detection and analytic scar assignment"},
        {"size", "operator size moments of every eigenstate"},
        {"entanglement", "intersite/intrasite entanglement entropy of every eigenstate"},
        {"stats", "ensemble statistics of the normalized split size"},
        {"run", "outputs taken from --outputs or the config file"},
        {"reproduce", "parameter presets of the figure panels"},
    };
    for (const auto& [name, help] : stages) subs.emplace(name, add_common(app.add_subcommand(name, help), f));
    subs.at("entanglement").app->add_option("--partition", f.partition, "intersite | intrasite | both")
        ->check(CLI::IsMember({"intersite", "intrasite", "both"}));
    subs.at("size").app->add_option("--split", f.split, "even-odd (SYK) | x-plus-z (XXZ)")
        ->check(CLI::IsMember({"even-odd", "x-plus-z"}));
    subs.at("run").app->add_option("--outputs", f.outputs, "spectrum scars size entanglement stats");
    std::string figure;
    bool list = false;
    subs.at("reproduce").app->add_option("figure", figure, "figure id, e.g. fig1-left");
    subs.at("reproduce").app->add_flag("--list", list, "list figure ids");

    CLI11_PARSE(app, argc, argv);

    try {
        for (auto& [name, b] : subs) {
            if (!b.app->parsed()) continue;
            json preset;
            if (name == "reproduce") {
                if (list || figure.empty()) {
                    for (const auto& p : figure_presets()) std::printf("%-12s %s\n", p.id.c_str(), p.description.c_str());
                    return figure.empty() && !list ? 2 : 0;
                }
                preset = find_preset(figure).config;
                if (!b.given("out")) preset["output_dir"] = "out/" + figure;
            }
            RunConfig cfg = build_config(b, f, preset);
            if (name == "spectrum") cfg.outputs = {"spectrum"};
            if (name == "scars") cfg.outputs = {"spectrum", "scars"};
            if (name == "size") cfg.outputs = {"size"};
            if (name == "entanglement") cfg.outputs = {"entanglement"};
            if (name == "stats") cfg.outputs = {"size", "stats"};
            if (name == "run" && !f.outputs.empty()) cfg.outputs = {f.outputs.begin(), f.outputs.end()};
            if (name == "entanglement" && !f.partition.empty()) cfg.partition = f.partition;
            if (name == "size" && !f.split.empty() && (f.split == "even-odd") != cfg.model.fermionic())
                throw ConfigError("split", "'" + f.split + "' does not apply to model " + to_string(cfg.model.model));
            const int status = run(cfg, f.quiet);
            if (!f.quiet) std::fprintf(stderr, "wrote %s\n", cfg.output_dir.c_str());
            return status;
        }
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
