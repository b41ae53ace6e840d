// cli_run.hpp: ensemble orchestration: per-realization artifacts, caching, aggregation

#pragma once

#include <atomic>
#include <condition_variable>
#include <cstdio>
#include <mutex>
#include <optional>
#include <thread>

#include "cli_io.hpp"

namespace lscar::cli {

inline std::string realization_tag(std::uint64_t r) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "r%04llu", static_cast<unsigned long long>(r));
    return buf;
}

/// Per-realization directories; they are wiped when the model key changes.
inline const std::vector<std::string>& artifact_dirs() {
    static const std::vector<std::string> d = {"realizations", "spectrum", "scars", "size", "entanglement", "stats"};
    return d;
}

inline std::vector<Partition> partitions(const RunConfig& cfg) {
    if (cfg.partition == "intersite") return {Partition::Intersite};
    if (cfg.partition == "intrasite") return {Partition::Intrasite};
    return {Partition::Intersite, Partition::Intrasite};
}

/// Relative paths of the artifacts a realization must provide for the requested outputs.
inline std::vector<std::string> required_files(const RunConfig& cfg, std::uint64_t r) {
    const std::string t = realization_tag(r);
    std::vector<std::string> f = {"realizations/" + t + ".json"};
    if (cfg.outputs.count("spectrum")) f.push_back("spectrum/" + t + ".csv");
    if (cfg.outputs.count("scars")) f.push_back("scars/" + t + ".json");
    if (cfg.outputs.count("size") || cfg.outputs.count("stats")) f.push_back("size/" + t + ".csv");
    if (cfg.outputs.count("entanglement"))
        for (auto p : partitions(cfg)) f.push_back(std::string("entanglement/") + to_string(p) + "_" + t + ".csv");
    return f;
}

struct RealizationOutput {
    std::uint64_t index = 0;
    std::vector<std::pair<std::string, std::string>> files; // relative path, content
    json record;
    std::vector<ObservableRecord> size_records; // kept only when stats are requested
};

namespace detail {

inline std::string spectrum_csv(const Realization& r) {
    Csv csv({"index", "re_lambda", "im_lambda", "sector", "is_scar"});
    for (Eigen::Index k = 0; k < r.es.size(); ++k)
        csv.row({std::to_string(k), num(r.es.values(k).real()), num(r.es.values(k).imag()),
                 std::to_string(r.es.sector[k]), r.scar_flags[k] ? "1" : "0"});
    return csv.str();
}

inline json scars_json(const ModelConfig& model, const Realization& r) {
    json j;
    j["index"] = r.index;
    j["total"] = r.scars.total();
    json clusters = json::array();
    for (const auto& c : r.scars.clusters) {
        json sv = json::array();
        for (std::size_t k = 0; k < std::min<std::size_t>(c.singular_values.size(), c.multiplicity + 2); ++k)
            sv.push_back(c.singular_values[c.singular_values.size() - 1 - k]);
        clusters.push_back({{"target", c.target},
                            {"candidates", c.members.size()},
                            {"multiplicity", c.multiplicity},
                            {"gram_condition", c.gram_condition},
                            {"ill_conditioned", c.ill_conditioned},
                            {"smallest_singular_values", sv}});
    }
    j["clusters"] = clusters;

    const auto analytic = analytic_scars(model, r.model);
    const auto match = match_subspaces(analytic, r.scars);
    json states = json::array();
    std::map<std::string, int> assigned;
    int explained = 0;
    for (std::size_t k = 0; k < analytic.size(); ++k) {
        const auto& s = analytic[k];
        const bool found = match.residuals[k] < 1e-6;
        std::string family = s.kind == ScarKind::U1Tuple       ? "u1"
                             : s.kind == ScarKind::SpinZString ? "u1"
                             : s.kind == ScarKind::HamL || s.kind == ScarKind::HamLParity ? "ham_left"
                                                                                          : to_string(s.kind);
        if (found) {
            ++assigned[family];
            ++explained;
        }
        states.push_back({{"kind", to_string(s.kind, s.p)},
                          {"eigenvalue", s.eigenvalue.real()},
                          {"residual", s.residual_l},
                          {"subspace_residual", match.residuals[k]},
                          {"detected", found}});
    }
    j["analytic"] = states;
    json census = assigned;
    census["unexplained"] = r.scars.total() - explained;
    j["assignment"] = census;
    return j;
}

inline std::string size_csv(const std::vector<ObservableRecord>& rec) {
    Csv csv({"re_lambda", "im_lambda", "size_mean", "size_var", "split_mean", "split_second", "is_scar"});
    for (const auto& r : rec)
        csv.row({num(r.eigenvalue.real()), num(r.eigenvalue.imag()), num(r.size_mean), num(r.size_var),
                 num(r.split_mean), num(r.split_second), r.is_scar ? "1" : "0"});
    return csv.str();
}

inline std::vector<ObservableRecord> size_from_csv(const fs::path& p) {
    const auto t = read_csv(p);
    const int re = t.column("re_lambda"), im = t.column("im_lambda"), sm = t.column("size_mean"),
              sv = t.column("size_var"), pm = t.column("split_mean"), ps = t.column("split_second"),
              sc = t.column("is_scar");
    std::vector<ObservableRecord> out;
    for (const auto& row : t.rows) {
        ObservableRecord r;
        r.eigenvalue = cplx(row[re], row[im]);
        r.size_mean = row[sm];
        r.size_var = row[sv];
        r.split_mean = row[pm];
        r.split_second = row[ps];
        r.is_scar = row[sc] != 0.0;
        out.push_back(r);
    }
    return out;
}

inline std::string entanglement_csv(const std::vector<EntropyRecord>& rec, Partition p, long D) {
    Csv csv({"re_lambda", "im_lambda", "entropy", "is_scar"},
            {"partition=" + std::string(to_string(p)), "page_value=" + num(page_value(D))});
    for (const auto& r : rec)
        csv.row({num(r.eigenvalue.real()), num(r.eigenvalue.imag()),
                 num(p == Partition::Intersite ? r.intersite : r.intrasite), r.is_scar ? "1" : "0"});
    return csv.str();
}

} // namespace detail

inline RealizationOutput compute_realization(const RunConfig& cfg, std::uint64_t index) {
    RealizationOutput out;
    out.index = index;
    const std::string t = realization_tag(index);
    json rec = {{"index", index}};
    try {
        const Realization r = solve_realization(cfg.model, index, cfg.realization_options());
        rec["ok"] = true;
        rec["dimension"] = r.es.size();
        rec["max_residual"] = r.es.residual;
        rec["scar_count"] = r.scars.total();
        if (cfg.outputs.count("spectrum")) out.files.push_back({"spectrum/" + t + ".csv", detail::spectrum_csv(r)});
        if (cfg.outputs.count("scars"))
            out.files.push_back({"scars/" + t + ".json", detail::scars_json(cfg.model, r).dump(2) + "\n"});
        if (cfg.outputs.count("size") || cfg.outputs.count("stats")) {
            auto sizes = evaluate(r.es, build_size(r.model.L), r.scar_flags);
            out.files.push_back({"size/" + t + ".csv", detail::size_csv(sizes)});
            if (cfg.outputs.count("stats")) out.size_records = std::move(sizes);
        }
        if (cfg.outputs.count("entanglement")) {
            const auto ee = entanglement(r.es, r.model.L, r.scar_flags);
            const long D = 1L << r.model.L.geom.qubits();
            for (auto p : partitions(cfg))
                out.files.push_back({std::string("entanglement/") + to_string(p) + "_" + t + ".csv",
                                     detail::entanglement_csv(ee, p, D)});
        }
    } catch (const std::exception& e) {
        rec["ok"] = false;
        rec["error"] = e.what();
        out.files.clear();
        out.size_records.clear();
    }
    out.record = rec;
    out.files.insert(out.files.begin(), {"realizations/" + t + ".json", rec.dump(2) + "\n"});
    return out;
}

/// Loads a realization whose artifacts already exist under the current cache key.
inline std::optional<RealizationOutput> load_cached(const RunConfig& cfg, std::uint64_t index) {
    const fs::path root(cfg.output_dir);
    for (const auto& f : required_files(cfg, index))
        if (!fs::exists(root / f)) {
            // a failed realization legitimately has only its record
            const fs::path rec = root / ("realizations/" + realization_tag(index) + ".json");
            if (fs::exists(rec)) {
                const json j = json::parse(read_file(rec));
                if (!j.value("ok", false)) {
                    RealizationOutput out;
                    out.index = index;
                    out.record = j;
                    return out;
                }
            }
            return std::nullopt;
        }
    RealizationOutput out;
    out.index = index;
    out.record = json::parse(read_file(root / ("realizations/" + realization_tag(index) + ".json")));
    if (cfg.outputs.count("stats"))
        out.size_records = detail::size_from_csv(root / ("size/" + realization_tag(index) + ".csv"));
    return out;
}

struct EnsembleAccumulator {
    std::vector<Sample> samples;
    long eigenvalues = 0;
    long imaginary = 0;
};

inline json stats_summary(const RunConfig& cfg, const EnsembleAccumulator& acc, const fs::path& root) {
    const double zero = cfg.tol("zero");
    json s;
    s["model"] = to_string(cfg.model.model);
    s["center"] = cfg.model.center();
    s["split_offset"] = cfg.model.split_offset();
    s["samples"] = acc.samples.size();
    s["fraction_vanishing"] = fraction_vanishing(acc.samples, zero);
    s["imaginary_fraction"] = acc.eigenvalues ? static_cast<double>(acc.imaginary) / acc.eigenvalues : 0.0;

    const auto nonzero = drop_vanishing(acc.samples, zero);
    BinSpec spec;
    spec.min_count = cfg.min_count;
    const SmoothFit fit = fit_smooth(nonzero, spec);
    {
        Csv bins({"bin_center", "count", "mean", "width"});
        for (const auto& b : bin_samples(nonzero, spec))
            bins.row({num(b.center()), std::to_string(b.count), num(b.mean), num(b.width)});
        write_file(root / "stats/bins.csv", bins.str());
    }
    json pieces = json::array();
    for (const auto& p : fit.pieces)
        pieces.push_back({{"abs_x_lo", p.lo},
                          {"abs_x_hi", p.hi},
                          {"mean_coefficients", p.mean_coeffs},
                          {"width_a", p.width_a},
                          {"width_b", p.width_b},
                          {"bins_used", p.bins_used},
                          {"min_count_used", p.min_count_used}});
    s["fit"] = pieces;

    json windows = json::array();
    const std::pair<const char*, Window> named[] = {{"main", main_window()}, {"inset", inset_window()}};
    for (const auto& [name, w] : named) {
        const auto z = normalize_split_size(nonzero, fit, w, zero);
        const auto m = moments(z);
        const auto pl = histogram_powerlaw(z);
        Csv hist({"bin_center", "count", "density"});
        for (const auto& b : log_histogram(z)) hist.row({num(b.center), std::to_string(b.count), num(b.density)});
        write_file(root / (std::string("stats/histogram_") + name + ".csv"), hist.str());
        windows.push_back({{"name", name},
                           {"window", {w.lo, w.hi}},
                           {"count", z.size()},
                           {"mean", m.mean},
                           {"variance", m.variance},
                           {"kurtosis", m.excess_kurtosis},
                           {"a", pl.a},
                           {"b", std::isfinite(pl.b) ? json(pl.b) : json(nullptr)},
                           {"tail_threshold", pl.threshold},
                           {"fit_points", pl.points},
                           {"log_rms_residual", pl.goodness}});
    }
    s["windows"] = windows;
    return s;
}

/// Runs the ensemble and writes every artifact plus summary.json and manifest.json.
inline int run(const RunConfig& cfg, bool quiet = false) {
    cfg.validate();
    const fs::path root(cfg.output_dir);
    fs::create_directories(root);
    const std::string key = sha256_hex(model_json(cfg).dump());
    const fs::path key_file = root / "cache_key";
    if (!fs::exists(key_file) || read_file(key_file) != key + "\n") {
        for (const auto& d : artifact_dirs()) fs::remove_all(root / d);
        write_file(key_file, key + "\n");
    }

    const int R = cfg.realizations;
    std::vector<std::optional<RealizationOutput>> slots(R);
    std::vector<char> need(R, 0);
    for (int r = 0; r < R; ++r) {
        slots[r] = load_cached(cfg, r);
        need[r] = !slots[r].has_value();
    }
    const int missing = static_cast<int>(std::count(need.begin(), need.end(), 1));
    if (missing > 0 && !cfg.compute)
        throw std::runtime_error(std::to_string(missing) +
                                 " realization(s) have no cached artifacts and computation is disabled");

    std::mutex mtx;
    std::condition_variable ready;
    std::atomic<int> next{0};
    auto worker = [&] {
        for (;;) {
            int r = next++;
            while (r < R && !need[r]) r = next++;
            if (r >= R) return;
            auto out = compute_realization(cfg, r);
            std::lock_guard<std::mutex> lock(mtx);
            slots[r] = std::move(out);
            ready.notify_all();
        }
    };
    std::vector<std::thread> pool;
    if (missing > 0)
        for (int w = 0; w < std::min(cfg.workers, missing); ++w) pool.emplace_back(worker);

    EnsembleAccumulator acc;
    json records = json::array();
    json errors = json::array();
    const bool keep_stats = cfg.outputs.count("stats") > 0;
    for (int r = 0; r < R; ++r) {
        RealizationOutput out;
        {
            std::unique_lock<std::mutex> lock(mtx);
            ready.wait(lock, [&] { return slots[r].has_value(); });
            out = std::move(*slots[r]);
            slots[r].reset();
        }
        for (const auto& [path, content] : out.files) write_file(root / path, content);
        if (!out.record.value("ok", false)) errors.push_back(out.record);
        records.push_back(out.record);
        if (keep_stats) {
            const auto s = split_samples(out.size_records, cfg.model.center(), cfg.model.split_offset());
            acc.samples.insert(acc.samples.end(), s.begin(), s.end());
            for (const auto& rec : out.size_records) {
                ++acc.eigenvalues;
                acc.imaginary += std::abs(rec.eigenvalue.real() - cfg.model.center()) < cfg.tol("imag");
            }
        }
        if (!quiet)
            std::fprintf(stderr, "[%d/%d] realization %d %s\n", r + 1, R, r,
                         need[r] ? (out.record.value("ok", false) ? "computed" : "failed") : "cached");
    }
    for (auto& t : pool) t.join();

    json summary;
    summary["library_version"] = library_version;
    summary["config"] = to_json(cfg);
    summary["realizations"] = records;
    summary["errors"] = errors;
    if (keep_stats) {
        if (R - static_cast<int>(errors.size()) < 2) throw std::runtime_error("stats needs at least two successful realizations");
        summary["stats"] = stats_summary(cfg, acc, root);
        write_json(root / "stats/summary.json", summary["stats"]);
    }
    write_json(root / "summary.json", summary);
    write_manifest(root, cfg);
    return errors.empty() ? 0 : 3;
}

} // namespace lscar::cli
