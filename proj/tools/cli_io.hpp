// cli_io.hpp: lossless number formatting, CSV/JSON files, hashing and the run manifest

#pragma once

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <openssl/evp.h>

#include "cli_config.hpp"

namespace lscar::cli {

namespace fs = std::filesystem;

/// 17 significant digits: every double round-trips exactly.
inline std::string num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline std::string sha256_hex(const std::string& bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("SHA-256 computation failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 15];
    }
    return out;
}

inline std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const fs::path& p, const std::string& content) {
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    out << content;
    if (!out) throw std::runtime_error("write failed for " + p.string());
}

inline void write_json(const fs::path& p, const json& j) { write_file(p, j.dump(2) + "\n"); }

/// Row-oriented CSV builder.
class Csv {
public:
    explicit Csv(std::vector<std::string> columns, std::vector<std::string> comments = {}) : ncol_(columns.size()) {
        for (const auto& c : comments) text_ += "# " + c + "\n";
        row(columns);
    }

    void row(const std::vector<std::string>& cells) {
        if (cells.size() != ncol_) throw std::logic_error("Csv: wrong number of cells");
        for (std::size_t k = 0; k < cells.size(); ++k) text_ += (k ? "," : "") + cells[k];
        text_ += "\n";
    }

    const std::string& str() const { return text_; }

private:
    std::size_t ncol_;
    std::string text_;
};

/// Minimal reader for the CSV files written above: skips '#' lines, returns the header
/// and numeric rows.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    int column(const std::string& name) const {
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) throw std::runtime_error("CSV column '" + name + "' missing");
        return static_cast<int>(it - header.begin());
    }
};

inline CsvTable read_csv(const fs::path& p) {
    std::istringstream in(read_file(p));
    CsvTable t;
    std::string line;
    auto split = [](const std::string& s) {
        std::vector<std::string> out;
        std::stringstream ss(s);
        std::string cell;
        while (std::getline(ss, cell, ',')) out.push_back(cell);
        return out;
    };
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        const auto cells = split(line);
        if (t.header.empty()) {
            t.header = cells;
            continue;
        }
        if (cells.size() != t.header.size()) throw std::runtime_error("malformed CSV row in " + p.string());
        std::vector<double> r;
        for (const auto& c : cells) r.push_back(std::stod(c));
        t.rows.push_back(std::move(r));
    }
    return t;
}

/// manifest.json: configuration hash, seed, library version and a hash for every output file.
inline json write_manifest(const fs::path& root, const RunConfig& cfg) {
    std::vector<fs::path> files;
    for (const auto& e : fs::recursive_directory_iterator(root))
        if (e.is_regular_file() && e.path().filename() != "manifest.json") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    const json config = to_json(cfg);
    json m;
    m["library_version"] = library_version;
    m["config"] = config;
    m["config_sha256"] = sha256_hex(config.dump());
    m["seed"] = cfg.model.seed;
    json list = json::array();
    for (const auto& f : files)
        list.push_back({{"path", fs::relative(f, root).generic_string()}, {"sha256", sha256_hex(read_file(f))}});
    m["files"] = list;
    write_json(root / "manifest.json", m);
    return m;
}

} // namespace lscar::cli
