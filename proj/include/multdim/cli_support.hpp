#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "multdim/approx.hpp"

namespace multdim {

// Effective configuration of one experiment run. Backed by a JSON object so
// the round trip is lossless; construction rejects unknown keys.
class ExperimentConfig {
public:
    ExperimentConfig() : data_(nlohmann::json::object()) {}
    explicit ExperimentConfig(nlohmann::json j);

    static ExperimentConfig from_file(const std::filesystem::path& p);

    void set(const std::string& key, nlohmann::json value);
    bool has(const std::string& key) const { return data_.contains(key); }

    template <class T>
    T get(const std::string& key, T fallback) const {
        if (!data_.contains(key)) return fallback;
        return data_.at(key).get<T>();
    }
    const nlohmann::json& raw() const { return data_; }

    // FNV-1a over the canonical dump; stable across runs.
    std::string hash() const;

private:
    nlohmann::json data_;
};

// "power:3", "reciprocal", "construction" is not accepted here; inline JSON
// (leading '{') and @file indirection are. See ApproxFunction::from_json.
ApproxFunction parse_psi(const std::string& desc);

// "naturals", "primes", "stride:start:step", "explicit:1,2,3", inline JSON.
IndexSet parse_index_set(const std::string& desc);

// RFC 4180 CSV with a leading '#' comment line carrying version and config
// hash. Cells are quoted only when needed.
class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const ExperimentConfig& cfg);
    void header(const std::vector<std::string>& names);
    void row(const std::vector<std::string>& cells);
    void close();

private:
    std::string buffer_;
    std::filesystem::path path_;
    bool closed_ = false;
};

std::string csv_quote(const std::string& cell);
std::string format_double(double v);  // shortest round-trip representation

// Minimal self-contained SVG log-log scatter/polyline plot.
void write_loglog_svg(const std::filesystem::path& path, const ExperimentConfig& cfg,
                      const std::string& title, const std::vector<double>& x,
                      const std::vector<double>& y);

void write_json_artifact(const std::filesystem::path& path, const ExperimentConfig& cfg,
                         nlohmann::json payload);

// Output directory resolution: --out flag, else MULTDIM_OUT, else cwd.
std::filesystem::path resolve_out_dir(const std::string& flag_value);

// Full dispatcher; returns the process exit code (0 ok, 1 verification
// failure, 2 usage error).
int run_cli(int argc, const char* const* argv);

}  // namespace multdim
