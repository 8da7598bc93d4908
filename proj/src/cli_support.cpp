#include "multdim/cli_support.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "multdim/version.hpp"

namespace multdim {

namespace {

const std::vector<std::string>& known_keys() {
    static const std::vector<std::string> keys = {
        "subcommand", "psi",        "Q",          "kind",     "s",         "epsilon",
        "q",          "j",          "qmin",       "qmax",     "kmax",      "nmax",
        "n_lo",       "seed",       "threads",    "samples",  "levels",    "mode",
        "thetas",     "budget",     "resolutions", "shells",  "xi_budget", "scan",
        "smoothing",  "cells",      "out",        "samples_per_cell"};
    return keys;
}

}  // namespace

ExperimentConfig::ExperimentConfig(nlohmann::json j) : data_(std::move(j)) {
    if (!data_.is_object()) throw std::domain_error("config: expected a JSON object");
    const auto& keys = known_keys();
    for (const auto& [key, value] : data_.items()) {
        (void)value;
        if (std::find(keys.begin(), keys.end(), key) == keys.end())
            throw std::domain_error("config: unknown key '" + key + "'");
    }
}

ExperimentConfig ExperimentConfig::from_file(const std::filesystem::path& p) {
    std::ifstream in(p);
    if (!in) throw std::domain_error("config: cannot open " + p.string());
    nlohmann::json j;
    in >> j;
    return ExperimentConfig(std::move(j));
}

void ExperimentConfig::set(const std::string& key, nlohmann::json value) {
    const auto& keys = known_keys();
    if (std::find(keys.begin(), keys.end(), key) == keys.end())
        throw std::domain_error("config: unknown key '" + key + "'");
    data_[key] = std::move(value);
}

std::string ExperimentConfig::hash() const {
    // The hash identifies the experiment, not the execution: worker count and
    // output location must not change the artifact bytes.
    nlohmann::json pruned = data_;
    pruned.erase("threads");
    pruned.erase("out");
    const std::string dump = pruned.dump();
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (const unsigned char c : dump) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

ApproxFunction parse_psi(const std::string& desc) {
    if (desc.empty()) throw std::domain_error("psi: empty descriptor");
    if (desc.front() == '{') return ApproxFunction::from_json(nlohmann::json::parse(desc));
    if (desc.front() == '@') {
        std::ifstream in(desc.substr(1));
        if (!in) throw std::domain_error("psi: cannot open " + desc.substr(1));
        nlohmann::json j;
        in >> j;
        return ApproxFunction::from_json(j);
    }
    if (desc == "reciprocal") return ApproxFunction::reciprocal();
    if (desc == "reciprocal:mult") return ApproxFunction::reciprocal(RangeUse::Multiplicative);
    if (desc.rfind("power:", 0) == 0)
        return ApproxFunction::power(std::stod(desc.substr(6)));
    throw std::domain_error("psi: unrecognized descriptor '" + desc + "'");
}

IndexSet parse_index_set(const std::string& desc) {
    if (desc.empty() || desc == "naturals") return IndexSet::all_naturals();
    if (desc.front() == '{') return IndexSet::from_json(nlohmann::json::parse(desc));
    if (desc == "primes") return IndexSet::primes();
    if (desc.rfind("stride:", 0) == 0) {
        const auto rest = desc.substr(7);
        const auto colon = rest.find(':');
        if (colon == std::string::npos) throw std::domain_error("Q: stride:start:step expected");
        return IndexSet::stride(std::stoull(rest.substr(0, colon)),
                                std::stoull(rest.substr(colon + 1)));
    }
    if (desc.rfind("explicit:", 0) == 0) {
        std::vector<std::uint64_t> vals;
        std::stringstream ss(desc.substr(9));
        std::string item;
        while (std::getline(ss, item, ',')) vals.push_back(std::stoull(item));
        return IndexSet::explicit_set(std::move(vals));
    }
    throw std::domain_error("Q: unrecognized descriptor '" + desc + "'");
}

std::string csv_quote(const std::string& cell) {
    if (cell.find_first_of(",\"\r\n") == std::string::npos) return cell;
    std::string out = "\"";
    for (const char c : cell) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string format_double(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const ExperimentConfig& cfg)
    : path_(path) {
    buffer_ = "# multdim version=" + std::string(kVersion) + " config=" + cfg.hash() + "\r\n";
}

void CsvWriter::header(const std::vector<std::string>& names) { row(names); }

void CsvWriter::row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) buffer_ += ',';
        buffer_ += csv_quote(cells[i]);
    }
    buffer_ += "\r\n";
}

void CsvWriter::close() {
    if (closed_) return;
    std::ofstream out(path_, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path_.string());
    out << buffer_;
    closed_ = true;
}

void write_loglog_svg(const std::filesystem::path& path, const ExperimentConfig& cfg,
                      const std::string& title, const std::vector<double>& x,
                      const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw std::domain_error("svg: need >= 2 points");
    constexpr double W = 640, H = 480, M = 60;
    double lx_min = 1e300, lx_max = -1e300, ly_min = 1e300, ly_max = -1e300;
    std::vector<double> lx(x.size()), ly(y.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        lx[i] = std::log10(std::max(x[i], 1e-300));
        ly[i] = std::log10(std::max(y[i], 1e-300));
        lx_min = std::min(lx_min, lx[i]);
        lx_max = std::max(lx_max, lx[i]);
        ly_min = std::min(ly_min, ly[i]);
        ly_max = std::max(ly_max, ly[i]);
    }
    if (lx_max == lx_min) lx_max = lx_min + 1;
    if (ly_max == ly_min) ly_max = ly_min + 1;
    const auto px = [&](double v) { return M + (v - lx_min) / (lx_max - lx_min) * (W - 2 * M); };
    const auto py = [&](double v) { return H - M - (v - ly_min) / (ly_max - ly_min) * (H - 2 * M); };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"480\" "
           "viewBox=\"0 0 640 480\">\n";
    svg += "<!-- multdim version=" + std::string(kVersion) + " config=" + cfg.hash() + " -->\n";
    svg += "<rect width=\"640\" height=\"480\" fill=\"white\"/>\n";
    svg += "<text x=\"320\" y=\"24\" text-anchor=\"middle\" font-family=\"monospace\" "
           "font-size=\"14\">" + title + "</text>\n";
    // axes
    svg += "<line x1=\"" + format_double(M) + "\" y1=\"" + format_double(H - M) + "\" x2=\"" +
           format_double(W - M) + "\" y2=\"" + format_double(H - M) +
           "\" stroke=\"black\"/>\n";
    svg += "<line x1=\"" + format_double(M) + "\" y1=\"" + format_double(H - M) + "\" x2=\"" +
           format_double(M) + "\" y2=\"" + format_double(M) + "\" stroke=\"black\"/>\n";
    svg += "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < lx.size(); ++i) {
        if (i) svg += ' ';
        svg += format_double(px(lx[i])) + "," + format_double(py(ly[i]));
    }
    svg += "\"/>\n";
    for (std::size_t i = 0; i < lx.size(); ++i)
        svg += "<circle cx=\"" + format_double(px(lx[i])) + "\" cy=\"" + format_double(py(ly[i])) +
               "\" r=\"3\" fill=\"crimson\"/>\n";
    // corner labels with the data ranges
    svg += "<text x=\"" + format_double(M) + "\" y=\"" + format_double(H - M / 3) +
           "\" font-family=\"monospace\" font-size=\"11\">log10 x: [" + format_double(lx_min) +
           ", " + format_double(lx_max) + "]</text>\n";
    svg += "<text x=\"" + format_double(M) + "\" y=\"" + format_double(M / 2) +
           "\" font-family=\"monospace\" font-size=\"11\">log10 y: [" + format_double(ly_min) +
           ", " + format_double(ly_max) + "]</text>\n";
    svg += "</svg>\n";

    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << svg;
}

void write_json_artifact(const std::filesystem::path& path, const ExperimentConfig& cfg,
                         nlohmann::json payload) {
    payload["version"] = kVersion;
    payload["config_hash"] = cfg.hash();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << payload.dump(2) << "\n";
}

std::filesystem::path resolve_out_dir(const std::string& flag_value) {
    if (!flag_value.empty()) return flag_value;
    if (const char* env = std::getenv("MULTDIM_OUT"); env && *env) return env;
    return ".";
}

}  // namespace multdim
