#include <CLI11.hpp>
#include <cmath>
#include <iostream>

#include "multdim/cli_support.hpp"
#include "multdim/counterexample.hpp"
#include "multdim/estimate.hpp"
#include "multdim/estimate_rng.hpp"
#include "multdim/exponents.hpp"
#include "multdim/fourier.hpp"
#include "multdim/geometry.hpp"
#include "multdim/version.hpp"

namespace multdim {
namespace {

struct CommonFlags {
    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 1;
    int threads = 1;
};

void add_common(CLI::App* app, CommonFlags& c) {
    app->add_option("--config", c.config_path, "JSON config file; flags override its values");
    app->add_option("--out", c.out_dir, "output directory (default: $MULTDIM_OUT or .)");
    app->add_option("--seed", c.seed, "master RNG seed");
    app->add_option("--threads", c.threads, "worker threads; results are thread-count invariant");
}

struct ConfigValue {
    std::string key;
    nlohmann::json value;
    bool flag_set = false;  // explicit flags beat config-file values
};

// Merge --config file with command line values. Flags that the user set win;
// otherwise file values win; otherwise the caller's defaults stay.
ExperimentConfig effective_config(const CLI::App* sub, const CommonFlags& common,
                                  const std::vector<ConfigValue>& vals) {
    ExperimentConfig cfg;
    if (!common.config_path.empty()) cfg = ExperimentConfig::from_file(common.config_path);
    cfg.set("subcommand", sub->get_name());
    for (const auto& v : vals)
        if (v.flag_set || !cfg.has(v.key)) cfg.set(v.key, v.value);
    if (sub->count("--seed") || !cfg.has("seed")) cfg.set("seed", common.seed);
    if (sub->count("--threads") || !cfg.has("threads")) cfg.set("threads", common.threads);
    return cfg;
}

nlohmann::json verdict_json(SeriesVerdict v) {
    switch (v) {
        case SeriesVerdict::Convergent: return "convergent";
        case SeriesVerdict::Divergent: return "divergent";
        case SeriesVerdict::SlowDecay: return "slow-decay";
        default: return "inconclusive";
    }
}

int cmd_exponent(const ExperimentConfig& cfg) {
    const auto psi = parse_psi(cfg.get<std::string>("psi", ""));
    const auto Q = parse_index_set(cfg.get<std::string>("Q", "naturals"));
    const std::string kind_s = cfg.get<std::string>("kind", "tau");
    ExponentKind kind;
    if (kind_s == "lambda") kind = ExponentKind::Lambda;
    else if (kind_s == "tau") kind = ExponentKind::Tau;
    else if (kind_s == "d") kind = ExponentKind::D;
    else throw std::domain_error("exponent: kind must be lambda, tau, or d");

    SeriesConfig scfg;
    scfg.qmax = cfg.get<std::uint64_t>("qmax", scfg.qmax);
    const ExponentResult res = exponent_of_convergence(kind, psi, Q, scfg);
    const DimensionFormulas dims = dimension_formulas(psi, Q, scfg);

    nlohmann::json j;
    j["kind"] = kind_s;
    j["value"] = res.value;
    j["bracket"] = {res.lo, res.hi};
    j["method"] = res.method;
    j["formulas"] = {{"lambda", dims.lambda},
                     {"tau", dims.tau},
                     {"d", dims.d},
                     {"dimF_W", dims.dimF_W},
                     {"dimF_M", dims.dimF_M},
                     {"dimH_M", dims.dimH_M},
                     {"salem_gap", dims.salem_gap}};
    j["applicable"] = dims.gallagher_convergent;
    j["khintchine_convergent"] = dims.khintchine_convergent;
    j["gallagher_convergent"] = dims.gallagher_convergent;
    if (!dims.warning.empty()) j["warning"] = dims.warning;
    write_json_artifact(resolve_out_dir(cfg.get<std::string>("out", "")) / "exponent.json", cfg, j);
    return 0;
}

int cmd_measure(const ExperimentConfig& cfg) {
    const auto psi = parse_psi(cfg.get<std::string>("psi", ""));
    const auto q = cfg.get<std::uint64_t>("q", 2);
    const double psi_q = psi(q);
    if (psi_q <= 0.0) throw std::domain_error("measure: psi(q) = 0 at the requested q");
    const auto samples = cfg.get<std::uint64_t>("samples", 1'000'000);
    const auto seed = cfg.get<std::uint64_t>("seed", 1);
    const int threads = cfg.get<int>("threads", 1);

    const StarDomain star{q, psi_q};
    const auto mc = monte_carlo_measure([&](const TorusPoint2& p) { return star.contains(p); },
                                        samples, seed, threads);
    nlohmann::json j;
    j["q"] = q;
    j["psi_q"] = psi_q;
    j["closed_form"] = star_measure(psi_q);
    j["monte_carlo"] = {{"mean", mc.mean}, {"stderr", mc.stderr_}, {"samples", mc.samples}};
    write_json_artifact(resolve_out_dir(cfg.get<std::string>("out", "")) / "measure.json", cfg, j);
    return 0;
}

int cmd_cover_check(const ExperimentConfig& cfg) {
    const auto psi = parse_psi(cfg.get<std::string>("psi", ""));
    const auto q = cfg.get<std::uint64_t>("q", 2);
    const double psi_q = psi(q);
    if (psi_q <= 0.0) throw std::domain_error("cover-check: psi(q) = 0 at the requested q");
    const auto res = cover_check(q, psi_q, cfg.get<std::uint64_t>("samples", 100'000),
                                 cfg.get<std::uint64_t>("seed", 1));
    nlohmann::json j;
    j["q"] = q;
    j["psi_q"] = psi_q;
    j["samples"] = res.samples;
    j["covered"] = res.covered;
    j["escaped"] = res.escaped;
    j["passed"] = (res.escaped == 0);
    write_json_artifact(resolve_out_dir(cfg.get<std::string>("out", "")) / "cover_check.json", cfg,
                        j);
    return res.escaped == 0 ? 0 : 1;
}

int cmd_coeffs(const ExperimentConfig& cfg) {
    const auto psi = parse_psi(cfg.get<std::string>("psi", ""));
    const auto q = cfg.get<std::uint64_t>("q", 4);
    const double psi_q = psi(q);
    const auto range = dyadic_index_range(q, psi_q);
    const int j = cfg.get<int>("j", range.j_lo);
    if (!range.contains(j)) throw std::domain_error("coeffs: j outside the dyadic index range");
    const auto nmax = static_cast<std::int64_t>(cfg.get<std::uint64_t>("nmax", 8));

    CsvWriter csv(resolve_out_dir(cfg.get<std::string>("out", "")) / "coeffs.csv", cfg);
    csv.header({"k1", "k2", "n1", "n2", "coeff", "bound"});
    const auto qz = static_cast<std::int64_t>(q);
    for (std::int64_t k1 = -nmax; k1 <= nmax; ++k1)
        for (std::int64_t k2 = -nmax; k2 <= nmax; ++k2) {
            const FrequencyVector n{qz * k1, qz * k2};
            csv.row({std::to_string(k1), std::to_string(k2), std::to_string(n.n1),
                     std::to_string(n.n2), format_double(rect_fourier_coeff(q, j, psi_q, n)),
                     format_double(coeff_bound(q, j, psi_q, n))});
        }
    csv.close();
    return 0;
}

int cmd_lemma33(const ExperimentConfig& cfg) {
    const auto psi = parse_psi(cfg.get<std::string>("psi", "power:3"));
    const double s = cfg.get<double>("s", 0.5);
    const double eps = cfg.get<double>("epsilon", 0.05);
    const auto qmin = cfg.get<std::uint64_t>("qmin", 4);
    const auto qmax = cfg.get<std::uint64_t>("qmax", 1024);

    const auto out_dir = resolve_out_dir(cfg.get<std::string>("out", ""));
    CsvWriter csv(out_dir / "lemma33.csv", cfg);
    csv.header({"q", "psi_q", "omega0", "omega1", "omega2", "t11", "t12", "t21", "t22", "total",
                "tail", "rhs", "ratio"});
    std::vector<double> qs, ratios;
    for (std::uint64_t q = qmin; q <= qmax; q *= 2) {
        const double psi_q = psi(q);
        if (psi_q <= 0.0) continue;
        const auto b = quadratic_bound_sum(q, psi_q, s);
        const double rhs = quadratic_bound_rhs(q, psi_q, s, eps);
        const double ratio = b.total / rhs;
        csv.row({std::to_string(q), format_double(psi_q), format_double(b.omega0),
                 format_double(b.omega1), format_double(b.omega2), format_double(b.t11),
                 format_double(b.t12), format_double(b.t21), format_double(b.t22),
                 format_double(b.total), format_double(b.tail_estimate), format_double(rhs),
                 format_double(ratio)});
        qs.push_back(static_cast<double>(q));
        ratios.push_back(ratio);
    }
    csv.close();
    if (qs.size() >= 2) write_loglog_svg(out_dir / "lemma33.svg", cfg, "bound/rhs ratio", qs, ratios);
    return 0;
}

int cmd_counterexample(const ExperimentConfig& cfg) {
    ConstructionConfig ccfg;
    ccfg.levels = cfg.get<int>("levels", 4);
    const std::string mode = cfg.get<std::string>("mode", "scaled");
    if (mode == "exact") ccfg.mode = ConstructionMode::Exact;
    else if (mode == "scaled") ccfg.mode = ConstructionMode::Scaled;
    else throw std::domain_error("counterexample: mode must be exact or scaled");
    for (const std::string& t : cfg.get<std::vector<std::string>>("thetas", {}))
        ccfg.thetas.push_back(rational_from_string(t));
    ccfg.prime_budget = cfg.get<std::uint64_t>("budget", ccfg.prime_budget);

    const Construction c = build_construction(ccfg);
    nlohmann::json j = construction_to_json(c);

    bool ok = true;
    for (const auto& rep : verify_divergence(c)) ok = ok && rep.passed;

    // Exact transfer spot check on seeded rational samples per level.
    const auto seed = cfg.get<std::uint64_t>("seed", 1);
    auto transfers = nlohmann::json::array();
    for (const auto& lvl : c.levels) {
        SplitMix rng = substream(seed, 1000 + static_cast<std::uint64_t>(lvl.k));
        std::vector<Rational> samples;
        for (int i = 0; i < 256; ++i) {
            const std::uint64_t den = 2 + rng.below(1'000'000);
            samples.emplace_back(rng.below(den), den);
        }
        const auto rep = verify_transfer(lvl, samples, 16, seed);
        ok = ok && rep.violations == 0;
        transfers.push_back({{"k", lvl.k},
                             {"samples", rep.samples},
                             {"hits", rep.hits},
                             {"violations", rep.violations},
                             {"divisors_tested", rep.divisors_tested}});
    }
    j["transfer"] = transfers;
    const auto env = envelope_series(c, cfg.get<double>("s", 0.01));
    j["envelope"] = {{"terms", env.terms},
                     {"partial_sums", env.partial_sums},
                     {"stable_digits", env.stable_digits}};
    j["passed"] = ok;
    write_json_artifact(resolve_out_dir(cfg.get<std::string>("out", "")) / "counterexample.json",
                        cfg, j);
    return ok ? 0 : 1;
}

int cmd_boxdim(const ExperimentConfig& cfg) {
    const auto psi = parse_psi(cfg.get<std::string>("psi", "power:3"));
    const auto Q = parse_index_set(cfg.get<std::string>("Q", "naturals"));
    const auto qmax = cfg.get<std::uint64_t>("qmax", 2048);
    std::vector<std::uint64_t> res = cfg.get<std::vector<std::uint64_t>>("resolutions", {});
    if (res.empty())
        for (std::uint64_t g = 256; g <= (1ull << 16); g *= 2) res.push_back(g);

    const auto out_dir = resolve_out_dir(cfg.get<std::string>("out", ""));
    const std::string mode = cfg.get<std::string>("mode", "limsup");
    BoxCountResult r;
    if (mode == "limsup") {
        r = box_counting_limsup(psi, Q, qmax, res);
    } else if (mode == "generic") {
        const auto seed = cfg.get<std::uint64_t>("seed", 1);
        const auto n_lo = cfg.get<std::uint64_t>("n_lo", 1);
        r = box_counting_dimension(
            [&](const TorusPoint2& p) {
                return truncated_limsup_membership(p, psi, Q, n_lo, qmax);
            },
            res, seed, cfg.get<int>("samples_per_cell", 1));
    } else {
        throw std::domain_error("boxdim: mode must be limsup or generic");
    }

    CsvWriter csv(out_dir / "boxdim.csv", cfg);
    csv.header({"resolution", "count", "slope", "residual"});
    for (std::size_t i = 0; i < r.resolutions.size(); ++i)
        csv.row({std::to_string(r.resolutions[i]), std::to_string(r.counts[i]),
                 format_double(r.slope), format_double(r.residual)});
    csv.close();
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < r.resolutions.size(); ++i) {
        xs.push_back(static_cast<double>(r.resolutions[i]));
        ys.push_back(static_cast<double>(r.counts[i]));
    }
    write_loglog_svg(out_dir / "boxdim.svg", cfg, "box counts", xs, ys);
    return 0;
}

int cmd_bc_sum(const ExperimentConfig& cfg) {
    const auto psi = parse_psi(cfg.get<std::string>("psi", "power:3"));
    const auto Q = parse_index_set(cfg.get<std::string>("Q", "naturals"));
    const auto qmax = cfg.get<std::uint64_t>("qmax", 4096);
    const auto series = borel_cantelli_sums(psi, Q, qmax);

    CsvWriter csv(resolve_out_dir(cfg.get<std::string>("out", "")) / "bc_sum.csv", cfg);
    csv.header({"q", "psi_q", "star_measure", "partial_sum", "gallagher_term", "gallagher_partial",
                "measure_verdict", "gallagher_verdict"});
    const std::string mv = verdict_json(series.measure_verdict).get<std::string>();
    const std::string gv = verdict_json(series.gallagher_verdict).get<std::string>();
    for (const auto& row : series.rows)
        csv.row({std::to_string(row.q), format_double(row.psi_q), format_double(row.star),
                 format_double(row.partial_sum), format_double(row.gallagher_term),
                 format_double(row.gallagher_partial), mv, gv});
    csv.close();
    return 0;
}

int cmd_decay(const ExperimentConfig& cfg) {
    const auto psi = parse_psi(cfg.get<std::string>("psi", "power:3"));
    const auto q = cfg.get<std::uint64_t>("q", 4);
    const double psi_q = psi(q);
    const auto range = dyadic_index_range(q, psi_q);
    const int j = cfg.get<int>("j", range.j_lo);
    if (!range.contains(j)) throw std::domain_error("decay: j outside the dyadic index range");

    std::vector<CellRectangle> cells;
    for (const std::string& desc : cfg.get<std::vector<std::string>>("cells", {"0:0"})) {
        const auto colon = desc.find(':');
        if (colon == std::string::npos) throw std::domain_error("decay: cells are a:b pairs");
        cells.push_back(CellRectangle{q, j, psi_q, std::stoull(desc.substr(0, colon)),
                                      std::stoull(desc.substr(colon + 1))});
    }
    const std::string scan_s = cfg.get<std::string>("scan", "random");
    const DecayScan scan = (scan_s == "axis1") ? DecayScan::Axis1 : DecayScan::Random;
    const auto r = decay_probe(cells, cfg.get<int>("shells", 12),
                               cfg.get<std::uint64_t>("xi_budget", 64),
                               cfg.get<std::uint64_t>("seed", 1), scan);

    const auto out_dir = resolve_out_dir(cfg.get<std::string>("out", ""));
    CsvWriter csv(out_dir / "decay.csv", cfg);
    csv.header({"shell_radius", "max_mu_hat", "exponent", "residual"});
    for (std::size_t i = 0; i < r.shell_radii.size(); ++i)
        csv.row({format_double(r.shell_radii[i]), format_double(r.shell_max[i]),
                 format_double(r.exponent), format_double(r.residual)});
    csv.close();
    write_loglog_svg(out_dir / "decay.svg", cfg, "shell max |mu_hat|", r.shell_radii, r.shell_max);
    return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"multiplicative approximation toolkit"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    CommonFlags common;
    std::string psi_desc, Q_desc = "naturals", kind = "tau", mode, scan = "random";
    std::uint64_t q = 0, qmin = 0, qmax = 0, nmax = 0, samples = 0, budget = 0, xi_budget = 0,
                  n_lo = 0;
    int j_level = std::numeric_limits<int>::min();
    int levels = 0, shells = 0, samples_per_cell = 0;
    double s = 0.0, eps = 0.0;
    std::vector<std::string> thetas, cell_specs;
    std::vector<std::uint64_t> resolutions;

    const auto add_psi = [&](CLI::App* sub) {
        sub->add_option("--psi", psi_desc, "psi descriptor (power:T, reciprocal, JSON)");
    };

    auto* c_exp = app.add_subcommand("exponent", "exponents of convergence and dimension formulas");
    add_common(c_exp, common);
    add_psi(c_exp);
    c_exp->add_option("--kind", kind, "lambda | tau | d");
    c_exp->add_option("--Q", Q_desc, "index set descriptor");
    c_exp->add_option("--qmax", qmax, "series budget");

    auto* c_meas = app.add_subcommand("measure", "measure of the star domain A_q");
    add_common(c_meas, common);
    add_psi(c_meas);
    c_meas->add_option("--q", q, "denominator");
    c_meas->add_option("--samples", samples, "Monte Carlo samples");

    auto* c_cover = app.add_subcommand("cover-check", "A_q inside its dyadic rectangle cover");
    add_common(c_cover, common);
    add_psi(c_cover);
    c_cover->add_option("--q", q, "denominator");
    c_cover->add_option("--samples", samples, "rejection samples");

    auto* c_coeffs = app.add_subcommand("coeffs", "Fourier coefficient tables of one level");
    add_common(c_coeffs, common);
    add_psi(c_coeffs);
    c_coeffs->add_option("--q", q, "denominator");
    c_coeffs->add_option("--j", j_level, "dyadic level");
    c_coeffs->add_option("--nmax", nmax, "lattice radius in multiples of q");

    auto* c_lemma = app.add_subcommand("lemma33", "quadratic bound sum vs the two-term rhs");
    add_common(c_lemma, common);
    add_psi(c_lemma);
    c_lemma->add_option("--s", s, "decay exponent in (0,1]");
    c_lemma->add_option("--epsilon", eps, "slack in (0,s)");
    c_lemma->add_option("--qmin", qmin, "first q (doubling grid)");
    c_lemma->add_option("--qmax", qmax, "last q");

    auto* c_ctr = app.add_subcommand("counterexample", "divergent psi with trivial Fourier decay");
    add_common(c_ctr, common);
    c_ctr->add_option("--levels", levels, "number of levels");
    c_ctr->add_option("--mode", mode, "exact | scaled");
    c_ctr->add_option("--theta-list", thetas, "scaled-mode thresholds as num/den strings")
        ->delimiter(',');
    c_ctr->add_option("--budget", budget, "prime candidate budget");
    c_ctr->add_option("--s", s, "envelope exponent");

    auto* c_box = app.add_subcommand("boxdim", "box-counting dimension estimate");
    add_common(c_box, common);
    add_psi(c_box);
    c_box->add_option("--Q", Q_desc, "index set descriptor");
    c_box->add_option("--qmax", qmax, "truncation");
    c_box->add_option("--mode", mode, "limsup | generic");
    c_box->add_option("--resolutions", resolutions, "grid sizes")->delimiter(',');
    c_box->add_option("--n-lo", n_lo, "lower truncation for generic mode");
    c_box->add_option("--samples-per-cell", samples_per_cell, "stratified samples (generic mode)");

    auto* c_bc = app.add_subcommand("bc-sum", "Borel-Cantelli and Gallagher partial sums");
    add_common(c_bc, common);
    add_psi(c_bc);
    c_bc->add_option("--Q", Q_desc, "index set descriptor");
    c_bc->add_option("--qmax", qmax, "truncation");

    auto* c_decay = app.add_subcommand("decay", "Fourier decay probe on a cell union");
    add_common(c_decay, common);
    add_psi(c_decay);
    c_decay->add_option("--q", q, "denominator");
    c_decay->add_option("--j", j_level, "dyadic level");
    c_decay->add_option("--cells", cell_specs, "cells as a:b pairs")->delimiter(',');
    c_decay->add_option("--shells", shells, "dyadic shells");
    c_decay->add_option("--xi-budget", xi_budget, "frequencies per shell");
    c_decay->add_option("--scan", scan, "random | axis1");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        CLI::App* sub = app.get_subcommands().front();
        std::vector<ConfigValue> vals;
        const auto put = [&](const char* key, nlohmann::json v, bool flag_set) {
            vals.push_back({key, std::move(v), flag_set});
        };
        const auto given = [&](const char* flag) {
            return sub->get_option_no_throw(flag) != nullptr && sub->count(flag) > 0;
        };
        if (given("--psi")) put("psi", psi_desc, true);
        put("out", common.out_dir, sub->count("--out") > 0);

        const std::string name = sub->get_name();
        if (name == "exponent") {
            put("kind", kind, given("--kind"));
            put("Q", Q_desc, given("--Q"));
            if (given("--qmax")) put("qmax", qmax, true);
            return cmd_exponent(effective_config(sub, common, vals));
        }
        if (name == "measure" || name == "cover-check") {
            if (given("--q")) put("q", q, true);
            if (given("--samples")) put("samples", samples, true);
            const auto cfg = effective_config(sub, common, vals);
            return name == "measure" ? cmd_measure(cfg) : cmd_cover_check(cfg);
        }
        if (name == "coeffs") {
            if (given("--q")) put("q", q, true);
            if (given("--j")) put("j", j_level, true);
            if (given("--nmax")) put("nmax", nmax, true);
            return cmd_coeffs(effective_config(sub, common, vals));
        }
        if (name == "lemma33") {
            if (given("--s")) put("s", s, true);
            if (given("--epsilon")) put("epsilon", eps, true);
            if (given("--qmin")) put("qmin", qmin, true);
            if (given("--qmax")) put("qmax", qmax, true);
            return cmd_lemma33(effective_config(sub, common, vals));
        }
        if (name == "counterexample") {
            if (given("--levels")) put("levels", levels, true);
            if (given("--mode")) put("mode", mode, true);
            if (given("--theta-list")) put("thetas", thetas, true);
            if (given("--budget")) put("budget", budget, true);
            if (given("--s")) put("s", s, true);
            return cmd_counterexample(effective_config(sub, common, vals));
        }
        if (name == "boxdim") {
            put("Q", Q_desc, given("--Q"));
            if (given("--qmax")) put("qmax", qmax, true);
            if (given("--mode")) put("mode", mode, true);
            if (given("--resolutions")) put("resolutions", resolutions, true);
            if (given("--n-lo")) put("n_lo", n_lo, true);
            if (given("--samples-per-cell")) put("samples_per_cell", samples_per_cell, true);
            return cmd_boxdim(effective_config(sub, common, vals));
        }
        if (name == "bc-sum") {
            put("Q", Q_desc, given("--Q"));
            if (given("--qmax")) put("qmax", qmax, true);
            return cmd_bc_sum(effective_config(sub, common, vals));
        }
        if (name == "decay") {
            if (given("--q")) put("q", q, true);
            if (given("--j")) put("j", j_level, true);
            if (given("--cells")) put("cells", cell_specs, true);
            if (given("--shells")) put("shells", shells, true);
            if (given("--xi-budget")) put("xi_budget", xi_budget, true);
            put("scan", scan, given("--scan"));
            return cmd_decay(effective_config(sub, common, vals));
        }
        std::cerr << "unknown subcommand\n";
        return 2;
    } catch (const BudgetExhausted& e) {
        std::cerr << "budget: " << e.what() << "\n";
        return 1;
    } catch (const std::domain_error& e) {
        std::cerr << "domain: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace multdim
