#pragma once

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <string>

#include "oulab/calculus/identities.hpp"
#include "oulab/cli/experiments.hpp"

namespace oulab::cli {

struct RunOptions {
    std::optional<std::string> out;  // --out
    int threads = 1;
    std::optional<std::uint64_t> seed;
    std::optional<real> tolerance_scale;
};

/// Everything a run produces. `csv` and `json` are the exact file contents.
struct Artifacts {
    std::string stem;
    std::string csv;
    std::string json;
    int pass = 0;
    int fail = 0;
    int na = 0;
    std::string first_failure;  // empty when nothing failed
    double seconds = 0.0;       // wall time, reported on stdout only
    std::string csv_path;
    std::string json_path;
};

/// --out, then [output] dir, then $OU_LAB_OUT, then ./results.
inline std::string resolve_out_dir(const std::optional<std::string>& flag, const Config* cfg) {
    if (flag && !flag->empty()) return *flag;
    if (cfg && cfg->has("output.dir") && !cfg->get_string("output.dir", "").empty()) return cfg->get_string("output.dir", "");
    if (const char* env = std::getenv("OU_LAB_OUT"); env && *env) return env;
    return "results";
}

/// Applies command-line overrides so that they enter the canonical form and the hash.
inline void apply_overrides(Config& cfg, const RunOptions& o) {
    if (o.seed) cfg.set("experiment.seed", std::to_string(*o.seed));
    if (o.tolerance_scale) cfg.set("experiment.tolerance_scale", format_number(*o.tolerance_scale));
}

namespace detail {

inline void tally(Artifacts& a, const std::string& verdict, const std::string& what) {
    if (verdict == "pass") ++a.pass;
    else if (verdict == "fail") {
        ++a.fail;
        if (a.first_failure.empty()) a.first_failure = what;
    } else ++a.na;
}

inline Json checks_json(const std::vector<Check>& checks) {
    Json arr = Json::array();
    for (const auto& c : checks)
        arr.push_back({{"name", c.name}, {"param", c.param}, {"value", c.value}, {"bound", c.bound},
                       {"relation", c.relation}, {"verdict", c.verdict}});
    return arr;
}

inline void write_artifacts(Artifacts& a, const std::string& dir) {
    std::filesystem::create_directories(dir);
    a.csv_path = (std::filesystem::path(dir) / (a.stem + ".csv")).string();
    a.json_path = (std::filesystem::path(dir) / (a.stem + ".json")).string();
    write_file(a.csv_path, a.csv);
    write_file(a.json_path, a.json);
}

}  // namespace detail

/// Validates `cfg`, runs its experiment and renders the CSV and JSON in memory.
inline Artifacts execute(Config cfg, const std::string& stem, const RunOptions& o) {
    apply_overrides(cfg, o);
    const std::string name = cfg.require_string("experiment.name");
    const Experiment& exp = find_experiment(name);
    require_known_keys(cfg, exp.keys);
    const long long seed = cfg.get_int("experiment.seed", 0);
    if (seed < 0) throw ConfigError("experiment.seed", "must be non-negative");
    const real scale = cfg.get_real("experiment.tolerance_scale", 1.0);
    if (!(scale > 0.0) || !std::isfinite(scale)) throw ConfigError("experiment.tolerance_scale", "must be positive");
    if (o.threads < 1) throw ConfigError("threads", "must be at least 1");

    const auto start = std::chrono::steady_clock::now();
    const Context ctx{cfg, static_cast<std::uint64_t>(seed), scale, o.threads};
    const Outcome out = exp.run(ctx);

    Artifacts a;
    a.stem = stem;
    a.csv = out.table.csv();
    const auto& hdr = out.table.header();
    const auto vcol = std::find(hdr.begin(), hdr.end(), "verdict");
    if (vcol != hdr.end()) {
        const auto k = static_cast<std::size_t>(vcol - hdr.begin());
        for (std::size_t r = 0; r < out.table.rows().size(); ++r) {
            const auto& row = out.table.rows()[r];
            detail::tally(a, std::get<std::string>(row[k]), "row " + std::to_string(r + 1) + " (" + format_cell(row[0]) + ")");
        }
    }
    for (const auto& c : out.checks) detail::tally(a, c.verdict, c.name + " [" + c.param + "]");

    Json j;
    j["experiment"] = name;
    j["anchor"] = exp.anchor;
    j["config"] = stem;
    j["config_hash"] = cfg.hash();
    j["seed"] = seed;
    j["tolerance_scale"] = scale;
    Json canon = Json::object();
    for (const auto& [k, v] : cfg.values()) canon[k] = v;
    j["canonical_config"] = canon;
    j["csv"] = stem + ".csv";
    j["verdicts"] = {{"pass", a.pass}, {"fail", a.fail}, {"n/a", a.na}};
    j["verdict"] = a.fail == 0 ? "pass" : "fail";
    j["checks"] = detail::checks_json(out.checks);
    j["details"] = out.extra;
    a.json = dump_json(j);
    a.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return a;
}

/// `run <config>`: executes and writes <out>/<stem>.csv and <out>/<stem>.json.
inline Artifacts run_config(const std::string& path, const RunOptions& o) {
    const Config cfg = Config::load(path);
    Artifacts a = execute(cfg, std::filesystem::path(path).stem().string(), o);
    detail::write_artifacts(a, resolve_out_dir(o.out, &cfg));
    return a;
}

/// Fast internal consistency checks on d = 1, N = 24. `quadrature_order` 0 selects the default;
/// an order below N + 1 breaks the Gram identity and is meant for fault injection.
inline Artifacts selftest(const RunOptions& o, int quadrature_order = 0) {
    const auto start = std::chrono::steady_clock::now();
    const auto m = OUModel::classical(1, 24, quadrature_order);
    const real tol = 1e-10 * o.tolerance_scale.value_or(1.0);
    struct Item {
        const char* name;
        std::function<real()> value;
    };
    const std::vector<Item> items = {
        {"orthonormality", [&] { return orthonormality_error(m); }},
        {"divergence_quadrature", [&] {
             return (divergence_by_quadrature(m) - assemble_divergence(m).matrix()).cwiseAbs().maxCoeff();
         }},
        {"adjointness", [&] { return adjointness_error(m); }},
        {"riesz_l2", [&] { return riesz_l2_error(m); }},
        {"semigroup_law", [&] { return semigroup_law_error(m, cplx(0.3, 0.0), cplx(0.7, 0.2)); }},
        {"dirac_group_law", [&] { return dirac_group_law_error(m, 0.4, 1.1); }},
        {"riesz_projections", [&] {
             const auto [P, Q] = riesz_projections(m);
             if (P.rank != P.expected || Q.rank != Q.expected) return kInf;
             return std::max({P.hermitian, P.idempotent, P.target_gap, Q.hermitian, Q.idempotent, Q.target_gap});
         }},
    };
    std::vector<real> values(items.size());
    parallel_for(items.size(), o.threads, [&](std::size_t i) {
        try {
            values[i] = items[i].value();
        } catch (const Error&) {
            values[i] = std::numeric_limits<real>::quiet_NaN();
        }
    });

    Artifacts a;
    a.stem = "selftest";
    Table t({"check", "value", "bound", "verdict"});
    Json checks = Json::array();
    for (std::size_t i = 0; i < items.size(); ++i) {
        const bool ok = values[i] <= tol;
        t.add({std::string(items[i].name), values[i], tol, std::string(verdict(ok))});
        checks.push_back({{"name", items[i].name}, {"value", values[i]}, {"bound", tol}, {"verdict", verdict(ok)}});
        detail::tally(a, verdict(ok), std::string(items[i].name) + " (value " + format_number(values[i]) + ", bound " +
                                          format_number(tol) + ")");
    }
    a.csv = t.csv();
    Json j;
    j["experiment"] = "selftest";
    j["dimension"] = 1;
    j["N"] = m.max_degree();
    j["quadrature_order"] = m.grid().order();
    j["verdicts"] = {{"pass", a.pass}, {"fail", a.fail}, {"n/a", a.na}};
    j["verdict"] = a.fail == 0 ? "pass" : "fail";
    j["checks"] = checks;
    a.json = dump_json(j);
    detail::write_artifacts(a, resolve_out_dir(o.out, nullptr));
    a.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return a;
}

}  // namespace oulab::cli
