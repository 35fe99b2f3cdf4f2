#pragma once

#include <functional>
#include <set>
#include <string>
#include <vector>

#include "oulab/calculus/identities.hpp"
#include "oulab/calculus/integrals.hpp"
#include "oulab/cli/config.hpp"
#include "oulab/cli/format.hpp"
#include "oulab/cli/parallel.hpp"
#include "oulab/lp/experiments.hpp"
#include "oulab/mehler/mehler.hpp"
#include "oulab/probes/commutator.hpp"
#include "oulab/probes/offdiag.hpp"

namespace oulab::cli {

inline const char* verdict(bool ok) { return ok ? "pass" : "fail"; }

/// A named summary comparison: value `relation` bound.
struct Check {
    std::string name;
    std::string param;
    real value = 0.0;
    real bound = 0.0;
    std::string relation;  // "<=", ">=", ">", "==" or "info"
    std::string verdict;
};

inline Check make_check(std::string name, std::string param, real value, real bound, const std::string& relation) {
    bool ok = false;
    if (relation == "<=") ok = value <= bound;
    if (relation == ">=") ok = value >= bound;
    if (relation == ">") ok = value > bound;
    if (relation == "==") ok = value == bound;
    Check c{std::move(name), std::move(param), value, bound, relation, relation == "info" ? "n/a" : verdict(ok)};
    return c;
}

struct Outcome {
    explicit Outcome(Table t) : table(std::move(t)) {}

    Table table;
    std::vector<Check> checks;
    Json extra = Json::object();
};

/// Everything an experiment may read: the validated config plus run-level overrides.
struct Context {
    const Config& cfg;
    std::uint64_t seed = 0;
    real tolerance_scale = 1.0;
    int threads = 1;

    /// tolerance.<key>, scaled by the run's tolerance scale; must be positive.
    real tol(const std::string& key, real def) const {
        const std::string full = "tolerance." + key;
        const real v = cfg.get_real(full, def);
        if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(full, "tolerances must be positive");
        return v * tolerance_scale;
    }
};

struct Experiment {
    std::string name;
    std::string anchor;  // one-line statement of what is checked
    std::set<std::string> keys;
    std::function<Outcome(const Context&)> run;
};

namespace detail {

inline std::set<std::string> with_common(std::set<std::string> keys) {
    for (const char* k : {"experiment.name", "experiment.seed", "experiment.tolerance_scale", "output.dir"}) keys.insert(k);
    return keys;
}

inline real positive(const Config& c, const std::string& key, real def) {
    const real v = c.get_real(key, def);
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(key, "must be positive");
    return v;
}

inline real nonnegative(const Config& c, const std::string& key, real def) {
    const real v = c.get_real(key, def);
    if (!(v >= 0.0) || !std::isfinite(v)) throw ConfigError(key, "must be non-negative");
    return v;
}

inline std::vector<int> ladder(const Config& c, const std::string& key, const std::vector<int>& def) {
    auto v = c.get_ints(key, def);
    if (v.empty()) throw ConfigError(key, "grid must be non-empty");
    for (int N : v)
        if (N < 4) throw ConfigError(key, "truncation degrees must be at least 4");
    return v;
}

inline std::vector<real> reals(const Config& c, const std::string& key, const std::vector<real>& def) {
    auto v = c.get_reals(key, def);
    for (real x : v)
        if (!std::isfinite(x)) throw ConfigError(key, "grid values must be finite");
    return v;
}

/// [model] d, b, N, quadrature_order.
inline OUModel model_from(const Config& c, int d_def, int N_def, real b_def = 0.0) {
    const auto d = c.get_int("model.d", d_def);
    const auto N = c.get_int("model.N", N_def);
    const real b = c.get_real("model.b", b_def);
    const auto q = c.get_int("model.quadrature_order", 0);
    if (d < 1 || d > 3) throw ConfigError("model.d", "dimension must be 1, 2 or 3");
    if (N < 4) throw ConfigError("model.N", "must be at least 4");
    if (q < 0) throw ConfigError("model.quadrature_order", "must be non-negative (0 selects 2N+2)");
    if (!std::isfinite(b)) throw ConfigError("model.b", "must be finite");
    if (b != 0.0 && d != 2) throw ConfigError("model.b", "a rotational drift needs d = 2");
    if (b != 0.0) return OUModel::rotational(b, static_cast<int>(N), static_cast<int>(q));
    return OUModel::classical(static_cast<int>(d), static_cast<int>(N), static_cast<int>(q));
}

inline const std::set<std::string> kModelKeys = {"model.d", "model.N", "model.b", "model.quadrature_order"};

inline std::set<std::string> merge(std::set<std::string> a, const std::set<std::string>& b) {
    a.insert(b.begin(), b.end());
    return a;
}

inline std::string param(const std::string& k, real v) { return k + "=" + format_number(v); }

inline void require_dimension(const OUModel& m, int d, const char* exp) {
    if (m.dimension() != d)
        throw ConfigError("model.d", std::string(exp) + " is implemented for d = " + std::to_string(d));
}

inline void require_classical(const OUModel& m, const char* exp) {
    if (!m.is_symmetric()) throw ConfigError("model.b", std::string(exp) + " needs B = I (set b = 0)");
}

inline const std::set<std::string> kWitnessKeys = {
    "witness.amplitudes",    "witness.amp_lo",        "witness.amp_hi",        "witness.phases", "witness.tapers",
    "witness.include_basis", "witness.refine_starts", "witness.random_starts", "witness.max_iterations"};

inline WitnessOptions witness_options(const Config& c, std::uint64_t seed) {
    WitnessOptions o;
    o.amplitudes = static_cast<int>(c.get_int("witness.amplitudes", o.amplitudes));
    o.amp_lo = positive(c, "witness.amp_lo", o.amp_lo);
    o.amp_hi = positive(c, "witness.amp_hi", o.amp_hi);
    o.phases = static_cast<int>(c.get_int("witness.phases", o.phases));
    o.tapers = c.get_reals("witness.tapers", o.tapers);
    o.include_basis = c.get_bool("witness.include_basis", o.include_basis);
    o.refine_starts = static_cast<int>(c.get_int("witness.refine_starts", o.refine_starts));
    o.random_starts = static_cast<int>(c.get_int("witness.random_starts", o.random_starts));
    o.max_iterations = static_cast<int>(c.get_int("witness.max_iterations", o.max_iterations));
    if (o.amplitudes < 1) throw ConfigError("witness.amplitudes", "must be positive");
    if (o.phases < 1) throw ConfigError("witness.phases", "must be positive");
    if (o.refine_starts < 0) throw ConfigError("witness.refine_starts", "must be non-negative");
    if (o.random_starts < 0) throw ConfigError("witness.random_starts", "must be non-negative");
    if (o.max_iterations < 1) throw ConfigError("witness.max_iterations", "must be positive");
    for (real t : o.tapers)
        if (!(t >= 0.0 && t < 1.0)) throw ConfigError("witness.tapers", "tapers must lie in [0, 1)");
    o.seed = seed;
    return o;
}

// ---------------------------------------------------------------------------------------------

inline Outcome finite_speed(const Context& ctx) {
    const auto& c = ctx.cfg;
    const real lo = c.get_real("carrier.lo", -1.0), hi = c.get_real("carrier.hi", 1.0);
    if (!(hi > lo)) throw ConfigError("carrier.hi", "must exceed carrier.lo");
    const real eps = nonnegative(c, "carrier.epsilon", 0.0);
    const auto Ns = ladder(c, "grid.Ns", {24, 48});
    const auto ts = reals(c, "grid.ts", linspace(0.0, 1.0, 9));
    const real delta = nonnegative(c, "grid.delta", 0.25);
    const real min_ratio = positive(c, "criteria.min_ratio", 10.0);

    Outcome o{Table({"N", "t", "delta", "leakage", "residual", "verdict"})};
    std::vector<std::vector<LeakageReport>> res(Ns.size(), std::vector<LeakageReport>(ts.size()));
    std::vector<real> worst(Ns.size(), 0.0);
    for (std::size_t i = 0; i < Ns.size(); ++i) {
        const auto m = OUModel::classical(1, Ns[i]);
        const auto u = realize_scalar(m.basis_ptr(), Region::interval(lo, hi), eps, 1.0);
        const DiracEvolution evo(m);
        parallel_for(ts.size(), ctx.threads, [&](std::size_t k) { res[i][k] = leakage(m, u, ts[k], delta, &evo); });
        for (std::size_t k = 0; k < ts.size(); ++k) {
            const auto& r = res[i][k];
            worst[i] = std::max(worst[i], r.leakage);
            const std::string v = i == 0 ? "n/a" : verdict(r.leakage <= res[i - 1][k].leakage);
            o.table.add({static_cast<long long>(Ns[i]), r.t, r.delta, r.leakage, r.residual, v});
        }
    }
    for (std::size_t i = 0; i < Ns.size(); ++i) o.extra["max_leakage"][std::to_string(Ns[i])] = worst[i];
    if (Ns.size() >= 2)
        o.checks.push_back(make_check("refinement_ratio", "N=" + std::to_string(Ns.front()) + "->" + std::to_string(Ns.back()),
                                      worst.front() / worst.back(), min_ratio, ">="));
    return o;
}

inline Outcome infinite_speed(const Context& ctx) {
    const auto& c = ctx.cfg;
    const auto m = model_from(c, 1, 48);
    require_dimension(m, 1, "infinite-speed");
    const real lo = c.get_real("carrier.lo", -1.0), hi = c.get_real("carrier.hi", 1.0);
    if (!(hi > lo)) throw ConfigError("carrier.hi", "must exceed carrier.lo");
    const real delta = nonnegative(c, "grid.delta", 0.25);
    const auto fractions = reals(c, "grid.schrodinger_fractions", {0.125, 0.25});
    const auto ms = reals(c, "grid.ms", {8, 16, 32});
    const real x0 = c.get_real("grid.x0", 0.0), y0 = c.get_real("grid.y0", 3.0);
    const auto cells = c.get_int("grid.cells", 32);
    if (cells < 2) throw ConfigError("grid.cells", "must be at least 2");
    const real min_leak = positive(c, "criteria.min_leakage", 1e-2);
    const real rel_tol = ctx.tol("pairing_rel", 0.05);

    Outcome o{Table({"kind", "param", "t", "value", "reference", "verdict"})};
    const auto u = realize_scalar(m.basis_ptr(), Region::interval(lo, hi), 0.0, 1.0);
    std::vector<LeakageReport> lr(fractions.size());
    parallel_for(fractions.size(), ctx.threads, [&](std::size_t k) { lr[k] = schrodinger_leakage(m, u, fractions[k] * pi, delta); });
    for (const auto& r : lr)
        o.table.add({std::string("schrodinger_leakage"), static_cast<real>(m.max_degree()), r.t, r.leakage, min_leak,
                     std::string(verdict(r.leakage >= min_leak))});
    std::vector<InfiniteSpeedPairing> pr(ms.size());
    parallel_for(ms.size(), ctx.threads, [&](std::size_t k) {
        pr[k] = infinite_speed_pairing({x0}, {y0}, ms[k], ms[k], static_cast<int>(cells));
    });
    for (std::size_t k = 0; k < ms.size(); ++k) {
        const real rel = std::abs(pr[k].pairing - pr[k].display_limit) / std::abs(pr[k].display_limit);
        o.table.add({std::string("pairing_relative_error"), ms[k], pi / 2, rel, rel_tol, std::string(verdict(rel <= rel_tol))});
    }
    if (!pr.empty()) {
        o.extra["display_limit"] = {pr.back().display_limit.real(), pr.back().display_limit.imag()};
        o.extra["kernel_limit"] = {pr.back().kernel_limit.real(), pr.back().kernel_limit.imag()};
    }
    o.extra["carrier_residual"] = u.residual;
    return o;
}

inline Outcome offdiag_heat_exp(const Context& ctx) {
    const auto& c = ctx.cfg;
    const auto m = model_from(c, 1, 48);
    require_dimension(m, 1, "offdiag-heat");
    require_classical(m, "offdiag-heat");
    const auto Rs = reals(c, "grid.Rs", linspace(2.0, 6.0, 5));
    const auto ts = reals(c, "grid.ts", {0.25, 0.5, 1.0, 2.0, 4.0});
    const real width = positive(c, "carrier.width", 1.0);
    const real mehler_tol = ctx.tol("mehler", 1e-6);
    std::vector<std::string> variants;
    for (const auto& v : split(c.get_string("grid.variants", "scalar, gradient"), ',')) {
        if (v != "scalar" && v != "gradient") throw ConfigError("grid.variants", "unknown variant '" + v + "'");
        variants.push_back(v);
    }
    for (real R : Rs)
        if (!(R > 0.0)) throw ConfigError("grid.Rs", "separations must be positive");
    for (real t : ts)
        if (!(t > 0.0)) throw ConfigError("grid.ts", "times must be positive");

    std::vector<SupportSpec> fs, gs, gf;
    for (real R : Rs) {
        fs.push_back(realize_scalar(m.basis_ptr(), Region::interval(-R / 2 - width, -R / 2), 0.0, 1.0));
        gs.push_back(realize_scalar(m.basis_ptr(), Region::interval(R / 2, R / 2 + width), 0.0, 1.0));
        gf.push_back(realize_field(m.basis_ptr(), Region::interval(R / 2, R / 2 + width), 0, 0.0, 1.0));
    }
    const std::size_t nR = Rs.size(), nt = ts.size();
    std::vector<OffdiagHeatPoint> pts(variants.size() * nR * nt);
    parallel_for(pts.size(), ctx.threads, [&](std::size_t i) {
        const std::size_t v = i / (nR * nt), r = (i / nt) % nR, k = i % nt;
        pts[i] = variants[v] == "scalar" ? offdiag_heat(m, fs[r], gs[r], ts[k]) : offdiag_heat_gradient(m, fs[r], gf[r], ts[k]);
    });

    Outcome o{Table({"variant", "R", "t", "pairing", "bound_sqrt", "bound_stmt", "residual", "mehler_gap", "stmt_holds", "verdict"})};
    real max_gap = 0.0;
    int ladder_violations = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const auto& p = pts[i];
        const std::size_t v = i / (nR * nt), r = (i / nt) % nR;
        const bool ok = p.holds && p.mehler_gap <= mehler_tol;
        max_gap = std::max(max_gap, p.mehler_gap);
        o.table.add({variants[v], p.R, p.t, p.pairing, p.bound_sqrt, p.bound_stmt, p.residual, p.mehler_gap,
                     std::string(p.stmt_holds ? "true" : "false"), std::string(verdict(ok))});
        // Wider separation must not increase the pairing beyond the realization slack.
        if (r + 1 < nR) {
            const auto& q = pts[i + nt];
            if (q.pairing > p.pairing + p.residual + q.residual) ++ladder_violations;
        }
    }
    o.checks.push_back(make_check("mehler_agreement", "max", max_gap, mehler_tol, "<="));
    o.checks.push_back(make_check("separation_ladder_violations", "count", ladder_violations, 0.0, "<="));
    return o;
}

inline Outcome offdiag_resolvent_exp(const Context& ctx) {
    const auto& c = ctx.cfg;
    const auto m = model_from(c, 2, 12, 0.5);
    const auto Rs = reals(c, "grid.Rs", {2.0, 2.5, 3.0, 3.5, 4.0});
    const auto ts = reals(c, "grid.ts", {0.5, 0.7, 1.0, 1.4, 2.0});
    const real extent = positive(c, "carrier.extent", 8.0);
    const auto M_Ns = ladder(c, "grid.M_Ns", {10, 12, 14});
    const auto M_ts = reals(c, "grid.M_ts", default_bisectorial_grid());
    const real min_r2 = positive(c, "criteria.min_r2", 0.9);
    const real spread_tol = ctx.tol("M_spread", 0.05);
    const real floor = ctx.tol("noise_floor", 1e-12);
    for (real R : Rs)
        if (!(R > 0.0 && R / 2 < extent)) throw ConfigError("grid.Rs", "separations must lie in (0, 2 * carrier.extent)");
    for (real t : ts)
        if (t == 0.0) throw ConfigError("grid.ts", "times must be non-zero");
    const int d = m.dimension();

    auto half_space = [&](real a, real b) {
        std::vector<real> lo(static_cast<std::size_t>(d), -kInf), hi(static_cast<std::size_t>(d), kInf);
        lo[0] = a;
        hi[0] = b;
        return Region::box(lo, hi);
    };
    const SeparatedPairFactory factory = [&](real R) {
        return std::pair{realize_scalar(m.basis_ptr(), half_space(-extent, -R / 2), 0.0, 1.0),
                         realize_scalar(m.basis_ptr(), half_space(R / 2, extent), 0.0, 1.0)};
    };
    const auto rep = offdiag_resolvent(m, factory, Rs, ts, floor, M_ts);

    Outcome o{Table({"R", "t", "x", "pairing", "residual", "used"})};
    for (const auto& r : rep.rows) o.table.add({r.R, r.t, r.x, r.pairing, r.residual, std::string(r.excluded ? "false" : "true")});

    std::vector<real> Ms(M_Ns.size());
    parallel_for(M_Ns.size(), ctx.threads, [&](std::size_t i) {
        const OUModel mi(m.B(), M_Ns[i]);
        try {
            Ms[i] = bisectoriality_constant(mi, M_ts);
        } catch (const ConditioningError&) {
            Ms[i] = std::numeric_limits<real>::infinity();
        }
    });
    real lo = kInf, hi = 0.0;
    for (std::size_t i = 0; i < Ms.size(); ++i) {
        o.extra["M"][std::to_string(M_Ns[i])] = Ms[i];
        lo = std::min(lo, Ms[i]);
        hi = std::max(hi, Ms[i]);
    }
    o.extra["slope"] = rep.slope;
    o.extra["C"] = rep.C;
    o.extra["excluded"] = rep.excluded;
    o.checks.push_back(make_check("decay_rate_alpha", "fit", rep.alpha, 0.0, ">"));
    o.checks.push_back(make_check("fit_r2", "fit", rep.r2, min_r2, ">="));
    o.checks.push_back(make_check("M_finite", "N=" + std::to_string(m.max_degree()), std::isfinite(rep.M) ? 1.0 : 0.0, 1.0, "=="));
    o.checks.push_back(make_check("M_relative_spread", "over N", std::isfinite(hi) && lo > 0 ? (hi - lo) / lo : kInf, spread_tol, "<="));
    return o;
}

inline Outcome group_formula_exp(const Context& ctx) {
    const auto m = model_from(ctx.cfg, 1, 48);
    require_classical(m, "group-formula");
    const auto ts = reals(ctx.cfg, "grid.ts", {0.1, 0.5, 1.0, 2.0, 5.0});
    const real tol = ctx.tol("error", 1e-8);
    std::vector<real> err(ts.size());
    parallel_for(ts.size(), ctx.threads, [&](std::size_t k) { err[k] = group_formula_error(m, ts[k]); });
    Outcome o{Table({"t", "error", "tolerance", "verdict"})};
    for (std::size_t k = 0; k < ts.size(); ++k) o.table.add({ts[k], err[k], tol, std::string(verdict(err[k] <= tol))});
    return o;
}

inline Outcome angle_exp(const Context& ctx) {
    const auto& c = ctx.cfg;
    const auto m = model_from(c, 1, 48);
    const real p = c.get_real("grid.p", 4.0);
    if (!(p > 1.0)) throw ConfigError("grid.p", "must exceed 1");
    AngleOptions a;
    a.phis = reals(c, "grid.phis", linspace(0.6, 1.56, 49));
    a.radii = reals(c, "grid.radii", linspace(0.1, 3.0, 30));
    a.cap = positive(c, "grid.cap", 1.5);
    a.amplitudes2 = reals(c, "grid.amplitudes2", a.amplitudes2);
    a.phases = static_cast<int>(c.get_int("grid.phases", a.phases));
    a.include_basis = c.get_bool("grid.include_basis", true);
    if (a.phases < 1) throw ConfigError("grid.phases", "must be positive");
    for (real r : a.radii)
        if (!(r > 0.0)) throw ConfigError("grid.radii", "radii must be positive");
    const real tol = ctx.tol("angle", 0.15);
    const auto rep = estimate_angle(m, p, a);
    Outcome o{Table({"phi", "growth", "excluded", "below_cap"})};
    for (const auto& r : rep.rows)
        o.table.add({r.phi, r.growth, static_cast<long long>(r.excluded), std::string(r.growth <= rep.cap ? "true" : "false")});
    o.extra["method"] = rep.method;
    o.extra["predicted"] = rep.predicted;
    o.extra["estimated"] = rep.estimated;
    o.checks.push_back(make_check("angle_gap", "p=" + format_number(p) + ",b=" + format_number(rep.b),
                                  std::abs(rep.estimated - rep.predicted), tol, "<="));
    return o;
}

inline Outcome epperson_exp(const Context& ctx) {
    const auto& c = ctx.cfg;
    const real p = c.get_real("grid.p", 4.0);
    if (!(p > 1.0)) throw ConfigError("grid.p", "must exceed 1");
    const auto zs = c.get_complex("grid.zs", {cplx(0.1, 1.5), cplx(1.0, 0.0), cplx(0.5, 0.2)});
    const auto Ns = ladder(c, "grid.Ns", {12, 24, 36, 48});
    const auto targets = c.get_complex("grid.target", {cplx(0.1, 1.5)});
    const real member_tol = ctx.tol("member_growth", 1e-9);
    for (cplx z : zs)
        if (z.real() < 0.0) throw ConfigError("grid.zs", "Re z must be non-negative");
    const auto o_w = witness_options(c, ctx.seed);

    std::vector<EppersonPoint> pts(zs.size());
    parallel_for(zs.size(), ctx.threads, [&](std::size_t i) { pts[i] = epperson_scan(p, {zs[i]}, Ns, o_w).front(); });
    Outcome o{Table({"re", "im", "member", "N", "growth"})};
    real member_max = 0.0;
    bool any_member = false;
    for (const auto& pt : pts) {
        for (std::size_t k = 0; k < pt.Ns.size(); ++k)
            o.table.add({pt.z.real(), pt.z.imag(), std::string(pt.member ? "true" : "false"), static_cast<long long>(pt.Ns[k]), pt.growth[k]});
        if (pt.member) {
            any_member = true;
            for (real w : pt.growth) member_max = std::max(member_max, w);
        }
    }
    for (cplx t : targets) {
        const auto it = std::find_if(pts.begin(), pts.end(), [&](const EppersonPoint& q) { return q.z == t; });
        if (it == pts.end()) throw ConfigError("grid.target", "target must be one of grid.zs");
        const std::string tag = "z=" + format_number(t.real()) + (t.imag() < 0 ? "" : "+") + format_number(t.imag()) + "i";
        o.checks.push_back(make_check("target_outside_region", tag, it->member ? 1.0 : 0.0, 0.0, "=="));
        o.checks.push_back(make_check("target_growth_ratio", tag, it->growth.back() / it->growth.front(), 2.0, ">="));
        o.checks.push_back(make_check("target_strictly_increasing", tag, it->diverging ? 1.0 : 0.0, 1.0, "=="));
    }
    if (any_member) o.checks.push_back(make_check("member_growth", "max", member_max, 1.0 + member_tol, "<="));
    return o;
}

inline Outcome blowup_exp(const Context& ctx) {
    const auto& c = ctx.cfg;
    const auto m = model_from(c, 1, 48);
    require_dimension(m, 1, "blowup");
    require_classical(m, "blowup");
    const real p = c.get_real("grid.p", 4.0);
    if (!(p > 1.0)) throw ConfigError("grid.p", "must exceed 1");
    const real lambda = positive(c, "grid.lambda", 1.0);
    const real alpha = nonnegative(c, "grid.alpha", 1.0);
    const real t = c.get_real("grid.t", 1.0);
    const std::string variant = c.get_string("grid.variant", "schrodinger");
    if (variant != "schrodinger" && variant != "cosine") throw ConfigError("grid.variant", "expected schrodinger or cosine");
    const auto n_lo = c.get_int("grid.n_lo", 4), n_hi = c.get_int("grid.n_hi", 40);
    if (n_lo < 1 || n_hi <= n_lo || n_hi > m.max_degree()) throw ConfigError("grid.n_hi", "need 1 <= n_lo < n_hi <= N");
    const real min_growth = positive(c, "criteria.min_growth", 10.0);
    const real control_max = positive(c, "criteria.control_max", 1.0);
    const auto op = variant == "schrodinger" ? BlowupOperator::RegularizedSchrodinger : BlowupOperator::RegularizedCosine;

    const auto rep = blowup_witness(m, p, lambda, alpha, t, op, witness_options(c, ctx.seed));
    Outcome o{Table({"n", "raw", "sequence", "grid_only"})};
    for (std::size_t k = 0; k < rep.raw.size(); ++k)
        o.table.add({static_cast<long long>(k + 1), rep.raw[k], rep.sequence[k], rep.grid_only[k]});
    const real ratio = rep.sequence[static_cast<std::size_t>(n_hi - 1)] / rep.sequence[static_cast<std::size_t>(n_lo - 1)];
    o.extra["exponent"] = rep.exponent;
    o.extra["monotone_from"] = rep.monotone_from;
    const std::string tag = "n=" + std::to_string(n_lo) + "->" + std::to_string(n_hi);
    o.checks.push_back(make_check("growth_ratio", tag, ratio, min_growth, variant == "schrodinger" ? ">=" : "info"));
    o.checks.push_back(make_check("p2_control_norm", "exact", rep.exact_p2, control_max, "<="));
    return o;
}

inline Outcome commutators_exp(const Context& ctx) {
    const auto& c = ctx.cfg;
    const auto m = model_from(c, 2, 10, 0.5);
    const real a_lin = c.get_real("grid.eta_linear", 0.5), a_quad = c.get_real("grid.eta_quadratic", 1.0);
    const auto norm_Ns = ladder(c, "grid.norm_Ns", {16, 32, 48});
    const real bump_lo = c.get_real("bump.lo", -1.0), bump_hi = c.get_real("bump.hi", 1.0);
    const real bump_gap = positive(c, "bump.gap", 2.0), bump_eps = nonnegative(c, "bump.eps", 0.2);
    const auto duhamel_N = ladder(c, "grid.duhamel_N", {24}).front();
    const auto duhamel_ts = reals(c, "grid.duhamel_ts", {0.5, 1.0, 2.0});
    const auto s_order = c.get_int("grid.duhamel_order", 40);
    const auto mm_N = ladder(c, "grid.mm_N", {48}).front();
    const auto mm_ts = reals(c, "grid.mm_ts", linspace(0.1, 2.0, 12));
    const auto mm_nmax = c.get_int("grid.mm_nmax", 8);
    const real mm_margin = nonnegative(c, "grid.mm_margin", 0.3);
    const real agree_tol = ctx.tol("agreement", 1e-8);
    const real duhamel_tol = ctx.tol("duhamel", 1e-6);
    const real hyp_tol = ctx.tol("hypothesis", 1e-1);
    if (s_order < 2) throw ConfigError("grid.duhamel_order", "must be at least 2");
    if (mm_nmax < 1) throw ConfigError("grid.mm_nmax", "must be positive");
    if (!(bump_hi > bump_lo)) throw ConfigError("bump.hi", "must exceed bump.lo");
    if (bump_eps >= 0.5) throw ConfigError("bump.eps", "must be below 0.5");

    Outcome o{Table({"check", "param", "value", "bound", "verdict"})};
    auto row = [&](const std::string& check, const std::string& prm, real v, real b, bool ok) {
        o.table.add({check, prm, v, b, std::string(verdict(ok))});
    };
    auto row_info = [&](const std::string& check, const std::string& prm, real v, real b) {
        o.table.add({check, prm, v, b, std::string("n/a")});
    };

    // Polynomial eta: closed form against the algebraic commutator.
    const int d = m.dimension();
    const auto eta = expand([&](const RVector& x) {
        real s = 0.0;
        for (int j = 0; j < d; ++j) s += a_lin * x[j] + a_quad * x[j] * x[j] * (j == 0 ? 1.0 : -0.5);
        return s;
    }, m.basis_ptr(), m.grid());
    const auto cr = commutator(m, eta);
    row("closed_form_vs_algebraic", "exact_degree=" + std::to_string(cr.exact_degree), cr.agreement, agree_tol, cr.agreement <= agree_tol);
    row("double_commutator", "exact_degree=" + std::to_string(cr.double_exact_degree), cr.double_commutator, agree_tol,
        cr.double_commutator <= agree_tol);

    // Bump: norm bound and slack under refinement.
    const BumpFunction bump(Region::interval(bump_lo, bump_hi), bump_gap, bump_eps);
    std::vector<CommutatorNormReport> nr(norm_Ns.size());
    parallel_for(norm_Ns.size(), ctx.threads, [&](std::size_t i) { nr[i] = commutator_norm(OUModel::classical(1, norm_Ns[i]), bump); });
    for (std::size_t i = 0; i < nr.size(); ++i) {
        const std::string prm = "N=" + std::to_string(nr[i].N);
        row("norm_vs_grad_sup_plus_slack", prm, nr[i].norm, nr[i].grad_sup + nr[i].slack, nr[i].norm <= nr[i].grad_sup + nr[i].slack);
        row_info("measured_grad_sup", prm, nr[i].measured_sup, nr[i].grad_sup);
        row_info("aliasing", prm, nr[i].aliasing, 0.0);
        if (i > 0) row("slack_nonincreasing", prm, nr[i].slack, nr[i - 1].slack, nr[i].slack <= nr[i - 1].slack);
        else row_info("slack", prm, nr[i].slack, 0.0);
    }

    // Duhamel formula.
    const auto md = OUModel::classical(1, duhamel_N);
    std::vector<DuhamelReport> dr(duhamel_ts.size());
    parallel_for(duhamel_ts.size(), ctx.threads, [&](std::size_t k) {
        dr[k] = duhamel_check(md, bump, duhamel_ts[k], static_cast<int>(s_order), ctx.seed + 7);
    });
    for (std::size_t k = 0; k < dr.size(); ++k)
        row("duhamel_residual", param("t", duhamel_ts[k]), dr[k].residual, duhamel_tol, dr[k].residual <= duhamel_tol);

    // McIntosh-Morris: separated carriers around -2 and 2.
    const auto mm = OUModel::classical(1, mm_N);
    const Region Ku = Region::interval(-2.5, -1.5), Kv = Region::interval(1.5, 2.5);
    const auto u = realize_scalar(mm.basis_ptr(), Ku, 0.0, 1.0);
    const auto v = realize_scalar(mm.basis_ptr(), Kv, 0.0, 1.0);
    const auto sep = separation_eta(Ku.dilated(mm_margin), Kv.dilated(mm_margin), 0.1);
    const DiracEvolution evo(mm);
    std::vector<McIntoshMorrisPoint> mp(mm_ts.size());
    std::vector<std::string> failure(mm_ts.size());
    parallel_for(mm_ts.size(), ctx.threads, [&](std::size_t k) {
        try {
            mp[k] = mcintosh_morris_bound(mm, u, v, sep, mm_ts[k], static_cast<int>(mm_nmax), hyp_tol, &evo);
        } catch (const DomainError& e) {
            failure[k] = e.what();
        }
    });
    for (std::size_t k = 0; k < mp.size(); ++k) {
        const std::string prm = param("t", mm_ts[k]);
        if (!failure[k].empty()) {
            row("mcintosh_morris_hypothesis", prm, kInf, hyp_tol, false);
            continue;
        }
        if (mp[k].in_regime)
            row("mcintosh_morris", prm, mp[k].lhs, mp[k].rhs + mp[k].slack, mp[k].holds);
        else
            row_info("mcintosh_morris_out_of_regime", prm, mp[k].lhs, mp[k].rhs + mp[k].slack);
    }
    o.extra["bump_lipschitz"] = bump.lipschitz_bound();
    o.extra["mm_eta_lipschitz"] = sep.lipschitz_bound();
    return o;
}

inline Outcome riesz_exp(const Context& ctx) {
    const auto m = model_from(ctx.cfg, 1, 48);
    require_classical(m, "riesz");
    const auto ts = reals(ctx.cfg, "grid.ts", {0.1, 0.5, 1.0, 2.0, 5.0});
    const real tol = ctx.tol("identity", 1e-10);
    Outcome o{Table({"check", "param", "value", "bound", "verdict"})};
    auto row = [&](const std::string& check, const std::string& prm, real v, real b, bool ok) {
        o.table.add({check, prm, v, b, std::string(verdict(ok))});
    };
    std::vector<real> err(ts.size());
    parallel_for(ts.size(), ctx.threads, [&](std::size_t k) { err[k] = intertwining_error(m, ts[k]); });
    for (std::size_t k = 0; k < ts.size(); ++k) row("intertwining", param("t", ts[k]), err[k], tol, err[k] <= tol);
    const auto [P, Q] = riesz_projections(m);
    for (const auto& [name, pc] : {std::pair{std::string("half_Rbar_R"), P}, std::pair{std::string("half_R_Rbar"), Q}}) {
        row(name + "_hermitian", "frobenius", pc.hermitian, tol, pc.hermitian <= tol);
        row(name + "_idempotent", "frobenius", pc.idempotent, tol, pc.idempotent <= tol);
        row(name + "_rank", "expected", static_cast<real>(pc.rank), static_cast<real>(pc.expected), pc.rank == pc.expected);
        row(name + "_target_gap", "frobenius", pc.target_gap, tol, pc.target_gap <= tol);
    }
    const real l2 = riesz_l2_error(m);
    row("sqrt_minus_L_vs_half_gradient", "degree<=N-1", l2, tol, l2 <= tol);
    return o;
}

inline Outcome weyl_exp(const Context& ctx) {
    const auto m = model_from(ctx.cfg, 1, 24);
    require_classical(m, "weyl");
    const auto ts = reals(ctx.cfg, "grid.ts", {0.25, 0.5, 1.0, 2.0});
    const auto moments = ctx.cfg.get_ints("grid.moments", {0, 1});
    const real tol = ctx.tol("error", 1e-8);
    WeylQuadrature q;
    q.range_factor = ctx.cfg.get_real("grid.range_factor", q.range_factor);
    q.nodes_per_panel = static_cast<int>(ctx.cfg.get_int("grid.nodes_per_panel", q.nodes_per_panel));
    for (int mo : moments)
        if (mo < 0 || mo > 2) throw ConfigError("grid.moments", "moments must be 0, 1 or 2");
    for (real t : ts)
        if (!(t > 0.0)) throw ConfigError("grid.ts", "times must be positive");

    const CMatrix D = assemble_dirac(m).matrix();
    const CMatrix I = CMatrix::Identity(D.rows(), D.cols());
    const std::size_t nt = ts.size();
    std::vector<std::pair<real, real>> res(moments.size() * nt);
    parallel_for(res.size(), ctx.threads, [&](std::size_t i) {
        const int mo = moments[i / nt];
        const real t = ts[i % nt];
        const auto w = weyl_integral(m, t, mo, q);
        const CMatrix heat = hermitian_matfun(D, [&](real l) { return cplx(std::exp(-0.5 * t * l * l)); });
        const CMatrix direct = mo == 0 ? heat : (mo == 1 ? CMatrix(D * heat) : CMatrix((I - t * D * D) * heat));
        res[i] = {(w.value.matrix() - direct).cwiseAbs().maxCoeff(), w.tail_bound};
    });
    Outcome o{Table({"moment", "t", "error", "tail_bound", "verdict"})};
    for (std::size_t i = 0; i < res.size(); ++i)
        o.table.add({static_cast<long long>(moments[i / nt]), ts[i % nt], res[i].first, res[i].second,
                     std::string(verdict(res[i].first <= tol))});
    return o;
}

inline Outcome subordination_exp(const Context& ctx) {
    const auto m = model_from(ctx.cfg, 1, 24);
    require_classical(m, "subordination");
    const auto zs = ctx.cfg.get_complex("grid.zs", {cplx(0.1, 0.0), cplx(0.5, 0.3), cplx(1.0, -0.9), cplx(2.0, 1.5)});
    const real tol = ctx.tol("error", 1e-6);
    SubordinationQuadrature q;
    q.tolerance = tol;
    std::vector<SubordinationResult> res(zs.size());
    std::vector<real> err(zs.size(), std::numeric_limits<real>::quiet_NaN());
    std::vector<bool> excluded(zs.size(), false);
    parallel_for(zs.size(), ctx.threads, [&](std::size_t k) {
        const cplx z = zs[k];
        if (z.real() < 0.0 || (z * z).real() < 0.0) {
            excluded[k] = true;  // outside the sector where the subordination integral converges
            return;
        }
        try {
            res[k] = subordination(m, z, q);
        } catch (const ConvergenceError& e) {
            res[k].residual = e.residual();
            return;
        }
        CVector ref(static_cast<Eigen::Index>(m.scalar_size()));
        for (std::size_t i = 0; i < m.scalar_size(); ++i)
            ref[static_cast<Eigen::Index>(i)] = std::exp(-z * std::sqrt(0.5 * m.basis()[i].degree()));
        err[k] = (res[k].value.matrix() - CMatrix(ref.asDiagonal())).cwiseAbs().maxCoeff();
    });
    Outcome o{Table({"re", "im", "error", "residual", "verdict"})};
    for (std::size_t k = 0; k < zs.size(); ++k)
        o.table.add({zs[k].real(), zs[k].imag(), err[k], res[k].residual,
                     std::string(excluded[k] ? "n/a" : verdict(err[k] <= tol))});
    return o;
}

inline Outcome mehler_consistency_exp(const Context& ctx) {
    const auto m = model_from(ctx.cfg, 1, 20);
    require_classical(m, "mehler-consistency");
    const auto zs = ctx.cfg.get_complex("grid.zs", {cplx(0.5, 0.0), cplx(0.3, 1.2), cplx(0.0, 1.0), cplx(1.0, -2.0)});
    const auto mass_ts = reals(ctx.cfg, "grid.mass_ts", {0.1, 1.0, 3.0});
    const real tol = ctx.tol("kernel", 1e-10);
    const real mass_tol = ctx.tol("mass", 1e-10);
    for (cplx z : zs)
        if (z.real() < 0.0) throw ConfigError("grid.zs", "Re z must be non-negative");
    Outcome o{Table({"check", "param", "value", "bound", "verdict"})};
    CVector c(static_cast<Eigen::Index>(m.scalar_size()));
    for (Eigen::Index k = 0; k < c.size(); ++k) c[k] = cplx(1.0 / (1.0 + static_cast<real>(k)), std::sin(static_cast<real>(k)));
    const SpectralFunction f(m.basis_ptr(), c);
    std::vector<real> err(zs.size());
    parallel_for(zs.size(), ctx.threads, [&](std::size_t k) {
        const auto g = kernel_apply(MehlerTime(zs[k], m.dimension()), f, m.grid());
        err[k] = (g.coeffs() - semigroup(m, zs[k]).matrix() * c).cwiseAbs().maxCoeff();
    });
    for (std::size_t k = 0; k < zs.size(); ++k) {
        const std::string prm = "z=" + format_number(zs[k].real()) + (zs[k].imag() < 0 ? "" : "+") + format_number(zs[k].imag()) + "i";
        o.table.add({std::string("kernel_vs_spectral"), prm, err[k], tol, std::string(verdict(err[k] <= tol))});
    }
    if (m.dimension() == 1)
        for (real t : mass_ts) {
            if (!(t > 0.0)) throw ConfigError("grid.mass_ts", "times must be positive");
            const real dev = std::abs(mehler_mass(MehlerTime(t, 1), {0.7}) - 1.0);
            o.table.add({std::string("kernel_mass"), param("t", t), dev, mass_tol, std::string(verdict(dev <= mass_tol))});
        }
    return o;
}

}  // namespace detail

/// The experiment catalog, in a fixed order.
inline const std::vector<Experiment>& registry() {
    using namespace detail;
    static const std::vector<Experiment> list = {
        {"finite-speed", "finite propagation speed of the Hodge-Dirac group under basis refinement",
         with_common({"carrier.lo", "carrier.hi", "carrier.epsilon", "grid.Ns", "grid.ts", "grid.delta", "criteria.min_ratio"}), finite_speed},
        {"infinite-speed", "infinite propagation speed of e^{itL} and the continued Mehler kernel at t = pi/2",
         with_common(merge(kModelKeys, {"carrier.lo", "carrier.hi", "grid.delta", "grid.schrodinger_fractions", "grid.ms",
                                        "grid.x0", "grid.y0", "grid.cells", "criteria.min_leakage", "tolerance.pairing_rel"})),
         infinite_speed},
        {"offdiag-heat", "Gaussian off-diagonal bounds for e^{tL} and grad e^{tL}",
         with_common(merge(kModelKeys, {"grid.Rs", "grid.ts", "grid.variants", "carrier.width", "tolerance.mehler"})),
         offdiag_heat_exp},
        {"offdiag-resolvent", "exponential off-diagonal decay of the Dirac resolvent and its bisectoriality constant",
         with_common(merge(kModelKeys, {"grid.Rs", "grid.ts", "carrier.extent", "grid.M_Ns", "grid.M_ts", "criteria.min_r2",
                                        "tolerance.M_spread", "tolerance.noise_floor"})),
         offdiag_resolvent_exp},
        {"group-formula", "block formula for e^{(i/sqrt2)tD} through cosine, sine and Riesz transforms",
         with_common(merge(kModelKeys, {"grid.ts", "tolerance.error"})), group_formula_exp},
        {"angle", "sector of L^p analyticity of e^{zL} against the optimal angle",
         with_common(merge(kModelKeys, {"grid.p", "grid.phis", "grid.radii", "grid.cap", "grid.amplitudes2", "grid.phases",
                                        "grid.include_basis", "tolerance.angle"})),
         angle_exp},
        {"epperson", "complex times where e^{zL} is bounded on L^p, against witness growth",
         with_common(merge(kWitnessKeys, {"grid.p", "grid.zs", "grid.Ns", "grid.target", "tolerance.member_growth"})), epperson_exp},
        {"blowup", "L^p blow-up of the regularized Schrodinger propagator (1-L)^{-alpha} e^{itL}",
         with_common(merge(merge(kModelKeys, kWitnessKeys), {"grid.p", "grid.lambda", "grid.alpha", "grid.t", "grid.variant",
                                                             "grid.n_lo", "grid.n_hi", "criteria.min_growth", "criteria.control_max"})),
         blowup_exp},
        {"commutators", "commutators of D with multipliers, Duhamel formula and the McIntosh-Morris bound",
         with_common(merge(kModelKeys, {"grid.eta_linear", "grid.eta_quadratic", "grid.norm_Ns", "bump.lo", "bump.hi", "bump.gap",
                                        "bump.eps", "grid.duhamel_N", "grid.duhamel_ts", "grid.duhamel_order", "grid.mm_N",
                                        "grid.mm_ts", "grid.mm_nmax", "grid.mm_margin", "tolerance.agreement",
                                        "tolerance.duhamel", "tolerance.hypothesis"})),
         commutators_exp},
        {"riesz", "Riesz transform intertwining and the projections 1/2 Rbar R, 1/2 R Rbar",
         with_common(merge(kModelKeys, {"grid.ts", "tolerance.identity"})), riesz_exp},
        {"weyl", "Gaussian Weyl integrals of the Dirac group against direct matrix functions",
         with_common(merge(kModelKeys, {"grid.ts", "grid.moments", "grid.range_factor", "grid.nodes_per_panel", "tolerance.error"})),
         weyl_exp},
        {"subordination", "Poisson semigroup e^{-z sqrt(-L)} by subordination to the heat semigroup",
         with_common(merge(kModelKeys, {"grid.zs", "tolerance.error"})), subordination_exp},
        {"mehler-consistency", "Mehler kernel quadrature against the spectral semigroup",
         with_common(merge(kModelKeys, {"grid.zs", "grid.mass_ts", "tolerance.kernel", "tolerance.mass"})), mehler_consistency_exp},
    };
    return list;
}

inline const Experiment& find_experiment(const std::string& name) {
    for (const auto& e : registry())
        if (e.name == name) return e;
    throw ConfigError("experiment.name", "unknown experiment '" + name + "'");
}

}  // namespace oulab::cli
