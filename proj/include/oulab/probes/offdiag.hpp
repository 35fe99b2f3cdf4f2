#pragma once

#include <functional>
#include <utility>

#include "oulab/calculus/calculus.hpp"
#include "oulab/mehler/mehler.hpp"
#include "oulab/probes/support.hpp"

namespace oulab {

struct OffdiagHeatPoint {
    real R = 0.0;
    real t = 0.0;
    real pairing = 0.0;          // |<T f, g>| / (||f|| ||g||)
    real bound_sqrt = 0.0;       // proof-chain bound, normalized
    real bound_stmt = 0.0;       // stronger displayed bound, normalized (recorded only)
    real residual = 0.0;         // realization slack added to the bound
    real mehler_pairing = 0.0;   // same pairing through the Mehler kernel
    real mehler_gap = 0.0;       // |spectral - Mehler| / (||f|| ||g||)
    bool holds = false;          // pairing <= bound_sqrt + residual
    bool stmt_holds = false;     // pairing <= bound_stmt + residual
};

namespace detail {

inline real pair_slack(const SupportSpec& f, const SupportSpec& g) {
    return f.residual + g.residual + f.residual * g.residual;
}

inline real separation(const SupportSpec& f, const SupportSpec& g, const char* where) {
    const real R = f.distance(g);
    if (!(R > 0.0)) throw DomainError(std::string(where) + ": carriers must be at positive distance (R = 0)");
    return R;
}

}  // namespace detail

/// |<e^{tL} f, g>| for scalar states f, g with carriers at distance R, against
/// sqrt(2t/(pi R^2)) e^{-R^2/2t} and (2t/(pi R^2)) e^{-R^2/2t}. Splitting each state into its part on
/// the carrier and the remainder gives the slack tau_f + tau_g + tau_f tau_g for a contraction.
inline OffdiagHeatPoint offdiag_heat(const OUModel& model, const SupportSpec& f, const SupportSpec& g, real t) {
    model.require_symmetric("offdiag_heat");
    if (!(t > 0.0)) throw DomainError("offdiag_heat: t must be positive");
    OffdiagHeatPoint p;
    p.R = detail::separation(f, g, "offdiag_heat");
    p.t = t;
    const SpectralFunction& fs = f.state.scalar();
    const SpectralFunction& gs = g.state.scalar();
    const real scale = fs.norm() * gs.norm();
    const CVector Tf = semigroup(model, t).matrix() * fs.coeffs();
    const cplx spectral = gs.coeffs().dot(Tf);
    p.pairing = std::abs(spectral) / scale;
    const real gauss = std::exp(-p.R * p.R / (2.0 * t));
    p.bound_stmt = 2.0 * t / (pi * p.R * p.R) * gauss;
    p.bound_sqrt = std::sqrt(2.0 * t / (pi * p.R * p.R)) * gauss;
    p.residual = detail::pair_slack(f, g);
    const SpectralFunction Mf = kernel_apply(MehlerTime(t, model.dimension()), fs, model.grid());
    const cplx viaKernel = gs.coeffs().dot(Mf.coeffs());
    p.mehler_pairing = std::abs(viaKernel) / scale;
    p.mehler_gap = std::abs(spectral - viaKernel) / scale;
    p.holds = p.pairing <= p.bound_sqrt + p.residual;
    p.stmt_holds = p.pairing <= p.bound_stmt + p.residual;
    return p;
}

/// Gradient variant |<grad e^{tL} f, g>| for a field state g, against sqrt(2/(pi t)) e^{-R^2/2t}.
/// bound_stmt repeats the same value, since only one constant is stated for this estimate.
/// The slack is scaled by ||grad e^{tL}||, which replaces the contraction constant.
inline OffdiagHeatPoint offdiag_heat_gradient(const OUModel& model, const SupportSpec& f, const SupportSpec& g, real t) {
    model.require_symmetric("offdiag_heat_gradient");
    if (!(t > 0.0)) throw DomainError("offdiag_heat_gradient: t must be positive");
    OffdiagHeatPoint p;
    p.R = detail::separation(f, g, "offdiag_heat_gradient");
    p.t = t;
    const SpectralFunction& fs = f.state.scalar();
    const CVector gv = g.state.field().stacked();
    const real scale = fs.norm() * gv.norm();
    const CMatrix G = assemble_gradient(model).matrix();
    const CMatrix GT = G * semigroup(model, t).matrix();
    const cplx spectral = gv.dot(GT * fs.coeffs());
    p.pairing = std::abs(spectral) / scale;
    p.bound_sqrt = std::sqrt(2.0 / (pi * t)) * std::exp(-p.R * p.R / (2.0 * t));
    p.bound_stmt = p.bound_sqrt;
    p.residual = Eigen::JacobiSVD<CMatrix>(GT).singularValues()[0] * detail::pair_slack(f, g);
    const SpectralFunction Mf = kernel_apply(MehlerTime(t, model.dimension()), fs, model.grid());
    const cplx viaKernel = gv.dot(G * Mf.coeffs());
    p.mehler_pairing = std::abs(viaKernel) / scale;
    p.mehler_gap = std::abs(spectral - viaKernel) / scale;
    p.holds = p.pairing <= p.bound_sqrt + p.residual;
    p.stmt_holds = p.holds;
    return p;
}

struct ResolventFitRow {
    real R = 0.0;
    real t = 0.0;
    real x = 0.0;          // R / |t|
    real pairing = 0.0;    // |<(I + itD)^{-1} u, v>| / (||u|| ||v||)
    real residual = 0.0;   // realization residuals of u and v combined
    bool excluded = false; // below the noise floor, left out of the fit
};

struct ResolventFitReport {
    std::vector<ResolventFitRow> rows;
    real slope = 0.0;      // fitted d log|pairing| / d(R/|t|)
    real alpha = 0.0;      // -slope
    real C = 0.0;          // exp(intercept)
    real r2 = 0.0;         // coefficient of determination
    int used = 0;
    int excluded = 0;
    real M = 0.0;          // max over the M-grid of ||(I - itD)^{-1}||
};

/// Pair of Dirac states at separation R, supplied by the caller.
using SeparatedPairFactory = std::function<std::pair<SupportSpec, SupportSpec>(real R)>;

/// Default t-grid for the bisectoriality constant: 81 points on [-20, 20].
inline std::vector<real> default_bisectorial_grid() {
    std::vector<real> ts;
    for (int k = 0; k <= 80; ++k) ts.push_back(-20.0 + 0.5 * k);
    return ts;
}

inline real bisectoriality_constant(const OUModel& model, const std::vector<real>& ts) {
    const CMatrix D = assemble_dirac(model).matrix();
    const CMatrix I = CMatrix::Identity(D.rows(), D.cols());
    real M = 0.0;
    for (real t : ts) {
        // ||(I - itD)^{-1}|| = 1 / sigma_min(I - itD).
        const CMatrix A = I - cplx(0.0, t) * D;
        Eigen::SelfAdjointEigenSolver<CMatrix> es(A.adjoint() * A, Eigen::EigenvaluesOnly);
        const real smin2 = es.eigenvalues()[0];
        if (!(smin2 > 1e-24)) throw ConditioningError("bisectoriality_constant: I - itD is numerically singular");
        M = std::max(M, 1.0 / std::sqrt(smin2));
    }
    return M;
}

/// Regression of log|<(I + itD)^{-1} u, v>| on R/|t| over an (R, t) grid.
inline ResolventFitReport offdiag_resolvent(const OUModel& model, const SeparatedPairFactory& factory,
                                            const std::vector<real>& Rs, const std::vector<real>& ts,
                                            real noise_floor = 1e-12,
                                            const std::vector<real>& M_grid = default_bisectorial_grid()) {
    if (Rs.empty() || ts.empty()) throw DomainError("offdiag_resolvent: empty grid");
    const CMatrix D = assemble_dirac(model).matrix();
    const CMatrix I = CMatrix::Identity(D.rows(), D.cols());
    ResolventFitReport rep;
    for (real R : Rs) {
        if (!(R > 0.0)) throw DomainError("offdiag_resolvent: R must be positive");
        const auto [u, v] = factory(R);
        detail::separation(u, v, "offdiag_resolvent");
        const CVector us = u.state.stacked(), vs = v.state.stacked();
        for (real t : ts) {
            if (t == 0.0) throw DomainError("offdiag_resolvent: t must be non-zero");
            Eigen::PartialPivLU<CMatrix> lu(I + cplx(0.0, t) * D);
            ResolventFitRow row;
            row.R = R;
            row.t = t;
            row.x = R / std::abs(t);
            row.pairing = std::abs(vs.dot(lu.solve(us))) / (us.norm() * vs.norm());
            row.residual = detail::pair_slack(u, v);
            row.excluded = !(row.pairing > noise_floor);
            rep.rows.push_back(row);
        }
    }
    real sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (const auto& r : rep.rows) {
        if (r.excluded) {
            ++rep.excluded;
            continue;
        }
        const real y = std::log(r.pairing);
        sx += r.x;
        sy += y;
        sxx += r.x * r.x;
        sxy += r.x * y;
        ++n;
    }
    rep.used = n;
    if (n >= 2) {
        const real den = n * sxx - sx * sx;
        if (den > 0.0) {
            rep.slope = (n * sxy - sx * sy) / den;
            const real icpt = (sy - rep.slope * sx) / n;
            rep.C = std::exp(icpt);
            real ssr = 0, sst = 0;
            const real mean = sy / n;
            for (const auto& r : rep.rows) {
                if (r.excluded) continue;
                const real y = std::log(r.pairing);
                ssr += (y - icpt - rep.slope * r.x) * (y - icpt - rep.slope * r.x);
                sst += (y - mean) * (y - mean);
            }
            rep.r2 = sst > 0.0 ? 1.0 - ssr / sst : 0.0;
        }
    }
    rep.alpha = -rep.slope;
    rep.M = bisectoriality_constant(model, M_grid);
    return rep;
}

}  // namespace oulab
