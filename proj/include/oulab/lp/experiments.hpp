#pragma once

#include <optional>
#include <string>

#include "oulab/calculus/calculus.hpp"
#include "oulab/lp/witness.hpp"

namespace oulab {

/// Optimal analyticity angle: cot theta = sqrt((p-2)^2 + p^2 ||B - B^*||^2) / (2 sqrt(p-1)).
inline real predicted_angle(real p, const RMatrix& B) {
    if (!(p > 1.0) || !std::isfinite(p)) throw DomainError("predicted_angle: p must lie in (1, inf)");
    const RMatrix S = 0.5 * (B + B.transpose());
    if ((S - RMatrix::Identity(B.rows(), B.cols())).cwiseAbs().maxCoeff() > 1e-12)
        throw DomainError("predicted_angle: B + B^T must equal 2I");
    const RMatrix A = B - B.transpose();
    const real a = A.cwiseAbs().maxCoeff() == 0.0 ? 0.0 : Eigen::JacobiSVD<RMatrix>(A).singularValues()[0];
    const real cot = std::sqrt((p - 2.0) * (p - 2.0) + p * p * a * a) / (2.0 * std::sqrt(p - 1.0));
    return std::atan2(1.0, cot);
}

struct AngleRow {
    real phi = 0.0;
    real growth = 0.0;   // max over witnesses and radii of the L^p growth along the ray
    int excluded = 0;    // (phi, r) points dropped after a conditioning failure
};

struct AngleReport {
    real p = 0.0;
    real b = 0.0;
    real predicted = 0.0;
    real estimated = 0.0;  // last ray angle before the growth first exceeds the cap
    real cap = 0.0;
    std::string method;    // "exact-2-norm" or "lower-bound witness"
    std::vector<AngleRow> rows;
};

struct AngleOptions {
    std::vector<real> phis;
    std::vector<real> radii;
    real cap = 1.5;
    std::vector<real> amplitudes2 = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12};  // |w|^2 of the coherent witnesses
    int phases = 24;
    bool include_basis = true;
};

inline std::vector<real> linspace(real a, real b, int n) {
    std::vector<real> v;
    for (int i = 0; i < n; ++i) v.push_back(n == 1 ? a : a + (b - a) * i / (n - 1));
    return v;
}

namespace detail {

inline bool is_diagonal(const CMatrix& M) {
    for (Eigen::Index j = 0; j < M.cols(); ++j)
        for (Eigen::Index i = 0; i < M.rows(); ++i)
            if (i != j && M(i, j) != cplx(0.0)) return false;
    return true;
}

}  // namespace detail

/// Ray-growth profile of e^{zL}, z = r e^{i phi}. For p = 2 the exact truncated operator norm is used;
/// otherwise the maximum over a witness set (basis elements, and untapered coherent states when d = 1).
inline AngleReport estimate_angle(const OUModel& model, real p, const AngleOptions& o) {
    if (o.phis.empty() || o.radii.empty()) throw DomainError("estimate_angle: empty ray grid");
    AngleReport rep;
    rep.p = p;
    rep.b = model.dimension() == 2 ? model.B()(0, 1) : 0.0;
    rep.predicted = predicted_angle(p, model.B());
    rep.cap = o.cap;
    const CMatrix L = assemble_generator(model).matrix();
    const bool diag = detail::is_diagonal(L);
    auto group = [&](cplx z) -> CMatrix {
        if (!diag) return semigroup(model, z).matrix();
        CVector e(L.rows());
        for (Eigen::Index i = 0; i < e.size(); ++i) e[i] = std::exp(z * L(i, i));
        return e.asDiagonal();
    };

    const bool exact = p == 2.0;
    rep.method = exact ? "exact-2-norm" : "lower-bound witness";
    std::optional<LpEvaluator> ev;
    std::vector<CVector> witnesses;
    if (!exact) {
        ev.emplace(model.basis(), p);
        const auto n = static_cast<Eigen::Index>(model.scalar_size());
        if (o.include_basis)
            for (Eigen::Index k = 0; k < n; ++k) witnesses.push_back(CVector::Unit(n, k));
        if (model.dimension() == 1)
            for (real a2 : o.amplitudes2)
                for (int ph = 0; ph < o.phases; ++ph)
                    witnesses.push_back(tapered_coherent(std::polar(std::sqrt(a2), pi * ph / o.phases), model.max_degree(), 0.0));
    }
    std::vector<real> denoms;
    for (const auto& c : witnesses) denoms.push_back(ev->norm(c));

    bool crossed = false;
    rep.estimated = 0.0;
    for (real phi : o.phis) {
        AngleRow row;
        row.phi = phi;
        for (real r : o.radii) {
            try {
                const CMatrix T = group(std::polar(r, phi));
                if (!T.allFinite()) throw ConditioningError("estimate_angle: non-finite group matrix");
                if (exact) {
                    row.growth = std::max(row.growth, spectral_norm(T));
                } else {
                    for (std::size_t w = 0; w < witnesses.size(); ++w)
                        row.growth = std::max(row.growth, ev->norm(T * witnesses[w]) / denoms[w]);
                }
            } catch (const ConditioningError&) {
                ++row.excluded;
            }
        }
        if (!crossed && row.growth <= o.cap)
            rep.estimated = phi;
        else
            crossed = true;
        rep.rows.push_back(row);
    }
    return rep;
}

/// Membership in the Epperson region for the classical generator with eigenvalues -n, at time w:
/// |sin Im w| <= tan(theta_p) sinh(Re w), theta_p = arccos|2/p - 1|.
inline bool epperson_member(real p, cplx w) {
    if (!(p > 1.0) || !std::isfinite(p)) throw DomainError("epperson_member: p must lie in (1, inf)");
    const real theta = std::acos(std::abs(2.0 / p - 1.0));
    if (w.real() < 0.0) return false;
    if (std::abs(theta - 0.5 * pi) < 1e-15) return true;
    return std::abs(std::sin(w.imag())) <= std::tan(theta) * std::sinh(w.real());
}

struct EppersonPoint {
    cplx z;
    bool member = false;            // membership of z/2, matching the eigenvalues -n/2 of L
    std::vector<int> Ns;
    std::vector<real> growth;       // W(z) for each truncation degree
    bool diverging = false;         // W strictly increasing in N and W(N_max) >= 2 W(N_min)
};

/// Witness growth W(z) = max over basis and tapered coherent witnesses of degree <= N of
/// ||e^{zL} f||_p / ||f||_p, for d = 1, B = I, along a ladder of truncation degrees.
inline std::vector<EppersonPoint> epperson_scan(real p, const std::vector<cplx>& zs, const std::vector<int>& Ns,
                                                WitnessOptions o = {}) {
    if (zs.empty() || Ns.empty()) throw DomainError("epperson_scan: empty grid");
    o.refine_starts = 0;
    o.random_starts = 0;
    std::vector<EppersonPoint> out;
    for (cplx z : zs) {
        EppersonPoint pt;
        pt.z = z;
        pt.member = epperson_member(p, 0.5 * z);
        pt.Ns = Ns;
        out.push_back(pt);
    }
    for (int N : Ns) {
        const OUModel model = OUModel::classical(1, N);
        const LpEvaluator ev(model.basis(), p);
        for (auto& pt : out) {
            CVector m(N + 1);
            for (int n = 0; n <= N; ++n) m[n] = std::exp(-0.5 * pt.z * static_cast<real>(n));
            const CMatrix T = m.asDiagonal();
            pt.growth.push_back(best_witness(ev, T, o).ratio);
        }
    }
    for (auto& pt : out) {
        bool inc = pt.growth.size() >= 2;
        for (std::size_t i = 1; i < pt.growth.size(); ++i) inc = inc && pt.growth[i] > pt.growth[i - 1];
        pt.diverging = inc && pt.growth.back() >= 2.0 * pt.growth.front();
    }
    return out;
}

enum class BlowupOperator { RegularizedSchrodinger, RegularizedCosine };

struct BlowupReport {
    std::vector<real> raw;        // best ratio found at degree n, warm-started from degree n-1
    std::vector<real> sequence;   // running maximum (nested witness sets)
    std::vector<real> grid_only;  // best over the candidate grid without refinement
    real exact_p2 = 0.0;          // max |multiplier|, the exact p = 2 norm
    int monotone_from = 0;        // smallest n after which raw is non-decreasing
    real exponent = 0.0;          // least-squares slope of log sequence against log n over n >= 4
};

/// n -> max over witnesses f of degree <= n of ||(lambda - L)^{-alpha} U f||_p / ||f||_p, where U is
/// e^{itL} or cos(t sqrt(-L)); d = 1, B = I.
inline BlowupReport blowup_witness(const OUModel& model, real p, real lambda, real alpha, real t, BlowupOperator op,
                                   const WitnessOptions& o = {}) {
    model.require_symmetric("blowup_witness");
    if (model.dimension() != 1) throw DomainError("blowup_witness: implemented for d = 1");
    if (!(lambda > 0.0) || !(alpha >= 0.0)) throw DomainError("blowup_witness: need lambda > 0, alpha >= 0");
    const int N = model.max_degree();
    CVector m(N + 1);
    for (int n = 0; n <= N; ++n) {
        const real mu = 0.5 * n;  // -L eigenvalue
        const cplx U = op == BlowupOperator::RegularizedSchrodinger ? std::exp(cplx(0.0, -t * mu))
                                                                      : cplx(std::cos(t * std::sqrt(mu)));
        m[n] = std::pow(lambda + mu, -alpha) * U;
    }
    BlowupReport rep;
    rep.exact_p2 = m.cwiseAbs().maxCoeff();
    const LpEvaluator ev(model.basis(), p);
    real running = 0.0;
    std::vector<CVector> carry;
    for (int k = 1; k <= N; ++k) {
        const CMatrix T = m.head(k + 1).asDiagonal();
        const auto r = best_witness(ev, T, o, carry);
        carry = {r.witness};
        rep.raw.push_back(r.ratio);
        rep.grid_only.push_back(r.grid_ratio);
        running = std::max(running, r.ratio);
        rep.sequence.push_back(running);
    }
    rep.monotone_from = N;
    for (int k = N - 1; k >= 1; --k) {
        if (rep.raw[static_cast<std::size_t>(k)] >= rep.raw[static_cast<std::size_t>(k - 1)])
            rep.monotone_from = k;
        else
            break;
    }
    real sx = 0, sy = 0, sxx = 0, sxy = 0;
    int cnt = 0;
    for (int k = 4; k <= N; ++k) {
        const real x = std::log(static_cast<real>(k)), y = std::log(rep.sequence[static_cast<std::size_t>(k - 1)]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++cnt;
    }
    if (cnt >= 2) rep.exponent = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
    return rep;
}

}  // namespace oulab
