#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <ceres/ceres.h>

#include "oulab/operators/model.hpp"

namespace oulab {

/// L^p(gamma) ratios ||Phi T c||_p / ||Phi c||_p on a fixed Gauss-Hermite grid, for coefficient
/// vectors supported on the first `size` basis positions.
class LpEvaluator {
public:
    LpEvaluator(const BasisTruncation& basis, real p, int order = 0)
        : p_(p), grid_(basis.dimension(), order > 0 ? order : lp_exact_order(basis.max_degree(), p)) {
        if (!(p > 1.0) || !std::isfinite(p)) throw DomainError("LpEvaluator: p must lie in (1, inf)");
        phi_ = evaluation_matrix<real>(basis, grid_.points()).cast<cplx>();
    }

    real p() const { return p_; }
    const QuadratureGrid& grid() const { return grid_; }

    /// sum_i w_i |(Phi c)_i|^p for c of any length up to the basis size.
    real power_sum(const CVector& c) const { return power_sum_values(values(c)); }
    real norm(const CVector& c) const { return std::pow(power_sum(c), 1.0 / p_); }

    CVector values(const CVector& c) const { return phi_.leftCols(c.size()) * c; }

    real power_sum_values(const CVector& f) const {
        real s = 0.0;
        for (Eigen::Index i = 0; i < f.size(); ++i) s += grid_.weights()[i] * std::pow(std::abs(f[i]), p_);
        return s;
    }

    /// q = Phi^H (w |f|^{p-2} f) for f = Phi c; the Wirtinger gradient of the power sum is (p/2) q.
    CVector power_gradient(const CVector& f, Eigen::Index size) const {
        CVector r(f.size());
        for (Eigen::Index i = 0; i < f.size(); ++i) {
            const real a = std::abs(f[i]);
            r[i] = a > 0.0 ? grid_.weights()[i] * std::pow(a, p_ - 2.0) * f[i] : cplx(0.0);
        }
        return phi_.leftCols(size).adjoint() * r;
    }

private:
    real p_;
    QuadratureGrid grid_;
    CMatrix phi_;
};

/// Candidate witness set for a one-dimensional truncation of degree <= k.
struct WitnessOptions {
    int amplitudes = 14;         // |w|^2 on linspace(amp_lo, amp_hi) * k
    real amp_lo = 0.05;
    real amp_hi = 0.7;
    int phases = 24;             // arg w on [0, pi)
    std::vector<real> tapers = {0.0, 0.3, 0.5, 0.7};  // cos^2 taper over the top fraction of the degrees
    bool include_basis = true;
    int refine_starts = 10;      // best candidates of each taper handed to L-BFGS
    int random_starts = 2;       // seeded perturbations of the best candidate
    int max_iterations = 2000;
    std::uint64_t seed = 0;
};

/// c_n = w^n / sqrt(n!) for n <= k, smoothly cut off near n = k: a truncated coherent state.
inline CVector tapered_coherent(cplx w, int k, real taper) {
    CVector c(k + 1);
    const real lw = std::log(std::max(std::abs(w), 1e-300));
    const real aw = std::arg(w);
    for (int n = 0; n <= k; ++n) {
        const real mag = std::exp(n * lw - 0.5 * std::lgamma(n + 1.0));
        c[n] = std::polar(mag, n * aw);
        if (taper > 0.0 && k > 0) {
            const real s = std::clamp((n - (1.0 - taper) * k) / (taper * k), 0.0, 1.0);
            const real cs = std::cos(0.5 * pi * s);
            c[n] *= cs * cs;
        }
    }
    if (std::abs(w) == 0.0) c[0] = 1.0;
    return c;
}

/// Basis elements of degree <= k (group 0) and tapered coherent states on an amplitude/phase grid,
/// one group per taper (d = 1). `group` receives the group index of each candidate.
inline std::vector<CVector> witness_candidates(int k, const WitnessOptions& o, std::vector<int>* group = nullptr) {
    std::vector<CVector> out;
    auto push = [&](CVector c, int g) {
        out.push_back(std::move(c));
        if (group) group->push_back(g);
    };
    if (o.include_basis)
        for (int n = 0; n <= k; ++n) push(CVector::Unit(k + 1, n), 0);
    for (std::size_t t = 0; t < o.tapers.size(); ++t)
        for (int a = 0; a < o.amplitudes; ++a) {
            const real frac = o.amplitudes == 1 ? o.amp_lo : o.amp_lo + (o.amp_hi - o.amp_lo) * a / (o.amplitudes - 1);
            const real rho = std::sqrt(frac * std::max(k, 1));
            for (int ph = 0; ph < o.phases; ++ph)
                push(tapered_coherent(std::polar(rho, pi * ph / o.phases), k, o.tapers[t]), static_cast<int>(t) + 1);
        }
    return out;
}

namespace detail {

/// -log(||Phi T c||_p / ||Phi c||_p) over the real and imaginary parts of c.
class NegLogRatio final : public ceres::FirstOrderFunction {
public:
    NegLogRatio(const LpEvaluator& ev, const CMatrix& T) : ev_(ev), T_(T) {}
    bool Evaluate(const double* x, double* cost, double* grad) const override {
        const Eigen::Index n = T_.cols();
        CVector c(n);
        for (Eigen::Index i = 0; i < n; ++i) c[i] = cplx(x[i], x[n + i]);
        const CVector f = ev_.values(c);
        const CVector Tc = T_ * c;
        const CVector g = ev_.values(Tc);
        const real A = ev_.power_sum_values(f), B = ev_.power_sum_values(g);
        if (!(A > 0.0) || !(B > 0.0) || !std::isfinite(A) || !std::isfinite(B)) return false;
        *cost = -(std::log(B) - std::log(A)) / ev_.p();
        if (grad) {
            // d/d(Re c, Im c) of log(F)/p equals (Re, Im) of q / F, with q the Wirtinger form above.
            const CVector qA = ev_.power_gradient(f, n);
            const CVector qB = T_.adjoint() * ev_.power_gradient(g, n);
            const CVector q = qB / B - qA / A;
            for (Eigen::Index i = 0; i < n; ++i) {
                grad[i] = -q[i].real();
                grad[n + i] = -q[i].imag();
            }
        }
        return true;
    }
    int NumParameters() const override { return static_cast<int>(2 * T_.cols()); }

private:
    const LpEvaluator& ev_;
    const CMatrix& T_;
};

}  // namespace detail

/// L-BFGS ascent of ||Phi T c||_p / ||Phi c||_p from a start; returns the improved ratio and c.
inline real refine_witness(const LpEvaluator& ev, const CMatrix& T, CVector& c, int max_iterations) {
    const Eigen::Index n = T.cols();
    std::vector<double> x(static_cast<std::size_t>(2 * n));
    const real scale = c.norm() > 0.0 ? 1.0 / c.norm() : 1.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        x[static_cast<std::size_t>(i)] = c[i].real() * scale;
        x[static_cast<std::size_t>(n + i)] = c[i].imag() * scale;
    }
    ceres::GradientProblem problem(new detail::NegLogRatio(ev, T));
    ceres::GradientProblemSolver::Options opt;
    opt.line_search_direction_type = ceres::LBFGS;
    opt.max_lbfgs_rank = 8;
    opt.max_num_iterations = max_iterations;
    opt.logging_type = ceres::SILENT;
    opt.minimizer_progress_to_stdout = false;
    ceres::GradientProblemSolver::Summary summary;
    ceres::Solve(opt, problem, x.data(), &summary);
    for (Eigen::Index i = 0; i < n; ++i) c[i] = cplx(x[static_cast<std::size_t>(i)], x[static_cast<std::size_t>(n + i)]);
    return ev.norm(T * c) / ev.norm(c);
}

struct WitnessResult {
    real ratio = 0.0;     // best ||T f||_p / ||f||_p found
    real grid_ratio = 0.0; // best over the candidate grid before refinement
    CVector witness;
};

/// Largest L^p growth of T over the witness set of degree <= k = T.cols() - 1 (d = 1).
/// `extra` witnesses of lower degree (zero-padded) join the set and are always refined, which lets
/// a degree ladder carry its best witness upward.
inline WitnessResult best_witness(const LpEvaluator& ev, const CMatrix& T, const WitnessOptions& o,
                                  const std::vector<CVector>& extra = {}) {
    const int k = static_cast<int>(T.cols()) - 1;
    std::vector<int> group;
    auto cands = witness_candidates(k, o, &group);
    const int extra_group = static_cast<int>(o.tapers.size()) + 1;
    for (const auto& e : extra) {
        if (e.size() > k + 1) throw DimensionError("best_witness: extra witness exceeds degree k");
        CVector c = CVector::Zero(k + 1);
        c.head(e.size()) = e;
        cands.push_back(c);
        group.push_back(extra_group);
    }
    std::vector<std::pair<real, std::size_t>> scored;
    for (std::size_t i = 0; i < cands.size(); ++i) {
        const real den = ev.norm(cands[i]);
        if (!(den > 0.0)) continue;
        scored.emplace_back(ev.norm(T * cands[i]) / den, i);
    }
    // Ties broken by index keep the order independent of the sort implementation.
    std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
        return a.first != b.first ? a.first > b.first : a.second < b.second;
    });
    WitnessResult best;
    if (scored.empty()) return best;
    best.ratio = best.grid_ratio = scored.front().first;
    best.witness = cands[scored.front().second];
    std::vector<CVector> starts;
    std::vector<int> taken(o.tapers.size() + 1, 0);
    for (const auto& [ratio, i] : scored) {
        if (group[i] == extra_group)
            starts.push_back(cands[i]);
        else if (taken[static_cast<std::size_t>(group[i])]++ < o.refine_starts)
            starts.push_back(cands[i]);
    }
    std::mt19937_64 rng(o.seed + static_cast<std::uint64_t>(k));
    std::normal_distribution<real> nd(0.0, 1.0);
    for (int s = 0; s < o.random_starts; ++s) {
        CVector c = best.witness;
        const real amp = 0.1 * c.norm() / std::sqrt(static_cast<real>(c.size()));
        for (Eigen::Index i = 0; i < c.size(); ++i) c[i] += amp * cplx(nd(rng), nd(rng));
        starts.push_back(c);
    }
    for (auto& c : starts) {
        const real r = refine_witness(ev, T, c, o.max_iterations);
        if (std::isfinite(r) && r > best.ratio) {
            best.ratio = r;
            best.witness = c;
        }
    }
    return best;
}

}  // namespace oulab
