#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "oulab/calculus/calculus.hpp"
#include "oulab/probes/bump.hpp"
#include "oulab/probes/support.hpp"

namespace oulab {

/// e^{itD} for the Hermitian Dirac matrix, diagonalized once and reused over a time grid.
class DiracEvolution {
public:
    explicit DiracEvolution(const OUModel& model) {
        model.require_symmetric("DiracEvolution");
        const auto D = assemble_dirac(model).matrix();
        Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (D + D.adjoint()));
        V_ = es.eigenvectors();
        lam_ = es.eigenvalues();
    }
    CVector apply(real t, const CVector& u) const {
        CVector c = V_.adjoint() * u;
        for (Eigen::Index i = 0; i < c.size(); ++i) c[i] *= std::exp(cplx(0.0, t * lam_[i]));
        return V_ * c;
    }
    CMatrix matrix(real t) const {
        CVector ph(lam_.size());
        for (Eigen::Index i = 0; i < ph.size(); ++i) ph[i] = std::exp(cplx(0.0, t * lam_[i]));
        return V_ * ph.asDiagonal() * V_.adjoint();
    }

private:
    CMatrix V_;
    RVector lam_;
};

struct LeakageReport {
    real t = 0.0;
    real delta = 0.0;
    real leakage = 0.0;   // ||e^{itD}u outside K_{|t|+delta}|| / ||u||
    real residual = 0.0;  // realization residual of u
};

/// Relative mass of e^{itD}u outside the dilation K_{|t|+delta} of the nominal carrier.
inline LeakageReport leakage(const OUModel& model, const SupportSpec& u, real t, real delta,
                             const DiracEvolution* evolution = nullptr) {
    if (delta < 0.0) throw DomainError("leakage: margin must be non-negative");
    std::optional<DiracEvolution> local;
    if (!evolution) evolution = &local.emplace(model);
    const CVector v = evolution->apply(t, u.state.stacked());
    const RMatrix out = complement_gram(model.basis(), u.nominal.dilated(std::abs(t) + delta));
    return {t, delta, std::sqrt(masked_mass2(v, out)) / u.state.norm(), u.residual};
}

/// Same measurement for the Schrodinger group e^{itL} acting on the scalar part of u.
inline LeakageReport schrodinger_leakage(const OUModel& model, const SupportSpec& u, real t, real delta) {
    if (delta < 0.0) throw DomainError("schrodinger_leakage: margin must be non-negative");
    const auto L = assemble_generator(model).matrix();
    const CMatrix U = hermitian_matfun(L, [&](real l) { return std::exp(cplx(0.0, t * l)); });
    const CVector v = U * u.state.scalar().coeffs();
    const RMatrix out = complement_gram(model.basis(), u.nominal.dilated(std::abs(t) + delta));
    return {t, delta, std::sqrt(masked_mass2(v, out)) / u.state.scalar().norm(), u.residual};
}

/// Multiplication by a pointwise function, compressed to the truncated basis by quadrature:
/// M(a, b) = sum_i w_i g(x_i) h_a(x_i) h_b(x_i).
template <typename F>
CMatrix multiplication_matrix(const BasisTruncation& basis, const QuadratureGrid& grid, F&& g) {
    const RMatrix phi = evaluation_matrix<real>(basis, grid.points());
    RVector wg(grid.size());
    for (Eigen::Index i = 0; i < grid.size(); ++i) {
        RVector x = grid.points().col(i);
        wg[i] = grid.weights()[i] * g(x);
    }
    return (phi.transpose() * wg.asDiagonal() * phi).cast<cplx>();
}

/// Block-diagonal copy of a scalar operator on every block of the Dirac space.
inline CMatrix dirac_blockdiag(const CMatrix& M, int d) {
    const auto n = M.rows();
    CMatrix out = CMatrix::Zero(n * (d + 1), n * (d + 1));
    for (int b = 0; b <= d; ++b) out.block(b * n, b * n, n, n) = M;
    return out;
}

struct McIntoshMorrisPoint {
    real t = 0.0;
    real lhs = 0.0;            // |<e^{itD}u, v>|
    real rhs = 0.0;            // min over n of |t|^n ||grad eta||^n ||u|| ||v||
    int best_n = 0;
    real slack = 0.0;          // (residual_u + residual_v) ||u|| ||v||
    real hypothesis_u = 0.0;   // ||eta u - u|| / ||u||
    real hypothesis_v = 0.0;   // ||eta v|| / ||v||
    bool in_regime = false;    // |t| ||grad eta|| < 1
    bool holds = false;        // lhs <= rhs + slack
};

/// McIntosh-Morris bound for supports separated by eta. The hypotheses eta u = u and eta v = 0
/// are measured by quadrature; a violation above `hypothesis_tol` is refused.
inline McIntoshMorrisPoint mcintosh_morris_bound(const OUModel& model, const SupportSpec& u, const SupportSpec& v,
                                                 const BumpFunction& eta, real t, int n_max,
                                                 real hypothesis_tol = 1e-2, const DiracEvolution* evolution = nullptr) {
    model.require_symmetric("mcintosh_morris_bound");
    std::optional<DiracEvolution> local;
    if (!evolution) evolution = &local.emplace(model);
    const int d = model.dimension();
    const CMatrix Meta = dirac_blockdiag(
        multiplication_matrix(model.basis(), model.grid(), [&](const RVector& x) { return eta.value(x); }), d);
    const CVector us = u.state.stacked(), vs = v.state.stacked();
    McIntoshMorrisPoint p;
    p.t = t;
    p.hypothesis_u = (Meta * us - us).norm() / us.norm();
    p.hypothesis_v = (Meta * vs).norm() / vs.norm();
    if (p.hypothesis_u > hypothesis_tol || p.hypothesis_v > hypothesis_tol)
        throw DomainError("mcintosh_morris_bound: hypothesis eta u = u, eta v = 0 violated (residuals " +
                          std::to_string(p.hypothesis_u) + ", " + std::to_string(p.hypothesis_v) + ")");
    const real nu = us.norm(), nv = vs.norm();
    p.lhs = std::abs(vs.dot(evolution->apply(t, us)));
    const real L = eta.lipschitz_bound();
    p.rhs = nu * nv;
    p.best_n = 0;
    for (int n = 1; n <= n_max; ++n) {
        const real r = std::pow(std::abs(t) * L, n) * nu * nv;
        if (r < p.rhs) {
            p.rhs = r;
            p.best_n = n;
        }
    }
    p.slack = (u.residual + v.residual) * nu * nv;
    p.in_regime = std::abs(t) * L < 1.0;
    p.holds = p.lhs <= p.rhs + p.slack;
    return p;
}

}  // namespace oulab
