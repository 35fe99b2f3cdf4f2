#pragma once

#include <cstdint>
#include <random>

#include "oulab/probes/propagation.hpp"

namespace oulab {

namespace detail {

/// Closed-form [eta, D](f, g) = (<grad eta, B g>, -(grad eta) f), given the d compressed
/// multiplication matrices by the partial derivatives of eta.
inline CMatrix closed_form_commutator(const OUModel& model, const std::vector<CMatrix>& dEta) {
    const int d = model.dimension();
    const auto n = static_cast<Eigen::Index>(model.scalar_size());
    CMatrix C = CMatrix::Zero(n * (d + 1), n * (d + 1));
    for (int j = 0; j < d; ++j) {
        for (int k = 0; k < d; ++k)
            if (model.B()(j, k) != 0.0) C.block(0, (k + 1) * n, n, n) += model.B()(j, k) * dEta[static_cast<std::size_t>(j)];
        C.block((j + 1) * n, 0, n, n) = -dEta[static_cast<std::size_t>(j)];
    }
    return C;
}

}  // namespace detail

struct CommutatorReport {
    OperatorMatrix closed_form;      // (b)
    OperatorMatrix algebraic;        // (a) M_eta D - D M_eta
    int eta_degree = 0;
    int exact_degree = -1;           // inputs of degree <= this are free of truncation effects
    real agreement = 0.0;            // ||((a) - (b)) E|| / max(1, ||(b) E||) on those inputs
    int double_exact_degree = -1;
    real double_commutator = 0.0;    // ||[eta, (b)] E|| on inputs of degree <= double_exact_degree
};

/// [eta, D] for a polynomial eta given by its Hermite coefficients; grad eta is taken spectrally.
/// Multiplications are synthesize -> multiply -> expand on the model grid, which is exact on the
/// truncated span whenever deg(eta) <= 2N + 2.
inline CommutatorReport commutator(const OUModel& model, const SpectralFunction& eta) {
    detail::require_same_basis(eta.basis(), model.basis(), "commutator");
    const auto& basis = model.basis();
    const int d = model.dimension();
    const int N = model.max_degree();
    const int m = std::max(0, eta.effective_degree(1e-14));
    if (m > 2 * N + 2) throw DomainError("commutator: eta degree too high for exact multiplication");
    const RMatrix phi = grid_evaluation(basis, model.grid());
    const auto& w = model.grid().weights();
    auto mult = [&](const CVector& coeffs) {
        const CVector vals = phi.cast<cplx>() * coeffs;
        return CMatrix(phi.transpose().cast<cplx>() * (w.cast<cplx>().cwiseProduct(vals)).asDiagonal() * phi.cast<cplx>());
    };
    const CMatrix Meta = mult(eta.coeffs());
    const CVector grad = assemble_gradient(model).matrix() * eta.coeffs();
    const auto n = static_cast<Eigen::Index>(basis.size());
    std::vector<CMatrix> dEta;
    for (int j = 0; j < d; ++j) dEta.push_back(mult(grad.segment(j * n, n)));

    const CMatrix D = assemble_dirac(model).matrix();
    const CMatrix Mb = dirac_blockdiag(Meta, d);
    const CMatrix A = Mb * D - D * Mb;
    const CMatrix C = detail::closed_form_commutator(model, dEta);

    CommutatorReport r;
    const auto tag = dirac_space(basis);
    r.closed_form = OperatorMatrix(tag, tag, C);
    r.algebraic = OperatorMatrix(tag, tag, A);
    r.eta_degree = m;
    r.exact_degree = N - m - 1;
    if (r.exact_degree >= 0) {
        const CMatrix E = degree_embedding(basis, Space::Dirac, r.exact_degree);
        r.agreement = ((A - C) * E).norm() / std::max(1.0, (C * E).norm());
    }
    r.double_exact_degree = N - 2 * m + 1;
    if (r.double_exact_degree >= 0) {
        const CMatrix E = degree_embedding(basis, Space::Dirac, r.double_exact_degree);
        r.double_commutator = ((Mb * C - C * Mb) * E).norm();
    }
    return r;
}

struct CommutatorNormReport {
    int N = 0;
    real norm = 0.0;           // ||[eta, D]_N|| (largest singular value)
    real grad_sup = 0.0;       // sup |grad eta| (analytic bound)
    real measured_sup = 0.0;   // sup |grad eta| on a dense sample
    real slack = 0.0;          // max(0, norm - grad_sup)
    real aliasing = 0.0;       // change of the compressed matrix when the grid order doubles
};

/// Operator norm of the closed-form commutator for a bump, using the analytic gradient compressed
/// to the basis by quadrature. Compression cannot raise the sup norm, so the slack is only aliasing.
inline CommutatorNormReport commutator_norm(const OUModel& model, const BumpFunction& eta) {
    const int d = model.dimension();
    auto build = [&](const QuadratureGrid& grid) {
        std::vector<CMatrix> dEta;
        for (int j = 0; j < d; ++j)
            dEta.push_back(multiplication_matrix(model.basis(), grid, [&](const RVector& x) {
                return eta.gradient(x)[static_cast<std::size_t>(j)];
            }));
        return detail::closed_form_commutator(model, dEta);
    };
    const CMatrix C = build(model.grid());
    const QuadratureGrid fine(d, 2 * model.grid().order());
    const CMatrix Cf = build(fine);
    CommutatorNormReport r;
    r.N = model.max_degree();
    r.norm = Eigen::JacobiSVD<CMatrix>(C).singularValues()[0];
    r.grad_sup = eta.lipschitz_bound();
    r.measured_sup = eta.measured_lipschitz();
    r.slack = std::max(0.0, r.norm - r.grad_sup);
    r.aliasing = (C - Cf).norm();
    return r;
}

struct DuhamelReport {
    real lhs_norm = 0.0;
    real residual = 0.0;  // ||lhs - rhs|| / max(||lhs||, tiny)
};

/// [eta, e^{itD}]u = it int_0^1 e^{istD} [eta, D] e^{i(1-s)tD} u ds with Gauss-Legendre in s,
/// on a seeded random u; [eta, D] is the matrix commutator of the compressed multiplication.
inline DuhamelReport duhamel_check(const OUModel& model, const BumpFunction& eta, real t, int s_order,
                                   std::uint64_t seed = 7) {
    model.require_symmetric("duhamel_check");
    const int d = model.dimension();
    const DiracEvolution U(model);
    const CMatrix Mb = dirac_blockdiag(
        multiplication_matrix(model.basis(), model.grid(), [&](const RVector& x) { return eta.value(x); }), d);
    const CMatrix D = assemble_dirac(model).matrix();
    const CMatrix K = Mb * D - D * Mb;
    std::mt19937_64 rng(seed);
    std::normal_distribution<real> nd(0.0, 1.0);
    CVector u(D.rows());
    for (Eigen::Index i = 0; i < u.size(); ++i) u[i] = cplx(nd(rng), nd(rng));
    u /= u.norm();
    const CVector lhs = Mb * U.apply(t, u) - U.apply(t, Mb * u);
    const Rule1D rule = gauss_legendre(s_order);
    CVector rhs = CVector::Zero(u.size());
    for (std::size_t k = 0; k < rule.size(); ++k) {
        const real s = 0.5 * (rule.nodes[k] + 1.0);
        rhs += (0.5 * rule.weights[k]) * U.apply(s * t, K * U.apply((1.0 - s) * t, u));
    }
    rhs *= cplx(0.0, t);
    DuhamelReport r;
    r.lhs_norm = lhs.norm();
    r.residual = (lhs - rhs).norm() / std::max(r.lhs_norm, 1e-300);
    if (r.lhs_norm == 0.0) r.residual = rhs.norm();
    return r;
}

}  // namespace oulab
