#pragma once

#include "oulab/calculus/calculus.hpp"

namespace oulab {

/// max |<h_a, h_b>_grid - delta_ab| over the truncation.
inline real orthonormality_error(const OUModel& model) {
    const RMatrix phi = grid_evaluation(model.basis(), model.grid());
    const RMatrix gram = phi.transpose() * model.grid().weights().asDiagonal() * phi;
    return (gram - RMatrix::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
}

/// Divergence built pointwise, div(h_b e_j) = x_j h_b - d_j h_b, then expanded on the grid.
/// Independent of the assembled gradient, so comparing it with G^H tests the adjoint relation.
inline CMatrix divergence_by_quadrature(const OUModel& model) {
    const auto& basis = model.basis();
    const auto& grid = model.grid();
    const int d = model.dimension();
    const auto n = static_cast<Eigen::Index>(basis.size());
    const RMatrix phi = grid_evaluation(basis, grid);
    const RMatrix weighted = grid.weights().asDiagonal() * phi;
    RMatrix vals(grid.size(), n * d);
    for (int j = 0; j < d; ++j)
        for (Eigen::Index b = 0; b < n; ++b) {
            const MultiIndex& beta = basis[static_cast<std::size_t>(b)];
            RVector col = grid.points().row(j).transpose().cwiseProduct(phi.col(b));
            if (beta[j] > 0) {
                const auto lower = basis.position(beta.shifted(j, -1).entries());
                col -= std::sqrt(static_cast<real>(beta[j])) * phi.col(static_cast<Eigen::Index>(lower));
            }
            vals.col(j * n + b) = col;
        }
    return (weighted.transpose() * vals).cast<cplx>();
}

/// ||div_quadrature - G^H||_max.
inline real adjointness_error(const OUModel& model) {
    const CMatrix G = assemble_gradient(model).matrix();
    return (divergence_by_quadrature(model) - G.adjoint()).cwiseAbs().maxCoeff();
}

/// max over the degree <= N-1 block of |(sqrt(-L)^H sqrt(-L) - 1/2 G^H G)(a, b)|, i.e. the polarized
/// form of ||sqrt(-L) f||^2 = 1/2 ||grad f||^2. B = I.
inline real riesz_l2_error(const OUModel& model) {
    model.require_symmetric("riesz_l2_error");
    const CMatrix L = assemble_generator(model).matrix();
    const CMatrix G = assemble_gradient(model).matrix();
    const CMatrix root = hermitian_matfun(-L, [](real l) { return cplx(std::sqrt(std::max(l, 0.0))); });
    const CMatrix E = degree_embedding(model.basis(), Space::Scalar, model.max_degree() - 1);
    const CMatrix diff = E.adjoint() * (root.adjoint() * root - 0.5 * G.adjoint() * G) * E;
    return diff.cwiseAbs().maxCoeff();
}

/// ||e^{sL} e^{tL} - e^{(s+t)L}||_F / ||e^{(s+t)L}||_F.
inline real semigroup_law_error(const OUModel& model, cplx s, cplx t) {
    const CMatrix a = semigroup(model, s).matrix() * semigroup(model, t).matrix();
    const CMatrix b = semigroup(model, s + t).matrix();
    return (a - b).norm() / b.norm();
}

/// ||U(s) U(t) - U(s+t)||_F / ||U(s+t)||_F for the Dirac group.
inline real dirac_group_law_error(const OUModel& model, real s, real t) {
    const CMatrix a = dirac_group(model, s).matrix() * dirac_group(model, t).matrix();
    const CMatrix b = dirac_group(model, s + t).matrix();
    return (a - b).norm() / b.norm();
}

/// Orthonormal columns spanning scalars of degree <= N-2 together with grad of scalars of degree <= N-1.
inline CMatrix group_formula_subspace(const OUModel& model) {
    const auto& basis = model.basis();
    const int N = model.max_degree();
    const auto n = static_cast<Eigen::Index>(basis.size());
    const int d = model.dimension();
    const CMatrix Es = degree_embedding(basis, Space::Scalar, N - 2);
    const CMatrix Qf = range_basis(assemble_gradient(model).matrix() * degree_embedding(basis, Space::Scalar, N - 1));
    CMatrix E = CMatrix::Zero(n * (d + 1), Es.cols() + Qf.cols());
    E.topLeftCorner(n, Es.cols()) = Es;
    E.bottomRightCorner(n * d, Qf.cols()) = Qf;
    return E;
}

/// Spectral-norm gap between the block formula and e^{(i/sqrt2) t D} on group_formula_subspace.
inline real group_formula_error(const OUModel& model, real t) {
    const CMatrix E = group_formula_subspace(model);
    const CMatrix diff = (block_group_formula(model, t).matrix() - dirac_group(model, t).matrix()) * E;
    return Eigen::JacobiSVD<CMatrix>(diff).singularValues()[0];
}

/// ||R C(t) - Cbar(t) R||_F.
inline real intertwining_error(const OUModel& model, real t) {
    const auto rz = riesz(model);
    const auto C = wave_pair(model, t).first.matrix();
    const auto Cb = underscored_wave_pair(model, t).first.matrix();
    return (rz.R.matrix() * C - Cb * rz.R.matrix()).norm();
}

struct ProjectionCheck {
    real hermitian = 0.0;     // ||P - P^H||_F
    real idempotent = 0.0;    // ||P^2 - P||_F
    Eigen::Index rank = 0;    // numerical rank
    Eigen::Index expected = 0;
    real target_gap = 0.0;    // ||P - P_target||_F against the independently built projector
};

/// 1/2 Rbar R on scalars (target: projector onto mean-zero functions) and 1/2 R Rbar on fields
/// (target: projector onto range(grad)).
inline std::pair<ProjectionCheck, ProjectionCheck> riesz_projections(const OUModel& model) {
    const auto rz = riesz(model);
    const CMatrix P = 0.5 * rz.Rbar.matrix() * rz.R.matrix();
    const CMatrix Q = 0.5 * rz.R.matrix() * rz.Rbar.matrix();
    const auto n = static_cast<Eigen::Index>(model.scalar_size());
    CMatrix Pt = CMatrix::Identity(n, n);
    Pt(0, 0) = 0.0;  // the constant h_0 sits first in graded order
    const CMatrix Qt = gradient_range_projector(model);
    auto check = [](const CMatrix& M, const CMatrix& target, Eigen::Index expected) {
        ProjectionCheck c;
        c.hermitian = (M - M.adjoint()).norm();
        c.idempotent = (M * M - M).norm();
        c.rank = numerical_rank(M);
        c.expected = expected;
        c.target_gap = (M - target).norm();
        return c;
    };
    // range(grad) has the dimension of the mean-zero scalars, since grad is injective on them.
    return {check(P, Pt, n - 1), check(Q, Qt, n - 1)};
}

}  // namespace oulab
