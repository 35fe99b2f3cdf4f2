#pragma once

#include <cmath>

#include "oulab/operators/operator_matrix.hpp"

namespace oulab {

/// Gradient: the j-th block maps h_alpha to sqrt(alpha_j) h_{alpha - e_j}.
inline OperatorMatrix assemble_gradient(const OUModel& model) {
    const auto& basis = model.basis();
    const int d = basis.dimension();
    const auto n = static_cast<Eigen::Index>(basis.size());
    CMatrix G = CMatrix::Zero(n * d, n);
    for (std::size_t k = 0; k < basis.size(); ++k) {
        const MultiIndex& a = basis[k];
        for (int j = 0; j < d; ++j) {
            if (a[j] == 0) continue;
            const std::size_t row = basis.position(a.shifted(j, -1));
            G(j * n + static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(k)) = std::sqrt(static_cast<real>(a[j]));
        }
    }
    return {scalar_space(basis), field_space(basis), std::move(G)};
}

/// Divergence: the gamma-adjoint of the gradient, i.e. its conjugate transpose.
inline OperatorMatrix assemble_divergence(const OUModel& model) { return assemble_gradient(model).adjoint(); }

/// B acting pointwise on field values: (Bg)_j = sum_k B_jk g_k.
inline OperatorMatrix assemble_drift(const OUModel& model) {
    const auto& basis = model.basis();
    const int d = basis.dimension();
    const auto n = static_cast<Eigen::Index>(basis.size());
    CMatrix M = CMatrix::Zero(n * d, n * d);
    for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k)
            if (model.B()(j, k) != 0.0) M.block(j * n, k * n, n, n).diagonal().setConstant(model.B()(j, k));
    return {field_space(basis), field_space(basis), std::move(M)};
}

/// L = -1/2 div B grad on the scalar space.
inline OperatorMatrix assemble_generator(const OUModel& model) {
    const auto G = assemble_gradient(model);
    return cplx(-0.5) * (G.adjoint() * assemble_drift(model) * G);
}

/// Companion operator -1/2 grad div B on the field space.
inline OperatorMatrix assemble_companion(const OUModel& model) {
    const auto G = assemble_gradient(model);
    return cplx(-0.5) * (G * G.adjoint() * assemble_drift(model));
}

/// Hodge-Dirac block operator [[0, div B], [grad, 0]] on scalar (+) field.
inline OperatorMatrix assemble_dirac(const OUModel& model) {
    const auto& basis = model.basis();
    const auto G = assemble_gradient(model);
    const auto DB = G.adjoint() * assemble_drift(model);
    const auto n = static_cast<Eigen::Index>(basis.size());
    const auto m = G.matrix().rows();
    CMatrix D = CMatrix::Zero(n + m, n + m);
    D.block(0, n, n, m) = DB.matrix();
    D.block(n, 0, m, n) = G.matrix();
    return {dirac_space(basis), dirac_space(basis), std::move(D)};
}

/// Coordinate projector onto coefficients of degree <= k in the given space.
inline CMatrix degree_projector(const BasisTruncation& basis, Space kind, int k) {
    const auto n = static_cast<Eigen::Index>(basis.size());
    const int blocks = kind == Space::Scalar ? 1 : (kind == Space::Field ? basis.dimension() : basis.dimension() + 1);
    CMatrix P = CMatrix::Zero(n * blocks, n * blocks);
    for (int b = 0; b < blocks; ++b)
        for (std::size_t i = 0; i < basis.size(); ++i)
            if (basis[i].degree() <= k) P(b * n + static_cast<Eigen::Index>(i), b * n + static_cast<Eigen::Index>(i)) = 1.0;
    return P;
}

/// Column selector onto the coordinates of degree <= k (a tall isometry), scalar or per block.
inline CMatrix degree_embedding(const BasisTruncation& basis, Space kind, int k) {
    const CMatrix P = degree_projector(basis, kind, k);
    Eigen::Index cols = 0;
    for (Eigen::Index i = 0; i < P.rows(); ++i) cols += P(i, i) != cplx(0.0) ? 1 : 0;
    CMatrix E = CMatrix::Zero(P.rows(), cols);
    Eigen::Index c = 0;
    for (Eigen::Index i = 0; i < P.rows(); ++i)
        if (P(i, i) != cplx(0.0)) E(i, c++) = 1.0;
    return E;
}

/// Orthonormal basis (columns) of the range of a matrix, by SVD with relative rank tolerance.
inline CMatrix range_basis(const CMatrix& A, real rel_tol = 1e-10) {
    Eigen::JacobiSVD<CMatrix> svd(A, Eigen::ComputeThinU);
    const auto& s = svd.singularValues();
    Eigen::Index r = 0;
    const real smax = s.size() ? s[0] : 0.0;
    while (r < s.size() && s[r] > rel_tol * std::max(smax, 1e-300)) ++r;
    return svd.matrixU().leftCols(r);
}

/// Numerical rank with relative tolerance.
inline Eigen::Index numerical_rank(const CMatrix& A, real rel_tol = 1e-10) { return range_basis(A, rel_tol).cols(); }

/// Orthogonal projector onto the range of the gradient inside the field space.
inline CMatrix gradient_range_projector(const OUModel& model) {
    const CMatrix Q = range_basis(assemble_gradient(model).matrix());
    return Q * Q.adjoint();
}

}  // namespace oulab
