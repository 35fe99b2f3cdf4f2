#pragma once

#include <functional>

#include <Eigen/Eigenvalues>

#include "oulab/operators/operator_matrix.hpp"

namespace oulab {

/// M = T diag(lambda) T^{-1}, with the condition number of T recorded.
struct SpectralDecomposition {
    CVector eigenvalues;
    CMatrix transform;
    CMatrix inverse;
    real condition = 1.0;
    bool unitary = false;
    real reconstruction_error = 0.0;  // relative, Frobenius
};

inline constexpr real kConditionLimit = 1e8;

inline bool is_hermitian(const CMatrix& M, real rel_tol = 1e-14) {
    const real scale = std::max(M.cwiseAbs().maxCoeff(), 1e-300);
    return (M - M.adjoint()).cwiseAbs().maxCoeff() <= rel_tol * scale;
}

/// Eigendecomposition used by matfun. Hermitian input takes the unitary route.
/// Throws ConditioningError when cond(T) exceeds 1e8 or the reconstruction fails.
inline SpectralDecomposition decompose(const CMatrix& M) {
    if (M.rows() != M.cols()) throw DimensionError("decompose: matrix must be square");
    SpectralDecomposition sd;
    if (is_hermitian(M)) {
        Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (M + M.adjoint()));
        if (es.info() != Eigen::Success) throw ConditioningError("decompose: Hermitian eigensolver failed");
        sd.eigenvalues = es.eigenvalues().cast<cplx>();
        sd.transform = es.eigenvectors();
        sd.inverse = sd.transform.adjoint();
        sd.unitary = true;
    } else {
        Eigen::ComplexEigenSolver<CMatrix> es(M);
        if (es.info() != Eigen::Success) throw ConditioningError("decompose: eigensolver failed");
        sd.eigenvalues = es.eigenvalues();
        sd.transform = es.eigenvectors();
        Eigen::JacobiSVD<CMatrix> svd(sd.transform);
        const auto& s = svd.singularValues();
        sd.condition = s[s.size() - 1] > 0 ? s[0] / s[s.size() - 1] : std::numeric_limits<real>::infinity();
        if (!(sd.condition <= kConditionLimit))
            throw ConditioningError("decompose: eigenbasis condition " + std::to_string(sd.condition) +
                                    " exceeds 1e8; use a semigroup-specific route");
        sd.inverse = sd.transform.partialPivLu().inverse();
    }
    const real scale = std::max(M.norm(), 1e-300);
    sd.reconstruction_error =
        (sd.transform * sd.eigenvalues.asDiagonal() * sd.inverse - M).norm() / scale;
    if (sd.reconstruction_error > 1e-9)
        throw ConditioningError("decompose: reconstruction error " + std::to_string(sd.reconstruction_error));
    return sd;
}

/// f(M) through the spectral decomposition.
inline CMatrix matfun(const CMatrix& M, const std::function<cplx(cplx)>& f) {
    const auto sd = decompose(M);
    CVector fl(sd.eigenvalues.size());
    for (Eigen::Index i = 0; i < fl.size(); ++i) fl[i] = f(sd.eigenvalues[i]);
    return sd.transform * fl.asDiagonal() * sd.inverse;
}

inline OperatorMatrix matfun(const OperatorMatrix& M, const std::function<cplx(cplx)>& f) {
    if (!(M.domain() == M.codomain())) throw DimensionError("matfun: operator must be an endomorphism");
    return {M.domain(), M.codomain(), matfun(M.matrix(), f)};
}

/// Hermitian-only variant with a real function on the real spectrum.
inline CMatrix hermitian_matfun(const CMatrix& M, const std::function<cplx(real)>& f) {
    if (!is_hermitian(M, 1e-12)) throw DomainError("hermitian_matfun: matrix is not Hermitian");
    Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (M + M.adjoint()));
    CVector fl(es.eigenvalues().size());
    for (Eigen::Index i = 0; i < fl.size(); ++i) fl[i] = f(es.eigenvalues()[i]);
    return es.eigenvectors() * fl.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace oulab
