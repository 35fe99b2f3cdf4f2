#pragma once

#include <cmath>
#include <utility>

#include "oulab/calculus/expm.hpp"
#include "oulab/calculus/matfun.hpp"
#include "oulab/operators/assembly.hpp"

namespace oulab {

/// e^{zL} by scaling and squaring on zL; no diagonalization, so non-normal L is fine.
inline OperatorMatrix semigroup(const OUModel& model, cplx z) {
    if (z.real() < 0.0) throw DomainError("semigroup: Re z must be non-negative");
    const auto L = assemble_generator(model);
    return {L.domain(), L.codomain(), expm(CMatrix(z * L.matrix()))};
}

/// Cosine and sine families cos(t sqrt(-L)), sin(t sqrt(-L)); B = I only.
inline std::pair<OperatorMatrix, OperatorMatrix> wave_pair(const OUModel& model, real t) {
    model.require_symmetric("wave_pair");
    const auto L = assemble_generator(model);
    const CMatrix minusL = -L.matrix();
    auto root = [](real l) { return std::sqrt(std::max(l, 0.0)); };
    CMatrix C = hermitian_matfun(minusL, [&](real l) { return cplx(std::cos(t * root(l))); });
    CMatrix S = hermitian_matfun(minusL, [&](real l) { return cplx(std::sin(t * root(l))); });
    return {OperatorMatrix(L.domain(), L.codomain(), std::move(C)), OperatorMatrix(L.domain(), L.codomain(), std::move(S))};
}

/// e^{(i/sqrt 2) t D} through the unitary eigendecomposition of the Hermitian Dirac matrix.
inline OperatorMatrix dirac_group(const OUModel& model, real t) {
    model.require_symmetric("dirac_group");
    const auto D = assemble_dirac(model);
    const real c = t / std::sqrt(2.0);
    return {D.domain(), D.codomain(), hermitian_matfun(D.matrix(), [&](real l) { return std::exp(cplx(0.0, c * l)); })};
}

/// e^{itD} (no 1/sqrt 2), the propagator used by the speed probes.
inline OperatorMatrix dirac_propagator(const OUModel& model, real t) {
    return dirac_group(model, std::sqrt(2.0) * t);
}

/// Riesz transforms R = grad (-L)^{-1/2} (zero on constants) and Rbar = div (-Lbar)^{-1/2} on range(grad).
struct RieszPair {
    OperatorMatrix R;     // scalar -> field
    OperatorMatrix Rbar;  // field -> scalar
};

namespace detail {

/// Pseudo-inverse square root of a PSD Hermitian matrix whose non-zero spectrum is >= 1/2.
inline CMatrix inverse_sqrt_psd(const CMatrix& A) {
    return hermitian_matfun(A, [](real l) { return l > 0.25 ? cplx(1.0 / std::sqrt(l)) : cplx(0.0); });
}

/// Moore-Penrose inverse of the gradient, mapping range(grad) back to mean-zero scalars.
inline CMatrix gradient_pinv(const OUModel& model) {
    const auto G = assemble_gradient(model).matrix();
    CVector inv(G.cols());
    for (std::size_t k = 0; k < model.basis().size(); ++k) {
        const int deg = model.basis()[k].degree();
        inv[static_cast<Eigen::Index>(k)] = deg == 0 ? 0.0 : 1.0 / deg;
    }
    return inv.asDiagonal() * G.adjoint();
}

}  // namespace detail

inline RieszPair riesz(const OUModel& model) {
    model.require_symmetric("riesz");
    const auto G = assemble_gradient(model);
    const auto L = assemble_generator(model);
    const auto Lbar = assemble_companion(model);
    CMatrix R = G.matrix() * detail::inverse_sqrt_psd(-L.matrix());
    CMatrix Rbar = G.matrix().adjoint() * detail::inverse_sqrt_psd(-Lbar.matrix());
    return {OperatorMatrix(G.domain(), G.codomain(), std::move(R)),
            OperatorMatrix(G.codomain(), G.domain(), std::move(Rbar))};
}

/// Underscored cosine and sine on range(grad), defined by Cbar(t) grad f = grad C(t) f, zero on the complement.
inline std::pair<OperatorMatrix, OperatorMatrix> underscored_wave_pair(const OUModel& model, real t) {
    const auto [C, S] = wave_pair(model, t);
    const auto G = assemble_gradient(model);
    const CMatrix Gp = detail::gradient_pinv(model);
    const SpaceTag F = G.codomain();
    return {OperatorMatrix(F, F, G.matrix() * C.matrix() * Gp), OperatorMatrix(F, F, G.matrix() * S.matrix() * Gp)};
}

/// Block formula [[C, (i/sqrt2) Rbar Sbar], [(i/sqrt2) R S, Cbar]] for the Dirac group.
inline OperatorMatrix block_group_formula(const OUModel& model, real t) {
    model.require_symmetric("block_group_formula");
    const auto [C, S] = wave_pair(model, t);
    const auto [Cb, Sb] = underscored_wave_pair(model, t);
    const auto rz = riesz(model);
    const cplx c(0.0, 1.0 / std::sqrt(2.0));
    const auto n = C.matrix().rows();
    const auto m = Cb.matrix().rows();
    CMatrix M(n + m, n + m);
    M.block(0, 0, n, n) = C.matrix();
    M.block(0, n, n, m) = c * rz.Rbar.matrix() * Sb.matrix();
    M.block(n, 0, m, n) = c * rz.R.matrix() * S.matrix();
    M.block(n, n, m, m) = Cb.matrix();
    const auto tag = dirac_space(model.basis());
    return {tag, tag, std::move(M)};
}

/// sgn(D) from the eigendecomposition: sign of each eigenvalue, zero on the kernel.
inline OperatorMatrix sgn_dirac(const OUModel& model) {
    model.require_symmetric("sgn_dirac");
    const auto D = assemble_dirac(model);
    return {D.domain(), D.codomain(),
            hermitian_matfun(D.matrix(), [](real l) { return cplx(l > 0.5 ? 1.0 : (l < -0.5 ? -1.0 : 0.0)); })};
}

/// n D (I + n sqrt(D^2))^{-1}, which converges to sgn(D) as n grows.
inline OperatorMatrix sgn_dirac_limit(const OUModel& model, real n) {
    model.require_symmetric("sgn_dirac_limit");
    const auto D = assemble_dirac(model);
    const CMatrix absD = hermitian_matfun(D.matrix(), [](real l) { return cplx(std::abs(l)); });
    const auto I = CMatrix::Identity(absD.rows(), absD.cols());
    CMatrix M = (I + n * absD).partialPivLu().solve(n * D.matrix());
    return {D.domain(), D.codomain(), std::move(M)};
}

enum class ResolventKind { Dirac, Generator };

namespace detail {

inline CMatrix checked_inverse(const CMatrix& A, const char* what) {
    Eigen::PartialPivLU<CMatrix> lu(A);
    const real rc = lu.rcond();
    if (!(rc > 1e-14)) throw ConditioningError(std::string(what) + ": singular system (rcond " + std::to_string(rc) + ")");
    return lu.inverse();
}

}  // namespace detail

/// (I - itD)^{-1} or (I - t^2 L)^{-1} by a dense solve.
inline OperatorMatrix resolvent(const OUModel& model, real t, ResolventKind which) {
    const auto A = which == ResolventKind::Dirac ? assemble_dirac(model) : assemble_generator(model);
    const auto n = A.matrix().rows();
    const CMatrix I = CMatrix::Identity(n, n);
    if (t == 0.0) return OperatorMatrix::identity(A.domain());
    const CMatrix M = which == ResolventKind::Dirac ? CMatrix(I - cplx(0.0, t) * A.matrix())
                                                    : CMatrix(I - (t * t) * A.matrix());
    return {A.domain(), A.codomain(), detail::checked_inverse(M, "resolvent")};
}

/// Frobenius-relative residual of (I+itD)^{-1} + (I-itD)^{-1} = 2 (I + t^2 D^2)^{-1}.
inline real resolvent_corollary_residual(const OUModel& model, real t) {
    const auto D = assemble_dirac(model).matrix();
    const auto n = D.rows();
    const CMatrix I = CMatrix::Identity(n, n);
    const CMatrix plus = detail::checked_inverse(I + cplx(0.0, t) * D, "resolvent");
    const CMatrix minus = detail::checked_inverse(I - cplx(0.0, t) * D, "resolvent");
    const CMatrix rhs = 2.0 * detail::checked_inverse(I + (t * t) * D * D, "resolvent");
    return (plus + minus - rhs).norm() / rhs.norm();
}

/// (lambda - L)^{-alpha} through matfun, principal branch.
inline OperatorMatrix frac_power_resolvent(const OUModel& model, real lambda, real alpha) {
    if (!(lambda > 0.0)) throw DomainError("frac_power_resolvent: lambda must be positive");
    if (!(alpha >= 0.0)) throw DomainError("frac_power_resolvent: alpha must be non-negative");
    const auto L = assemble_generator(model);
    if (alpha == 0.0) return OperatorMatrix::identity(L.domain());
    return matfun(L, [&](cplx mu) { return std::pow(lambda - mu, -alpha); });
}

}  // namespace oulab
