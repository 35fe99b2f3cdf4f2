#pragma once

#include <cmath>

#include "oulab/calculus/calculus.hpp"

namespace oulab {

struct WeylQuadrature {
    real range_factor = 8.0;  // S = range_factor * sqrt(t), at least 8
    int nodes_per_panel = 24;
    real tolerance = 1e-8;    // target; the Gaussian tail must stay below 0.1x this
};

struct WeylResult {
    OperatorMatrix value;
    real range = 0.0;
    real tail_bound = 0.0;
    std::size_t nodes = 0;
};

/// Normalized Weyl integrals of the Dirac group:
///   moment 0: (2 pi t)^{-1/2}            int e^{-s^2/2t} e^{-isD} ds = e^{-t D^2/2}
///   moment 1: i (2 pi t^3)^{-1/2}        int s e^{-s^2/2t} e^{-isD} ds = D e^{-t D^2/2}
///   moment 2: (2 pi t)^{-1/2} t^{-1}     int s^2 e^{-s^2/2t} e^{-isD} ds = (I - t D^2) e^{-t D^2/2}
/// The integral runs over [-S, S] by composite Gauss-Legendre applied to e^{-isD} = V e^{-is Lambda} V^*.
inline WeylResult weyl_integral(const OUModel& model, real t, int moment, const WeylQuadrature& q = {}) {
    model.require_symmetric("weyl_integral");
    if (!(t > 0.0)) throw DomainError("weyl_integral: t must be positive");
    if (moment < 0 || moment > 2) throw DomainError("weyl_integral: moment must be 0, 1 or 2");
    if (q.range_factor < 8.0) throw DomainError("weyl_integral: integration range must satisfy S >= 8 sqrt(t)");
    const real S = q.range_factor * std::sqrt(t);
    const real a = S / std::sqrt(2.0 * t);
    // Tail of the normalized weight beyond |s| > S (|e^{-isD}| = 1).
    const real g = std::exp(-a * a);
    real tail = 0.0;
    if (moment == 0) tail = std::erfc(a);
    if (moment == 1) tail = 2.0 * g / std::sqrt(2.0 * pi * t);
    if (moment == 2) tail = std::erfc(a) + 2.0 * a * g / std::sqrt(pi);
    if (tail > 0.1 * q.tolerance)
        throw ConvergenceError("weyl_integral: truncated range leaves tail " + std::to_string(tail), tail);

    const auto D = assemble_dirac(model);
    Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (D.matrix() + D.matrix().adjoint()));
    const RVector& lam = es.eigenvalues();
    const real lmax = lam.cwiseAbs().maxCoeff();
    // Panels resolve both the Gaussian width and the fastest oscillation.
    const real width = std::min(std::sqrt(t), lmax > 0 ? pi / lmax : std::sqrt(t));
    const int panels = std::max(8, static_cast<int>(std::ceil(2.0 * S / width)));
    const Rule1D rule = composite_legendre(-S, S, panels, q.nodes_per_panel);

    const real norm0 = 1.0 / std::sqrt(2.0 * pi * t);
    CVector acc = CVector::Zero(lam.size());
    for (std::size_t k = 0; k < rule.size(); ++k) {
        const real s = rule.nodes[k];
        real phi = std::exp(-s * s / (2.0 * t)) * norm0;
        if (moment == 1) phi *= s / t;
        if (moment == 2) phi *= s * s / t;
        const cplx w = rule.weights[k] * phi;
        for (Eigen::Index i = 0; i < lam.size(); ++i) acc[i] += w * std::exp(cplx(0.0, -s * lam[i]));
    }
    if (moment == 1) acc *= cplx(0.0, 1.0);
    CMatrix M = es.eigenvectors() * acc.asDiagonal() * es.eigenvectors().adjoint();
    return {OperatorMatrix(D.domain(), D.codomain(), std::move(M)), S, tail, rule.size()};
}

struct SubordinationQuadrature {
    int nodes_per_panel = 16;
    int panels = 32;
    real tolerance = 1e-6;
};

struct SubordinationResult {
    OperatorMatrix value;
    real residual = 0.0;  // difference between the final rule and the one with half the panels
    real tail_bound = 0.0;
};

/// e^{-z sqrt(-L)} = pi^{-1/2} int_0^inf e^{-u} u^{-1/2} exp(z^2 L / (4u)) du, with u = v^2:
///   = 2 pi^{-1/2} int_0^inf e^{-v^2} exp(z^2 L / (4 v^2)) dv.
/// The integral converges only when Re(z^2) >= 0, i.e. |arg z| <= pi/4. The matrix exponentials
/// exp(tau L) are applied through the unitary eigendecomposition of the self-adjoint L.
inline SubordinationResult subordination(const OUModel& model, cplx z, const SubordinationQuadrature& q = {}) {
    model.require_symmetric("subordination");
    if (z.real() < 0.0) throw DomainError("subordination: Re z must be non-negative");
    const auto L = assemble_generator(model);
    if (z == cplx(0.0)) return {OperatorMatrix::identity(L.domain()), 0.0, 0.0};
    const cplx z2 = z * z;
    if (z2.real() < 0.0)
        throw DomainError("subordination: the u-integral diverges for Re(z^2) < 0 (|arg z| > pi/4)");

    // Tail beyond v = V: 2 pi^{-1/2} int_V^inf e^{-v^2} dv = erfc(V).
    real V = 2.0;
    while (std::erfc(V) > 0.1 * q.tolerance) V += 0.25;
    const real tail = std::erfc(V);

    Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (L.matrix() + L.matrix().adjoint()));
    const RVector& lam = es.eigenvalues();
    auto integrate = [&](int panels) {
        const Rule1D rule = composite_legendre(0.0, V, panels, q.nodes_per_panel);
        CVector acc = CVector::Zero(lam.size());
        for (std::size_t k = 0; k < rule.size(); ++k) {
            const real v = rule.nodes[k];
            const cplx tau = z2 / (4.0 * v * v);
            const real w = rule.weights[k] * std::exp(-v * v);
            for (Eigen::Index i = 0; i < lam.size(); ++i) acc[i] += w * std::exp(tau * lam[i]);
        }
        acc *= 2.0 / std::sqrt(pi);
        return CMatrix(es.eigenvectors() * acc.asDiagonal() * es.eigenvectors().adjoint());
    };
    // Near v = 0 the integrand oscillates when Im(z^2) != 0, so panels double until the rule settles.
    int panels = q.panels;
    CMatrix coarse = integrate(panels);
    CMatrix fine = integrate(2 * panels);
    real residual = (fine - coarse).cwiseAbs().maxCoeff();
    while (residual > q.tolerance && panels < 64 * q.panels) {
        panels *= 2;
        coarse = std::move(fine);
        fine = integrate(2 * panels);
        residual = (fine - coarse).cwiseAbs().maxCoeff();
    }
    if (residual > q.tolerance)
        throw ConvergenceError("subordination: quadrature residual " + std::to_string(residual), residual);
    return {OperatorMatrix(L.domain(), L.codomain(), std::move(fine)), residual, tail};
}

}  // namespace oulab
