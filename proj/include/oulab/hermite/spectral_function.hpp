#pragma once

#include <cmath>
#include <functional>
#include <type_traits>

#include "oulab/hermite/quadrature.hpp"

namespace oulab {

/// Element of L^2(R^d, gamma) stored as coefficients over a truncated Hermite basis.
class SpectralFunction {
public:
    SpectralFunction() = default;
    SpectralFunction(BasisPtr basis, CVector coeffs) : basis_(std::move(basis)), coeffs_(std::move(coeffs)) {
        if (!basis_) throw DimensionError("SpectralFunction: null basis");
        if (static_cast<std::size_t>(coeffs_.size()) != basis_->size())
            throw DimensionError("SpectralFunction: coefficient length does not match the basis");
    }

    static SpectralFunction zero(BasisPtr basis) {
        const auto n = static_cast<Eigen::Index>(basis->size());
        return {std::move(basis), CVector::Zero(n)};
    }
    static SpectralFunction unit(BasisPtr basis, std::size_t position) {
        auto f = zero(std::move(basis));
        f.coeffs_[static_cast<Eigen::Index>(position)] = 1.0;
        return f;
    }

    const BasisTruncation& basis() const { return *basis_; }
    const BasisPtr& basis_ptr() const { return basis_; }
    const CVector& coeffs() const { return coeffs_; }
    CVector& coeffs() { return coeffs_; }

    /// L^2(gamma) norm, equal to the coefficient norm by orthonormality.
    real norm() const { return coeffs_.norm(); }

    /// Highest degree carrying a coefficient above `tol` in modulus (-1 for zero).
    int effective_degree(real tol = 0.0) const {
        int deg = -1;
        for (std::size_t k = 0; k < basis_->size(); ++k)
            if (std::abs(coeffs_[static_cast<Eigen::Index>(k)]) > tol) deg = std::max(deg, (*basis_)[k].degree());
        return deg;
    }

private:
    BasisPtr basis_;
    CVector coeffs_;
};

namespace detail {

inline void require_same_basis(const BasisTruncation& a, const BasisTruncation& b, const char* where) {
    if (!(a == b)) throw DimensionError(std::string(where) + ": basis truncations differ");
}

inline void require_grid(const BasisTruncation& basis, const QuadratureGrid& grid, const char* where) {
    if (grid.dimension() != basis.dimension())
        throw DimensionError(std::string(where) + ": grid dimension does not match the basis");
}

}  // namespace detail

/// Phi(i, k) = h_k(x_i) at the grid nodes.
inline RMatrix grid_evaluation(const BasisTruncation& basis, const QuadratureGrid& grid) {
    detail::require_grid(basis, grid, "grid_evaluation");
    return evaluation_matrix<real>(basis, grid.points());
}

/// Coefficients from samples at the grid nodes: c_k = sum_i w_i f(x_i) h_k(x_i).
inline SpectralFunction expand_samples(const CVector& samples, const BasisPtr& basis, const QuadratureGrid& grid) {
    detail::require_grid(*basis, grid, "expand");
    if (grid.order() < basis->max_degree() + 1)
        throw DomainError("expand: quadrature order " + std::to_string(grid.order()) + " below N+1 = " +
                          std::to_string(basis->max_degree() + 1));
    if (samples.size() != grid.size()) throw DimensionError("expand: sample count does not match the grid");
    const RMatrix phi = grid_evaluation(*basis, grid);
    CVector weighted = samples.cwiseProduct(grid.weights().cast<cplx>());
    return {basis, phi.transpose().cast<cplx>() * weighted};
}

/// Coefficients of a callable f(point) where point is an RVector of length d.
template <typename F>
SpectralFunction expand(F&& f, const BasisPtr& basis, const QuadratureGrid& grid) {
    detail::require_grid(*basis, grid, "expand");
    CVector samples(grid.size());
    for (Eigen::Index i = 0; i < grid.size(); ++i) {
        RVector x = grid.points().col(i);
        samples[i] = cplx(f(x));
    }
    return expand_samples(samples, basis, grid);
}

/// Pointwise values sum_k c_k h_k(x) at points stored as columns (d x M).
inline CVector synthesize(const SpectralFunction& f, const RMatrix& points) {
    if (points.rows() != f.basis().dimension()) throw DimensionError("synthesize: point dimension mismatch");
    return evaluation_matrix<real>(f.basis(), points).cast<cplx>() * f.coeffs();
}

/// Values at complex points, used by the analytically continued Mehler substitution.
inline CVector synthesize(const SpectralFunction& f, const CMatrix& points) {
    if (points.rows() != f.basis().dimension()) throw DimensionError("synthesize: point dimension mismatch");
    return evaluation_matrix<cplx>(f.basis(), points) * f.coeffs();
}

/// Quadrature L^p(gamma) norm of values sampled at the grid nodes.
inline real lp_norm_of_samples(const CVector& values, real p, const QuadratureGrid& grid) {
    if (!(p >= 1.0) || !std::isfinite(p)) throw DomainError("lp_norm: p must be finite and at least 1");
    real s = 0.0;
    for (Eigen::Index i = 0; i < values.size(); ++i) s += grid.weights()[i] * std::pow(std::abs(values[i]), p);
    return std::pow(s, 1.0 / p);
}

/// (sum_i w_i |f(x_i)|^p)^(1/p). Exact for even integer p when p*N <= 2*order - 1.
inline real lp_norm(const SpectralFunction& f, real p, const QuadratureGrid& grid) {
    if (!(p >= 1.0) || !std::isfinite(p)) throw DomainError("lp_norm: p must be finite and at least 1");
    detail::require_grid(f.basis(), grid, "lp_norm");
    return lp_norm_of_samples(grid_evaluation(f.basis(), grid).cast<cplx>() * f.coeffs(), p, grid);
}

/// Grid order that makes the L^p norm of a degree-n polynomial exact for even integer p.
inline int lp_exact_order(int degree, real p) {
    return static_cast<int>(std::ceil((p * degree + 1.0) / 2.0)) + 1;
}

}  // namespace oulab
