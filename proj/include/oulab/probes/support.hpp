#pragma once

#include <Eigen/Eigenvalues>

#include "oulab/operators/fields.hpp"
#include "oulab/probes/region.hpp"

namespace oulab {

/// Gram matrix of the basis restricted to a region: A(a, b) = int_K h_a h_b d gamma.
/// Exact (to quadrature rounding) in one dimension and for disjoint undilated boxes; other
/// regions use a masked tensor Gauss-Legendre rule, which resolves the boundary only to the cell size.
inline RMatrix region_gram(const BasisTruncation& basis, const Region& region) {
    if (region.dimension() != basis.dimension()) throw DimensionError("region_gram: dimension mismatch");
    const int d = basis.dimension();
    const int N = basis.max_degree();
    const auto n = static_cast<Eigen::Index>(basis.size());
    RMatrix A = RMatrix::Zero(n, n);
    if (region.empty()) return A;
    if (d == 1) {
        for (const auto& iv : region.intervals()) A += interval_gram(N, iv.a, iv.b);
        return A;
    }
    if (region.separable()) {
        for (const auto& box : region.boxes()) {
            std::vector<RMatrix> axis;
            for (int j = 0; j < d; ++j)
                axis.push_back(interval_gram(N, box.lo[static_cast<std::size_t>(j)], box.hi[static_cast<std::size_t>(j)]));
            for (Eigen::Index a = 0; a < n; ++a)
                for (Eigen::Index b = 0; b < n; ++b) {
                    real v = 1.0;
                    for (int j = 0; j < d; ++j)
                        v *= axis[static_cast<std::size_t>(j)](basis[static_cast<std::size_t>(a)][j],
                                                               basis[static_cast<std::size_t>(b)][j]);
                    A(a, b) += v;
                }
        }
        return A;
    }
    const real X = 2.0 * std::sqrt(N + 1.0) + 8.0;
    const Rule1D rule = composite_legendre(-X, X, static_cast<int>(std::ceil(2.0 * X / 0.1)), 2);
    const std::size_t m = rule.size();
    std::size_t total = 1;
    for (int j = 0; j < d; ++j) total *= m;
    constexpr Eigen::Index chunk = 2048;
    RMatrix pts(d, chunk);
    RVector w(chunk);
    Eigen::Index used = 0;
    auto flush = [&]() {
        if (used == 0) return;
        const RMatrix phi = evaluation_matrix<real>(basis, RMatrix(pts.leftCols(used)));
        A.noalias() += phi.transpose() * w.head(used).asDiagonal() * phi;
        used = 0;
    };
    std::vector<real> x(static_cast<std::size_t>(d));
    for (std::size_t q = 0; q < total; ++q) {
        std::size_t rest = q;
        real wq = 1.0;
        for (int j = 0; j < d; ++j) {
            const std::size_t k = rest % m;
            rest /= m;
            x[static_cast<std::size_t>(j)] = rule.nodes[k];
            wq *= rule.weights[k] * std::exp(-0.5 * rule.nodes[k] * rule.nodes[k]) / std::sqrt(2.0 * pi);
        }
        if (wq < 1e-300 || !region.contains(x)) continue;
        for (int j = 0; j < d; ++j) pts(j, used) = x[static_cast<std::size_t>(j)];
        w[used++] = wq;
        if (used == chunk) flush();
    }
    flush();
    return A;
}

/// Gram matrix over the complement of a region.
inline RMatrix complement_gram(const BasisTruncation& basis, const Region& region) {
    if (basis.dimension() == 1) {
        RMatrix A = RMatrix::Zero(static_cast<Eigen::Index>(basis.size()), static_cast<Eigen::Index>(basis.size()));
        for (const auto& iv : region.complement_intervals()) A += interval_gram(basis.max_degree(), iv.a, iv.b);
        return A;
    }
    return RMatrix::Identity(static_cast<Eigen::Index>(basis.size()), static_cast<Eigen::Index>(basis.size())) -
           region_gram(basis, region);
}

/// Squared L^2(gamma) mass of a stacked state (one or more blocks of basis size) under a Gram matrix.
inline real masked_mass2(const CVector& stacked, const RMatrix& gram) {
    const auto n = gram.rows();
    if (stacked.size() % n != 0) throw DimensionError("masked_mass2: length is not a multiple of the basis size");
    real s = 0.0;
    for (Eigen::Index b = 0; b < stacked.size() / n; ++b) {
        const CVector v = stacked.segment(b * n, n);
        s += std::real(v.dot(gram.cast<cplx>() * v));
    }
    return std::max(0.0, s);
}

/// A declared carrier plus a realized spectral state and its measured concentration residual.
struct SupportSpec {
    Region nominal;             // K
    real epsilon = 0.0;         // smoothing width: the state is concentrated on K_epsilon
    DiracState state;
    real tau = 1e-3;            // numerical-support threshold
    real residual = 0.0;        // ||state 1_{complement of K_epsilon}|| / ||state||

    Region carrier() const { return nominal.dilated(epsilon); }
    bool within_threshold() const { return residual <= tau; }
    real distance(const SupportSpec& other) const { return nominal.set_distance(other.nominal); }
};

namespace detail {

/// Unit top eigenvector of the restricted Gram matrix, with a deterministic sign.
inline RVector top_eigenvector(const RMatrix& A) {
    Eigen::SelfAdjointEigenSolver<RMatrix> es(A);
    RVector v = es.eigenvectors().col(A.rows() - 1);
    Eigen::Index imax = 0;
    v.cwiseAbs().maxCoeff(&imax);
    if (v[imax] < 0) v = -v;
    return v;
}

inline CVector concentrate(const BasisTruncation& basis, const Region& carrier, int max_degree) {
    const RMatrix A = region_gram(basis, carrier);
    const auto keep = basis.positions_up_to_degree(max_degree);
    RMatrix sub(static_cast<Eigen::Index>(keep.size()), static_cast<Eigen::Index>(keep.size()));
    for (std::size_t i = 0; i < keep.size(); ++i)
        for (std::size_t k = 0; k < keep.size(); ++k)
            sub(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
                A(static_cast<Eigen::Index>(keep[i]), static_cast<Eigen::Index>(keep[k]));
    const RVector v = top_eigenvector(sub);
    CVector c = CVector::Zero(static_cast<Eigen::Index>(basis.size()));
    for (std::size_t i = 0; i < keep.size(); ++i) c[static_cast<Eigen::Index>(keep[i])] = v[static_cast<Eigen::Index>(i)];
    return c;
}

}  // namespace detail

/// Measured residual ||u 1_{complement of K}|| / ||u|| of a stacked state.
inline real concentration_residual(const BasisTruncation& basis, const CVector& stacked, const Region& carrier) {
    return std::sqrt(masked_mass2(stacked, complement_gram(basis, carrier))) / stacked.norm();
}

/// Scalar state of degree <= max_degree with the largest fraction of its mass inside K_epsilon.
inline SupportSpec realize_scalar(const BasisPtr& basis, const Region& nominal, real epsilon = 0.0, real tau = 1e-3,
                                  int max_degree = -1) {
    const int deg = max_degree < 0 ? basis->max_degree() : max_degree;
    SupportSpec s{nominal, epsilon, {}, tau, 0.0};
    const CVector c = detail::concentrate(*basis, s.carrier(), deg);
    s.state = DiracState::scalar_only(SpectralFunction(basis, c));
    s.residual = concentration_residual(*basis, c, s.carrier());
    return s;
}

/// Field state concentrated on K_epsilon in coordinate `axis`, degree <= max_degree (default N-1).
inline SupportSpec realize_field(const BasisPtr& basis, const Region& nominal, int axis, real epsilon = 0.0,
                                 real tau = 1e-3, int max_degree = -1) {
    const int deg = max_degree < 0 ? basis->max_degree() - 1 : max_degree;
    if (axis < 0 || axis >= basis->dimension()) throw DomainError("realize_field: axis out of range");
    SupportSpec s{nominal, epsilon, {}, tau, 0.0};
    const CVector c = detail::concentrate(*basis, s.carrier(), deg);
    SpectralField g = SpectralField::zero(basis);
    g[axis] = SpectralFunction(basis, c);
    s.state = DiracState(SpectralFunction::zero(basis), g);
    s.residual = concentration_residual(*basis, c, s.carrier());
    return s;
}

}  // namespace oulab
