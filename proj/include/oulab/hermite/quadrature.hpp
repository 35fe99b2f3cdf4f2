#pragma once

#include <cmath>
#include <vector>

#include <Eigen/Eigenvalues>

#include "oulab/hermite/hermite.hpp"

namespace oulab {

/// One-dimensional rule: nodes ascending, weights summing to the mass of the weight.
struct Rule1D {
    std::vector<real> nodes;
    std::vector<real> weights;
    std::size_t size() const { return nodes.size(); }
};

/// Gauss-Hermite rule for the standard Gaussian measure (weights sum to 1).
/// Golub-Welsch for the starting nodes, then Newton on the normalized recurrence and
/// Christoffel weights 1/sum_k h_k(x)^2, which keeps tiny tail weights relatively accurate.
inline Rule1D gauss_hermite(int order) {
    if (order < 1) throw DomainError("gauss_hermite: order must be positive");
    if (order > 400) throw DomainError("gauss_hermite: order above 400 overflows the recurrence");
    Rule1D r;
    r.nodes.resize(static_cast<std::size_t>(order));
    r.weights.resize(static_cast<std::size_t>(order));
    if (order == 1) {
        r.nodes[0] = 0.0;
        r.weights[0] = 1.0;
        return r;
    }
    RVector diag = RVector::Zero(order);
    RVector sub(order - 1);
    for (int k = 1; k < order; ++k) sub[k - 1] = std::sqrt(static_cast<real>(k));
    Eigen::SelfAdjointEigenSolver<RMatrix> es;
    es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    std::vector<real> h(static_cast<std::size_t>(order) + 1);
    for (int i = 0; i < order; ++i) {
        real x = es.eigenvalues()[i];
        for (int it = 0; it < 8; ++it) {
            hermite_table(order, x, h.data());
            const real f = h[static_cast<std::size_t>(order)];
            const real df = std::sqrt(static_cast<real>(order)) * h[static_cast<std::size_t>(order) - 1];
            const real step = f / df;
            x -= step;
            if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(x))) break;
        }
        hermite_table(order - 1, x, h.data());
        real s = 0.0;
        for (int k = 0; k < order; ++k) s += h[static_cast<std::size_t>(k)] * h[static_cast<std::size_t>(k)];
        r.nodes[static_cast<std::size_t>(i)] = x;
        r.weights[static_cast<std::size_t>(i)] = 1.0 / s;
    }
    // The rule is symmetric; enforce it exactly after checking the refinement agrees.
    for (int i = 0; i < order / 2; ++i) {
        auto a = static_cast<std::size_t>(i), b = static_cast<std::size_t>(order - 1 - i);
        if (std::abs(r.nodes[a] + r.nodes[b]) > 1e-13 * std::max(1.0, std::abs(r.nodes[a])))
            throw ConvergenceError("gauss_hermite: asymmetric nodes", std::abs(r.nodes[a] + r.nodes[b]));
        const real x = 0.5 * (r.nodes[b] - r.nodes[a]);
        const real w = 0.5 * (r.weights[a] + r.weights[b]);
        r.nodes[a] = -x;
        r.nodes[b] = x;
        r.weights[a] = r.weights[b] = w;
    }
    if (order % 2 == 1) r.nodes[static_cast<std::size_t>(order / 2)] = 0.0;
    real total = 0.0;
    for (real w : r.weights) total += w;
    for (real& w : r.weights) w /= total;
    return r;
}

/// Gauss-Legendre rule on [-1, 1] (weights sum to 2).
inline Rule1D gauss_legendre(int order) {
    if (order < 1) throw DomainError("gauss_legendre: order must be positive");
    Rule1D r;
    r.nodes.resize(static_cast<std::size_t>(order));
    r.weights.resize(static_cast<std::size_t>(order));
    const int n = order;
    for (int i = 0; i < n; ++i) {
        real x = -std::cos(pi * (i + 0.75) / (n + 0.5));
        real dp = 1.0;
        for (int it = 0; it < 100; ++it) {
            real p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const real p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) p0 = 1.0;
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const real step = p1 / dp;
            x -= step;
            if (std::abs(step) < 1e-16) break;
        }
        r.nodes[static_cast<std::size_t>(i)] = x;
        r.weights[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return r;
}

/// Composite Gauss-Legendre rule on [a, b] with `panels` equal panels.
inline Rule1D composite_legendre(real a, real b, int panels, int order) {
    if (!(b > a) || panels < 1) throw DomainError("composite_legendre: empty interval or no panels");
    const Rule1D base = gauss_legendre(order);
    Rule1D r;
    const real h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const real lo = a + p * h;
        for (std::size_t i = 0; i < base.size(); ++i) {
            r.nodes.push_back(lo + 0.5 * h * (base.nodes[i] + 1.0));
            r.weights.push_back(0.5 * h * base.weights[i]);
        }
    }
    return r;
}

/// Tensorized Gauss-Hermite grid for gamma on R^d.
class QuadratureGrid {
public:
    QuadratureGrid(int dimension, int order) : d_(dimension), order_(order), axis_(gauss_hermite(order)) {
        if (d_ < 1 || d_ > 3) throw DomainError("QuadratureGrid: dimension must be 1, 2 or 3");
        std::size_t M = 1;
        for (int j = 0; j < d_; ++j) M *= axis_.size();
        points_.resize(d_, static_cast<Eigen::Index>(M));
        weights_.resize(static_cast<Eigen::Index>(M));
        std::vector<std::size_t> idx(static_cast<std::size_t>(d_), 0);
        for (std::size_t m = 0; m < M; ++m) {
            std::size_t rest = m;
            real w = 1.0;
            for (int j = d_ - 1; j >= 0; --j) {
                idx[static_cast<std::size_t>(j)] = rest % axis_.size();
                rest /= axis_.size();
            }
            for (int j = 0; j < d_; ++j) {
                points_(j, static_cast<Eigen::Index>(m)) = axis_.nodes[idx[static_cast<std::size_t>(j)]];
                w *= axis_.weights[idx[static_cast<std::size_t>(j)]];
            }
            weights_[static_cast<Eigen::Index>(m)] = w;
        }
    }

    int dimension() const { return d_; }
    int order() const { return order_; }
    const Rule1D& axis_rule() const { return axis_; }
    /// Nodes as columns, d x M.
    const RMatrix& points() const { return points_; }
    const RVector& weights() const { return weights_; }
    Eigen::Index size() const { return weights_.size(); }
    /// Largest total polynomial degree integrated exactly per axis.
    int exactness_degree() const { return 2 * order_ - 1; }

private:
    int d_;
    int order_;
    Rule1D axis_;
    RMatrix points_;
    RVector weights_;
};

/// Default order 2N+2: products of two basis elements are integrated exactly with margin.
inline int default_quadrature_order(int max_degree) { return 2 * max_degree + 2; }

}  // namespace oulab
