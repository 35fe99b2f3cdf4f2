#pragma once

#include <cmath>
#include <vector>

#include "oulab/hermite/multi_index.hpp"

namespace oulab {

/// Values h_0(x), ..., h_n(x) of the gamma-orthonormal probabilists' Hermite polynomials.
/// T may be real or complex; the three-term recurrence is the same.
template <typename T>
void hermite_table(int n, const T& x, T* out) {
    out[0] = T(1);
    if (n == 0) return;
    out[1] = x;
    for (int k = 1; k < n; ++k) {
        const real a = std::sqrt(static_cast<real>(k));
        const real b = std::sqrt(static_cast<real>(k + 1));
        out[k + 1] = (x * out[k] - a * out[k - 1]) / b;
    }
}

template <typename T>
std::vector<T> hermite_table(int n, const T& x) {
    std::vector<T> v(static_cast<std::size_t>(n) + 1);
    hermite_table(n, x, v.data());
    return v;
}

/// Single normalized Hermite polynomial h_n(x).
template <typename T>
T hermite_1d(int n, const T& x) {
    if (n < 0) throw DomainError("hermite_1d: negative degree");
    return hermite_table(n, x).back();
}

/// Tensor Hermite polynomial h_alpha(x) = prod_j h_{alpha_j}(x_j).
template <typename T, typename Vec>
T hermite_eval(const MultiIndex& alpha, const Vec& point) {
    if (static_cast<int>(point.size()) != alpha.dimension())
        throw DimensionError("hermite_eval: point dimension does not match the multi-index");
    T value(1);
    for (int j = 0; j < alpha.dimension(); ++j) value *= hermite_1d<T>(alpha[j], T(point[j]));
    return value;
}

inline real hermite_eval(const MultiIndex& alpha, const std::vector<real>& point) {
    return hermite_eval<real>(alpha, point);
}

/// Matrix Phi(i, k) = h_{alpha_k}(x_i) for points stored as columns of `points` (d x M).
template <typename T>
Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic> evaluation_matrix(
    const BasisTruncation& basis, const Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>& points) {
    const int d = basis.dimension();
    if (points.rows() != d) throw DimensionError("evaluation_matrix: point dimension mismatch");
    const int N = basis.max_degree();
    const Eigen::Index M = points.cols();
    Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic> phi(M, static_cast<Eigen::Index>(basis.size()));
    std::vector<T> tab(static_cast<std::size_t>((N + 1) * d));
    for (Eigen::Index i = 0; i < M; ++i) {
        for (int j = 0; j < d; ++j) hermite_table(N, points(j, i), tab.data() + j * (N + 1));
        for (std::size_t k = 0; k < basis.size(); ++k) {
            const MultiIndex& a = basis[k];
            T v = tab[static_cast<std::size_t>(a[0])];
            for (int j = 1; j < d; ++j) v *= tab[static_cast<std::size_t>(j * (N + 1) + a[j])];
            phi(i, static_cast<Eigen::Index>(k)) = v;
        }
    }
    return phi;
}

}  // namespace oulab
