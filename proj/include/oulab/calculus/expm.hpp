#pragma once

#include <array>
#include <cmath>

#include "oulab/core/types.hpp"

namespace oulab {

namespace detail {

template <typename Mat>
Mat pade_solve(const Mat& U, const Mat& V) {
    // r = (V - U)^{-1} (V + U)
    return (V - U).partialPivLu().solve(V + U);
}

template <typename Mat>
Mat pade_low(const Mat& A, const Mat& A2, int m) {
    static constexpr std::array<double, 4> c3 = {120.0, 60.0, 12.0, 1.0};
    static constexpr std::array<double, 6> c5 = {30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0};
    static constexpr std::array<double, 8> c7 = {17297280.0, 8648640.0, 1995840.0, 277200.0,
                                                 25200.0,    1512.0,    56.0,      1.0};
    static constexpr std::array<double, 10> c9 = {17643225600.0, 8821612800.0, 2075673600.0, 302702400.0, 30270240.0,
                                                  2162160.0,     110880.0,     3960.0,       90.0,        1.0};
    const double* c = m == 3 ? c3.data() : m == 5 ? c5.data() : m == 7 ? c7.data() : c9.data();
    const Eigen::Index n = A.rows();
    const Mat I = Mat::Identity(n, n);
    Mat P = A2;  // current even power
    Mat U = c[1] * I;
    Mat V = c[0] * I;
    for (int k = 2; k <= m; k += 2) {
        U += c[k + 1] * P;
        V += c[k] * P;
        if (k + 2 <= m) P = P * A2;
    }
    U = A * U;
    return pade_solve(U, V);
}

template <typename Mat>
Mat pade13(const Mat& A) {
    static constexpr std::array<double, 14> b = {
        64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0, 129060195264000.0,
        10559470521600.0,    670442572800.0,      33522128640.0,      1323241920.0,       40840800.0,
        960960.0,            16380.0,             182.0,              1.0};
    const Eigen::Index n = A.rows();
    const Mat I = Mat::Identity(n, n);
    const Mat A2 = A * A;
    const Mat A4 = A2 * A2;
    const Mat A6 = A4 * A2;
    Mat U = A6 * (b[13] * A6 + b[11] * A4 + b[9] * A2);
    U += b[7] * A6 + b[5] * A4 + b[3] * A2 + b[1] * I;
    U = A * U;
    Mat V = A6 * (b[12] * A6 + b[10] * A4 + b[8] * A2);
    V += b[6] * A6 + b[4] * A4 + b[2] * A2 + b[0] * I;
    return pade_solve(U, V);
}

}  // namespace detail

/// Matrix exponential by scaling and squaring with diagonal Pade approximants.
/// Works for any square real or complex Eigen matrix; no normality is assumed.
template <typename Mat>
Mat expm(const Mat& A) {
    if (A.rows() != A.cols()) throw DimensionError("expm: matrix must be square");
    const Eigen::Index n = A.rows();
    if (n == 0) return A;
    if (!A.allFinite()) throw DomainError("expm: non-finite entries");
    static constexpr std::array<double, 5> theta = {1.495585217958292e-2, 2.539398330063230e-1, 9.504178996162932e-1,
                                                    2.097847961257068e0, 5.371920351148152e0};
    static constexpr std::array<int, 4> orders = {3, 5, 7, 9};
    const double norm1 = A.cwiseAbs().colwise().sum().maxCoeff();
    for (std::size_t i = 0; i < orders.size(); ++i)
        if (norm1 <= theta[i]) return detail::pade_low(A, Mat(A * A), orders[i]);
    int s = 0;
    if (norm1 > theta[4]) s = std::max(0, static_cast<int>(std::ceil(std::log2(norm1 / theta[4]))));
    const Mat As = A / std::ldexp(1.0, s);
    Mat R = detail::pade13(As);
    for (int k = 0; k < s; ++k) R = R * R;
    return R;
}

}  // namespace oulab
