#pragma once

// Independent reference computations for the test suites. Nothing here calls into the library's
// numerical routines; each oracle uses a different formula or quadrature than the code under test.

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

namespace oracle {

using real = double;
using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
inline constexpr real pi = 3.14159265358979323846;

/// Normalized probabilists' Hermite polynomial from the explicit sum
/// He_n(x) = n! sum_m (-1)^m x^{n-2m} / (m! (n-2m)! 2^m), divided by sqrt(n!).
inline long double hermite_explicit(int n, long double x) {
    long double s = 0.0L;
    for (int m = 0; 2 * m <= n; ++m) {
        const long double logc = std::lgamma(n + 1.0L) - std::lgamma(m + 1.0L) - std::lgamma(n - 2 * m + 1.0L) -
                                 m * std::log(2.0L);
        const long double term = std::exp(logc) * std::pow(x, n - 2 * m);
        s += (m % 2 ? -term : term);
    }
    return s / std::sqrt(std::tgamma(n + 1.0L));
}

/// Composite Simpson rule on [a, b] with `panels` (even) subintervals.
template <typename T>
T simpson(const std::function<T(real)>& f, real a, real b, int panels) {
    if (panels % 2) ++panels;
    const real h = (b - a) / panels;
    T s = f(a) + f(b);
    for (int i = 1; i < panels; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return s * (h / 3.0);
}

/// Standard Gaussian density.
inline real gauss(real x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * pi); }

/// int g(x) d gamma(x) over [a, b] by Simpson with a fine step, clipped to [-14, 14].
inline real gaussian_integral(const std::function<real(real)>& g, real a = -14.0, real b = 14.0, real step = 2e-3) {
    a = std::max(a, -14.0);
    b = std::min(b, 14.0);
    if (!(b > a)) return 0.0;
    const int panels = std::max(2, static_cast<int>(std::ceil((b - a) / step)));
    return simpson<real>([&](real x) { return g(x) * gauss(x); }, a, b, panels);
}

/// Values sum_k c_k h_k(x) of a one-dimensional expansion via the explicit polynomials.
inline cplx eval_1d(const Eigen::VectorXcd& c, real x) {
    cplx s = 0.0;
    for (Eigen::Index k = 0; k < c.size(); ++k) s += c[k] * static_cast<real>(hermite_explicit(static_cast<int>(k), x));
    return s;
}

/// Matrix exponential through Eigen's unsupported module (independent of the library's Pade code).
inline CMatrix expm(const CMatrix& A) { return A.exp(); }

/// Taylor series exp(A) with repeated squaring, in long double precision.
inline CMatrix expm_taylor(const CMatrix& A) {
    using LMat = Eigen::Matrix<std::complex<long double>, Eigen::Dynamic, Eigen::Dynamic>;
    int s = 0;
    const real nrm = A.cwiseAbs().rowwise().sum().maxCoeff();
    while (std::ldexp(nrm, -s) > 0.25) ++s;
    LMat B = A.cast<std::complex<long double>>() / std::complex<long double>(std::ldexp(1.0L, s));
    LMat term = LMat::Identity(A.rows(), A.cols());
    LMat sum = term;
    for (int k = 1; k < 40; ++k) {
        term = term * B / std::complex<long double>(static_cast<long double>(k));
        sum += term;
    }
    for (int i = 0; i < s; ++i) sum = sum * sum;
    return sum.cast<cplx>();
}

/// FNV-1a 64-bit, byte by byte.
inline std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

/// L^p(gamma) norm of the untruncated coherent state exp(w x - w^2/2): the exponent is the log of
/// E|exp(w x - w^2/2)|^p, i.e. p^2 (Re w)^2 / 2 - p Re(w^2) / 2, divided by p.
inline real coherent_lp_log_norm(cplx w, real p) {
    const real a = w.real();
    return (0.5 * p * p * a * a - 0.5 * p * (w * w).real()) / p;
}

/// Largest singular value by power iteration on A^H A.
inline real spectral_norm(const CMatrix& A, int iters = 500) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Ones(A.cols());
    v.normalize();
    real s = 0.0;
    for (int i = 0; i < iters; ++i) {
        Eigen::VectorXcd w = A.adjoint() * (A * v);
        const real n = w.norm();
        if (n == 0.0) return 0.0;
        v = w / n;
        s = std::sqrt(n);
    }
    return s;
}

}  // namespace oracle
