#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace oulab {

using real = double;
using cplx = std::complex<double>;

using RMatrix = Eigen::MatrixXd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;
using CVector = Eigen::VectorXcd;

inline constexpr real pi = 3.14159265358979323846264338327950288;

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Shapes, dimensions or basis tags that do not line up.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// Arguments outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A numerical route refused to run because its answer would not be trustworthy.
class ConditioningError : public Error {
public:
    using Error::Error;
};

/// A quadrature or iteration did not reach its target tolerance.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double residual)
        : Error(what), residual_(residual) {}
    double residual() const { return residual_; }

private:
    double residual_;
};

/// Largest singular value from the Hermitian Gram matrix; much cheaper than a full SVD and
/// accurate to a relative rounding error.
inline real spectral_norm(const CMatrix& A) {
    if (A.size() == 0) return 0.0;
    const CMatrix G = A.rows() >= A.cols() ? CMatrix(A.adjoint() * A) : CMatrix(A * A.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> es(G, Eigen::EigenvaluesOnly);
    return std::sqrt(std::max(0.0, es.eigenvalues()[es.eigenvalues().size() - 1]));
}

}  // namespace oulab
