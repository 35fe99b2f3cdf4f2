#pragma once

#include <memory>

#include "oulab/hermite/spectral_function.hpp"

namespace oulab {

/// Finite-dimensional Ornstein-Uhlenbeck model: gamma on R^d, drift matrix B with B + B^T = 2I,
/// a truncated Hermite basis and a quadrature grid.
class OUModel {
public:
    OUModel(const RMatrix& B, int max_degree, int quadrature_order = 0) {
        const auto d = static_cast<int>(B.rows());
        if (B.cols() != d) throw DimensionError("OUModel: B must be square");
        const RMatrix sym = 0.5 * (B + B.transpose());
        const real err = (sym - RMatrix::Identity(d, d)).cwiseAbs().maxCoeff();
        if (err > 1e-12) throw DomainError("OUModel: B + B^T must equal 2I (symmetric-part error " + std::to_string(err) + ")");
        // Normalize the symmetric part so the invariant holds bit-exactly.
        B_ = RMatrix::Identity(d, d) + 0.5 * (B - B.transpose());
        basis_ = make_basis(d, max_degree);
        const int order = quadrature_order > 0 ? quadrature_order : default_quadrature_order(max_degree);
        grid_ = std::make_shared<const QuadratureGrid>(d, order);
    }

    /// B = I.
    static OUModel classical(int d, int max_degree, int quadrature_order = 0) {
        return OUModel(RMatrix::Identity(d, d), max_degree, quadrature_order);
    }

    /// d = 2, B = [[1, b], [-b, 1]].
    static OUModel rotational(real b, int max_degree, int quadrature_order = 0) {
        RMatrix B(2, 2);
        B << 1.0, b, -b, 1.0;
        return OUModel(B, max_degree, quadrature_order);
    }

    int dimension() const { return basis_->dimension(); }
    int max_degree() const { return basis_->max_degree(); }
    const RMatrix& B() const { return B_; }
    const BasisTruncation& basis() const { return *basis_; }
    const BasisPtr& basis_ptr() const { return basis_; }
    const QuadratureGrid& grid() const { return *grid_; }
    std::size_t scalar_size() const { return basis_->size(); }

    bool is_symmetric() const { return (B_ - B_.transpose()).cwiseAbs().maxCoeff() == 0.0; }
    /// Spectral norm of B - B^T.
    real antisymmetry_norm() const {
        const RMatrix A = B_ - B_.transpose();
        if (A.cwiseAbs().maxCoeff() == 0.0) return 0.0;
        return Eigen::JacobiSVD<RMatrix>(A).singularValues()[0];
    }

    /// Raise a DomainError unless B = I; `op` names the caller.
    void require_symmetric(const char* op) const {
        if (!is_symmetric())
            throw DomainError(std::string(op) +
                              ": requires B = I (the cosine family and the unitary Dirac group exist only "
                              "when L is self-adjoint)");
    }

private:
    RMatrix B_;
    BasisPtr basis_;
    std::shared_ptr<const QuadratureGrid> grid_;
};

}  // namespace oulab
