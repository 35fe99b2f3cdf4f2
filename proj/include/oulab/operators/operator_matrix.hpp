#pragma once

#include <string>

#include "oulab/operators/fields.hpp"

namespace oulab {

enum class Space { Scalar, Field, Dirac };

inline const char* space_name(Space s) {
    switch (s) {
        case Space::Scalar: return "scalar";
        case Space::Field: return "field";
        case Space::Dirac: return "dirac";
    }
    return "?";
}

/// Coefficient space of a given kind over a truncation (d, N).
struct SpaceTag {
    Space kind = Space::Scalar;
    int d = 1;
    int N = 1;

    Eigen::Index size() const {
        const auto n = static_cast<Eigen::Index>(binomial(N + d, d));
        switch (kind) {
            case Space::Scalar: return n;
            case Space::Field: return n * d;
            case Space::Dirac: return n * (d + 1);
        }
        return 0;
    }
    std::string to_string() const {
        return std::string(space_name(kind)) + "[d=" + std::to_string(d) + ",N=" + std::to_string(N) + "]";
    }
    friend bool operator==(const SpaceTag& a, const SpaceTag& b) {
        return a.kind == b.kind && a.d == b.d && a.N == b.N;
    }
};

inline SpaceTag scalar_space(const BasisTruncation& b) { return {Space::Scalar, b.dimension(), b.max_degree()}; }
inline SpaceTag field_space(const BasisTruncation& b) { return {Space::Field, b.dimension(), b.max_degree()}; }
inline SpaceTag dirac_space(const BasisTruncation& b) { return {Space::Dirac, b.dimension(), b.max_degree()}; }

/// Dense complex matrix that remembers which coefficient spaces it maps between.
class OperatorMatrix {
public:
    OperatorMatrix() = default;
    OperatorMatrix(SpaceTag domain, SpaceTag codomain, CMatrix m)
        : dom_(domain), cod_(codomain), m_(std::move(m)) {
        if (m_.cols() != dom_.size() || m_.rows() != cod_.size())
            throw DimensionError("OperatorMatrix: shape " + std::to_string(m_.rows()) + "x" + std::to_string(m_.cols()) +
                                 " inconsistent with " + dom_.to_string() + " -> " + cod_.to_string());
    }

    static OperatorMatrix identity(SpaceTag space) {
        return {space, space, CMatrix::Identity(space.size(), space.size())};
    }

    const SpaceTag& domain() const { return dom_; }
    const SpaceTag& codomain() const { return cod_; }
    const CMatrix& matrix() const { return m_; }

    OperatorMatrix adjoint() const { return {cod_, dom_, m_.adjoint()}; }

    friend OperatorMatrix operator*(const OperatorMatrix& a, const OperatorMatrix& b) {
        if (!(a.dom_ == b.cod_))
            throw DimensionError("OperatorMatrix: cannot compose " + a.dom_.to_string() + " with " + b.cod_.to_string());
        return {b.dom_, a.cod_, a.m_ * b.m_};
    }
    friend OperatorMatrix operator+(const OperatorMatrix& a, const OperatorMatrix& b) {
        a.require_same_shape(b);
        return {a.dom_, a.cod_, a.m_ + b.m_};
    }
    friend OperatorMatrix operator-(const OperatorMatrix& a, const OperatorMatrix& b) {
        a.require_same_shape(b);
        return {a.dom_, a.cod_, a.m_ - b.m_};
    }
    friend OperatorMatrix operator*(cplx s, const OperatorMatrix& a) { return {a.dom_, a.cod_, s * a.m_}; }

    CVector apply(const CVector& v) const {
        if (v.size() != m_.cols()) throw DimensionError("OperatorMatrix: vector length mismatch");
        return m_ * v;
    }
    SpectralFunction apply(const SpectralFunction& f) const {
        require(Space::Scalar, Space::Scalar);
        return {f.basis_ptr(), m_ * f.coeffs()};
    }
    SpectralField apply_to_field(const SpectralField& g) const {
        require(Space::Field, Space::Field);
        return SpectralField::from_stacked(g.basis_ptr(), m_ * g.stacked());
    }
    DiracState apply(const DiracState& u) const {
        require(Space::Dirac, Space::Dirac);
        return DiracState::from_stacked(u.basis_ptr(), m_ * u.stacked());
    }

private:
    void require(Space dom, Space cod) const {
        if (dom_.kind != dom || cod_.kind != cod) throw DimensionError("OperatorMatrix: wrong operand space");
    }
    void require_same_shape(const OperatorMatrix& b) const {
        if (!(dom_ == b.dom_) || !(cod_ == b.cod_)) throw DimensionError("OperatorMatrix: spaces differ");
    }

    SpaceTag dom_;
    SpaceTag cod_;
    CMatrix m_;
};

}  // namespace oulab
