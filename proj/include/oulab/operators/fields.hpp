#pragma once

#include <vector>

#include "oulab/operators/model.hpp"

namespace oulab {

/// Element of L^2(R^d, gamma; R^d): one SpectralFunction per coordinate.
class SpectralField {
public:
    SpectralField() = default;
    explicit SpectralField(std::vector<SpectralFunction> components) : comps_(std::move(components)) {
        if (comps_.empty()) throw DimensionError("SpectralField: no components");
        for (const auto& c : comps_) detail::require_same_basis(c.basis(), comps_[0].basis(), "SpectralField");
        if (static_cast<int>(comps_.size()) != comps_[0].basis().dimension())
            throw DimensionError("SpectralField: component count must equal the dimension");
    }

    static SpectralField zero(const BasisPtr& basis) {
        return SpectralField(std::vector<SpectralFunction>(static_cast<std::size_t>(basis->dimension()),
                                                           SpectralFunction::zero(basis)));
    }

    /// Field from the stacked coefficient vector (axis-major).
    static SpectralField from_stacked(const BasisPtr& basis, const CVector& v) {
        const auto n = static_cast<Eigen::Index>(basis->size());
        if (v.size() != n * basis->dimension()) throw DimensionError("SpectralField: stacked length mismatch");
        std::vector<SpectralFunction> comps;
        for (int j = 0; j < basis->dimension(); ++j) comps.emplace_back(basis, v.segment(j * n, n));
        return SpectralField(std::move(comps));
    }

    int dimension() const { return static_cast<int>(comps_.size()); }
    const SpectralFunction& operator[](int j) const { return comps_[static_cast<std::size_t>(j)]; }
    SpectralFunction& operator[](int j) { return comps_[static_cast<std::size_t>(j)]; }
    const BasisPtr& basis_ptr() const { return comps_.at(0).basis_ptr(); }

    CVector stacked() const {
        const auto n = comps_.at(0).coeffs().size();
        CVector v(n * dimension());
        for (int j = 0; j < dimension(); ++j) v.segment(j * n, n) = comps_[static_cast<std::size_t>(j)].coeffs();
        return v;
    }

    real norm() const { return stacked().norm(); }

private:
    std::vector<SpectralFunction> comps_;
};

/// Element of L^2 (+) L^2(.; R^d) in the order scalar block, then field blocks axis by axis.
class DiracState {
public:
    DiracState() = default;
    DiracState(SpectralFunction scalar, SpectralField field) : scalar_(std::move(scalar)), field_(std::move(field)) {
        detail::require_same_basis(scalar_.basis(), field_[0].basis(), "DiracState");
    }

    static DiracState from_stacked(const BasisPtr& basis, const CVector& v) {
        const auto n = static_cast<Eigen::Index>(basis->size());
        if (v.size() != n * (1 + basis->dimension())) throw DimensionError("DiracState: stacked length mismatch");
        return {SpectralFunction(basis, v.head(n)), SpectralField::from_stacked(basis, v.tail(v.size() - n))};
    }

    static DiracState scalar_only(const SpectralFunction& f) { return {f, SpectralField::zero(f.basis_ptr())}; }

    const SpectralFunction& scalar() const { return scalar_; }
    const SpectralField& field() const { return field_; }
    const BasisPtr& basis_ptr() const { return scalar_.basis_ptr(); }

    CVector stacked() const {
        const CVector g = field_.stacked();
        CVector v(scalar_.coeffs().size() + g.size());
        v << scalar_.coeffs(), g;
        return v;
    }

    real norm() const { return std::sqrt(scalar_.norm() * scalar_.norm() + field_.norm() * field_.norm()); }

private:
    SpectralFunction scalar_;
    SpectralField field_;
};

}  // namespace oulab
