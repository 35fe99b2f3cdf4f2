#pragma once

#include <cmath>
#include <optional>

#include "oulab/hermite/spectral_function.hpp"
#include "oulab/probes/region.hpp"

namespace oulab {

/// eta(x) = phi(dist(x, A) / D): 1 on A, 0 once dist(x, A) >= D.
/// phi is the ramp from 1 at s = eps/2 to 0 at s = 1 - eps/2, averaged over a window of
/// half-width eps/2; the average keeps the slope bound 1/((1 - eps) D) <= (1 + 2 eps)/D and makes eta C^1.
class BumpFunction {
public:
    BumpFunction(Region plateau, real gap, real eps) : A_(std::move(plateau)), D_(gap), eps_(eps) {
        if (!(eps_ >= 0.0 && eps_ < 0.5)) throw DomainError("BumpFunction: eps must lie in [0, 0.5)");
        if (!(D_ > 0.0)) throw DomainError("BumpFunction: gap must be positive");
    }

    /// 1 on the ball of radius `plateau_radius`, 0 outside the ball of radius `radius`.
    static BumpFunction radial(std::vector<real> center, real plateau_radius, real radius, real eps) {
        if (!(radius > plateau_radius)) throw DomainError("BumpFunction: radius must exceed the plateau radius");
        BumpFunction b(Region::ball(center, plateau_radius), radius - plateau_radius, eps);
        b.center_ = std::move(center);
        b.radius_ = radius;
        b.plateau_ = plateau_radius;
        return b;
    }

    /// Constant 1 (no set to separate from).
    static BumpFunction constant_one(int dimension) { return BumpFunction(Region(dimension), kInf, 0.0); }

    int dimension() const { return A_.dimension(); }
    real gap() const { return D_; }
    real eps() const { return eps_; }
    const Region& plateau_set() const { return A_; }
    const std::optional<std::vector<real>>& center() const { return center_; }
    real radius() const { return radius_; }
    real plateau_radius() const { return plateau_; }

    /// Analytic bound on sup |grad eta|.
    real lipschitz_bound() const {
        if (std::isinf(D_) || A_.empty()) return 0.0;
        return 1.0 / ((1.0 - eps_) * D_);
    }

    template <typename Vec>
    real value(const Vec& x) const {
        if (std::isinf(D_) || A_.empty()) return 1.0;
        return phi(A_.distance(x) / D_);
    }

    template <typename Vec>
    std::vector<real> gradient(const Vec& x) const {
        std::vector<real> g(static_cast<std::size_t>(dimension()), 0.0);
        if (std::isinf(D_) || A_.empty()) return g;
        const real s = A_.distance(x) / D_;
        const real dphi = dphi_ds(s) / D_;
        if (dphi == 0.0) return g;
        const auto dir = A_.distance_gradient(x);
        for (std::size_t j = 0; j < g.size(); ++j) g[j] = dphi * dir[j];
        return g;
    }

    /// sup |grad eta| measured on a dense sample of the ramp profile.
    real measured_lipschitz(int samples = 20001) const {
        if (std::isinf(D_) || A_.empty()) return 0.0;
        real m = 0.0;
        for (int i = 0; i < samples; ++i) m = std::max(m, std::abs(dphi_ds(1.2 * i / (samples - 1) - 0.1)) / D_);
        return m;
    }

private:
    real ramp(real s) const {
        const real s0 = 0.5 * eps_, s1 = 1.0 - 0.5 * eps_;
        return std::clamp((s1 - s) / (s1 - s0), 0.0, 1.0);
    }
    real ramp_integral(real s) const {
        const real s0 = 0.5 * eps_, s1 = 1.0 - 0.5 * eps_;
        if (s <= s0) return s;
        if (s >= s1) return s0 + 0.5 * (s1 - s0);
        return s - (s - s0) * (s - s0) / (2.0 * (s1 - s0));
    }
    real phi(real s) const {
        if (eps_ == 0.0) return ramp(s);
        const real h = 0.5 * eps_;
        return (ramp_integral(s + h) - ramp_integral(s - h)) / (2.0 * h);
    }
    real dphi_ds(real s) const {
        if (eps_ == 0.0) {
            const real s1 = 1.0;
            return (s > 0.0 && s < s1) ? -1.0 : 0.0;
        }
        const real h = 0.5 * eps_;
        return (ramp(s + h) - ramp(s - h)) / (2.0 * h);
    }

    Region A_;
    real D_;
    real eps_;
    std::optional<std::vector<real>> center_;
    real radius_ = 0.0;
    real plateau_ = 0.0;
};

/// Separating function for sets A, B at positive distance: eta = 1 on A, 0 on B.
inline BumpFunction separation_eta(const Region& A, const Region& B, real eps) {
    if (B.empty()) return BumpFunction::constant_one(A.dimension());
    if (A.empty()) throw DomainError("separation_eta: A is empty");
    const real D = A.set_distance(B);
    if (!(D > 0.0)) throw DomainError("separation_eta: the sets overlap or touch (distance 0)");
    return BumpFunction(A, D, eps);
}

/// Expansion of a bump on the truncated basis.
inline SpectralFunction bump_to_spectral(const BumpFunction& eta, const BasisPtr& basis, const QuadratureGrid& grid) {
    return expand([&](const RVector& x) { return eta.value(x); }, basis, grid);
}

}  // namespace oulab
