#pragma once

#include <cmath>
#include <vector>

#include "oulab/hermite/spectral_function.hpp"

namespace oulab {

/// Complex time z of the Mehler kernel M_z, away from the poles z in i pi Z.
class MehlerTime {
public:
    MehlerTime(cplx z, int dimension) : z_(z), d_(dimension) {
        if (z_.real() < 0.0) throw DomainError("MehlerTime: Re z must be non-negative");
        if (d_ < 1) throw DomainError("MehlerTime: dimension must be positive");
        const real gap = std::abs(1.0 - std::exp(-2.0 * z_));
        if (gap < 1e-8) throw DomainError("MehlerTime: z is within 1e-8 of a kernel pole (1 - e^{-2z} = 0)");
    }
    cplx z() const { return z_; }
    int dimension() const { return d_; }

private:
    cplx z_;
    int d_;
};

/// M_z(x, y) = (2 pi)^{-d/2} (1 - e^{-2z})^{-d/2} exp(-1/2 (e^{-z}x - y).(e^{-z}x - y) / (1 - e^{-2z})),
/// with the bilinear square and the principal branch of the power.
template <typename VecX, typename VecY>
cplx mehler_eval(const MehlerTime& time, const VecX& x, const VecY& y) {
    const int d = time.dimension();
    if (static_cast<int>(x.size()) != d || static_cast<int>(y.size()) != d)
        throw DimensionError("mehler_eval: point dimension mismatch");
    const cplx e = std::exp(-time.z());
    const cplx den = 1.0 - e * e;
    cplx sq = 0.0;
    for (int j = 0; j < d; ++j) {
        const cplx v = e * static_cast<real>(x[j]) - static_cast<real>(y[j]);
        sq += v * v;
    }
    return std::pow(2.0 * pi, -0.5 * d) * std::pow(den, -0.5 * d) * std::exp(-0.5 * sq / den);
}

/// Applies e^{zL} to f with the kernel M_{z/2}, whose time scale matches L = 1/2 Delta - 1/2 x.grad.
/// Substituting y = rho x + sigma xi (rho = e^{-z/2}, sigma^2 = 1 - e^{-z}) turns the Lebesgue
/// integral into a Gaussian expectation in xi, evaluated by Gauss-Hermite and exact on polynomials.
inline SpectralFunction kernel_apply(const MehlerTime& time, const SpectralFunction& f, const QuadratureGrid& grid) {
    const int d = f.basis().dimension();
    if (time.dimension() != d) throw DimensionError("kernel_apply: time dimension does not match f");
    const MehlerTime half(time.z() / 2.0, d);  // validates the pole condition of the kernel actually used
    const cplx rho = std::exp(-half.z());
    const cplx sigma = std::sqrt(1.0 - rho * rho);
    const int N = f.basis().max_degree();
    if (grid.order() < N + 1) throw DomainError("kernel_apply: grid order below N+1");
    const QuadratureGrid inner(d, N / 2 + 1);
    const RMatrix& X = grid.points();
    const RMatrix& Xi = inner.points();
    CVector values(X.cols());
    CMatrix Y(d, Xi.cols());
    for (Eigen::Index i = 0; i < X.cols(); ++i) {
        for (Eigen::Index k = 0; k < Xi.cols(); ++k)
            for (int j = 0; j < d; ++j) Y(j, k) = rho * X(j, i) + sigma * Xi(j, k);
        const CVector fy = synthesize(f, Y);
        values[i] = inner.weights().cast<cplx>().dot(fy);  // dot conjugates the first argument; weights are real
    }
    return expand_samples(values, f.basis_ptr(), grid);
}

/// Quadrature check of int M_t(x, y) dy = 1 at a point x, for real t.
inline real mehler_mass(const MehlerTime& time, const std::vector<real>& x, int cells_per_axis = 400, real half_width = 12.0) {
    if (time.dimension() != 1) throw DomainError("mehler_mass: implemented for d = 1");
    const Rule1D rule = composite_legendre(-half_width, half_width, cells_per_axis, 8);
    cplx s = 0.0;
    for (std::size_t k = 0; k < rule.size(); ++k) s += rule.weights[k] * mehler_eval(time, x, std::vector<real>{rule.nodes[k]});
    return std::abs(s);
}

struct InfiniteSpeedPairing {
    cplx pairing;        // double ball average of M_{i pi/2}(x, y) over B(x0, 1/m) x B(y0, 1/n)
    cplx kernel_limit;   // M_{i pi/2}(x0, y0) = (4 pi)^{-d/2} exp(-1/4 (-i x0 - y0).(-i x0 - y0))
    cplx display_limit;  // (4 pi)^{-d/2} exp(-1/4 (i x0 - y0).(i x0 - y0)), equal to kernel_limit when x0 = 0
};

/// Lebesgue pairing of the continued kernel at t0 = pi/2 against normalized ball indicators,
/// by the tensor midpoint rule with `cells` cells per axis on each ball's bounding box.
inline InfiniteSpeedPairing infinite_speed_pairing(const std::vector<real>& x0, const std::vector<real>& y0, real m,
                                                   real n, int cells = 32) {
    const int d = static_cast<int>(x0.size());
    if (d < 1 || d > 3 || static_cast<int>(y0.size()) != d) throw DimensionError("infinite_speed_pairing: bad points");
    if (x0 == y0) throw DomainError("infinite_speed_pairing: x0 must differ from y0");
    if (!(m > 0) || !(n > 0)) throw DomainError("infinite_speed_pairing: scales must be positive");
    const MehlerTime t0(cplx(0.0, pi / 2.0), d);

    auto ball_points = [&](const std::vector<real>& c, real r) {
        std::vector<std::vector<real>> pts;
        const real h = 2.0 * r / cells;
        std::vector<int> idx(static_cast<std::size_t>(d), 0);
        std::size_t total = 1;
        for (int j = 0; j < d; ++j) total *= static_cast<std::size_t>(cells);
        for (std::size_t q = 0; q < total; ++q) {
            std::size_t rest = q;
            std::vector<real> p(static_cast<std::size_t>(d));
            real dist2 = 0.0;
            for (int j = 0; j < d; ++j) {
                const auto k = static_cast<int>(rest % static_cast<std::size_t>(cells));
                rest /= static_cast<std::size_t>(cells);
                const real off = -r + (k + 0.5) * h;
                p[static_cast<std::size_t>(j)] = c[static_cast<std::size_t>(j)] + off;
                dist2 += off * off;
            }
            if (dist2 <= r * r) pts.push_back(std::move(p));
        }
        return pts;
    };
    // Normalized indicators: averaging over the midpoint cells inside each ball.
    const auto xs = ball_points(x0, 1.0 / m);
    const auto ys = ball_points(y0, 1.0 / n);
    cplx s = 0.0;
    for (const auto& x : xs)
        for (const auto& y : ys) s += mehler_eval(t0, x, y);
    s /= static_cast<real>(xs.size() * ys.size());

    cplx sq_kernel = 0.0, sq_display = 0.0;
    for (int j = 0; j < d; ++j) {
        const auto jj = static_cast<std::size_t>(j);
        const cplx a = cplx(0.0, -x0[jj]) - y0[jj];
        const cplx b = cplx(0.0, x0[jj]) - y0[jj];
        sq_kernel += a * a;
        sq_display += b * b;
    }
    const real pref = std::pow(4.0 * pi, -0.5 * d);
    return {s, pref * std::exp(-0.25 * sq_kernel), pref * std::exp(-0.25 * sq_display)};
}

}  // namespace oulab
