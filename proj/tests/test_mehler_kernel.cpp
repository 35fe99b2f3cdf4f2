#include <gtest/gtest.h>

#include "oracles.hpp"
#include "oulab/mehler/mehler.hpp"

using namespace oulab;

namespace {

// Mehler's formula as a Hermite series: sum_n e^{-nz} h_n(x) h_n(y) times the Gaussian density at y.
cplx mehler_series(cplx z, real x, real y, int terms = 120) {
    cplx s = 0.0;
    for (int n = 0; n < terms; ++n)
        s += std::exp(-z * static_cast<real>(n)) *
             static_cast<real>(oracle::hermite_explicit(n, x) * oracle::hermite_explicit(n, y));
    return s * oracle::gauss(y);
}

}  // namespace

TEST(MehlerEval, RealTimeIsGaussianTransition) {
    const real t = 0.6;
    const MehlerTime mt(t, 1);
    for (auto [x, y] : {std::pair{0.0, 0.0}, std::pair{1.2, -0.4}, std::pair{-2.0, 1.5}}) {
        const real var = 1.0 - std::exp(-2 * t);
        const real mean = std::exp(-t) * x;
        const real ref = std::exp(-0.5 * (y - mean) * (y - mean) / var) / std::sqrt(2 * oracle::pi * var);
        EXPECT_NEAR(mehler_eval(mt, std::vector<real>{x}, std::vector<real>{y}).real(), ref, 1e-14);
    }
}

TEST(MehlerEval, ComplexTimeMatchesHermiteSeries) {
    for (cplx z : {cplx(0.5, 0.0), cplx(0.4, 0.9), cplx(1.0, -2.0)}) {
        const MehlerTime mt(z, 1);
        for (auto [x, y] : {std::pair{0.3, -0.2}, std::pair{1.1, 0.8}}) {
            const cplx v = mehler_eval(mt, std::vector<real>{x}, std::vector<real>{y});
            EXPECT_LT(std::abs(v - mehler_series(z, x, y)), 1e-10) << z;
        }
    }
}

TEST(MehlerEval, TensorizesAndChecksDimension) {
    const MehlerTime m2(cplx(0.7, 0.3), 2), m1(cplx(0.7, 0.3), 1);
    const std::vector<real> x = {0.2, -1.0}, y = {0.5, 0.1};
    const cplx prod = mehler_eval(m1, std::vector<real>{x[0]}, std::vector<real>{y[0]}) *
                      mehler_eval(m1, std::vector<real>{x[1]}, std::vector<real>{y[1]});
    EXPECT_LT(std::abs(mehler_eval(m2, x, y) - prod), 1e-15);
    EXPECT_THROW(mehler_eval(m2, std::vector<real>{1.0}, y), DimensionError);
}

TEST(MehlerTime, PolesAndDomain) {
    EXPECT_THROW(MehlerTime(cplx(0.0, pi), 1), DomainError);
    EXPECT_THROW(MehlerTime(cplx(0.0, 0.0), 1), DomainError);
    EXPECT_THROW(MehlerTime(cplx(-0.1, 1.0), 1), DomainError);
    EXPECT_NO_THROW(MehlerTime(cplx(0.0, pi / 2), 1));
}

TEST(MehlerMass, IntegratesToOne) {
    for (real t : {0.1, 1.0, 3.0}) EXPECT_NEAR(mehler_mass(MehlerTime(t, 1), {0.7}), 1.0, 1e-12) << t;
}

TEST(KernelApply, ReproducesSpectralSemigroup) {
    for (int d : {1, 2}) {
        const auto basis = make_basis(d, d == 1 ? 20 : 8);
        const QuadratureGrid grid(d, default_quadrature_order(basis->max_degree()));
        CVector c(static_cast<Eigen::Index>(basis->size()));
        for (Eigen::Index k = 0; k < c.size(); ++k) c[k] = cplx(1.0 / (1.0 + static_cast<real>(k)), 0.1 * static_cast<real>(k % 3));
        const SpectralFunction f(basis, c);
        for (cplx z : {cplx(0.5, 0.0), cplx(0.3, 1.2), cplx(0.0, 1.0)}) {
            const auto g = kernel_apply(MehlerTime(z, d), f, grid);
            CVector ref(c.size());
            for (Eigen::Index k = 0; k < c.size(); ++k)
                ref[k] = std::exp(-0.5 * z * static_cast<real>((*basis)[static_cast<std::size_t>(k)].degree())) * c[k];
            EXPECT_LT((g.coeffs() - ref).cwiseAbs().maxCoeff(), 1e-11) << d << " " << z;
        }
    }
}

TEST(KernelApply, RejectsPoleOfHalfTime) {
    const auto basis = make_basis(1, 4);
    const QuadratureGrid grid(1, 10);
    EXPECT_THROW(kernel_apply(MehlerTime(cplx(0.0, 2 * pi), 1), SpectralFunction::unit(basis, 1), grid), DomainError);
    EXPECT_THROW(kernel_apply(MehlerTime(0.5, 1), SpectralFunction::unit(basis, 1), QuadratureGrid(1, 3)), DomainError);
}

TEST(InfiniteSpeed, PairingApproachesClosedFormLimit) {
    const std::vector<real> x0 = {0.0}, y0 = {3.0};
    const real limit = std::exp(-9.0 / 4.0) / std::sqrt(4.0 * oracle::pi);
    real prev = 1e300;
    for (real m : {8.0, 16.0, 32.0}) {
        const auto r = infinite_speed_pairing(x0, y0, m, m);
        EXPECT_NEAR(r.kernel_limit.real(), limit, 1e-15);
        EXPECT_NEAR(std::abs(r.kernel_limit - r.display_limit), 0.0, 1e-15);
        const real rel = std::abs(r.pairing - r.kernel_limit) / std::abs(r.kernel_limit);
        EXPECT_LE(rel, 0.05) << m;
        EXPECT_LT(rel, prev);
        prev = rel;
    }
}

TEST(InfiniteSpeed, DisplayFormDiffersOffOrigin) {
    const auto r = infinite_speed_pairing({1.0}, {3.0}, 16, 16);
    // exp(-1/4 (-i - 3)^2) and exp(-1/4 (i - 3)^2) are complex conjugates.
    EXPECT_NEAR(std::abs(r.kernel_limit - std::conj(r.display_limit)), 0.0, 1e-15);
    EXPECT_GT(std::abs(r.kernel_limit - r.display_limit), 1e-3);
    EXPECT_THROW(infinite_speed_pairing({1.0}, {1.0}, 4, 4), DomainError);
}
