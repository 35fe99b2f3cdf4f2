#include <gtest/gtest.h>

#include "oracles.hpp"
#include "oulab/hermite/spectral_function.hpp"

using namespace oulab;

TEST(MultiIndex, DegreeShiftAndText) {
    const MultiIndex a({2, 0, 3});
    EXPECT_EQ(a.degree(), 5);
    EXPECT_EQ(a.dimension(), 3);
    EXPECT_EQ(a.shifted(1, 1)[1], 1);
    EXPECT_EQ(a.to_string(), "(2,0,3)");
    EXPECT_THROW(MultiIndex({1, -1}), DomainError);
}

TEST(BasisTruncation, SizeIsBinomial) {
    for (int d = 1; d <= 3; ++d)
        for (int N : {1, 4, 9}) EXPECT_EQ(BasisTruncation(d, N).size(), binomial(N + d, d)) << d << " " << N;
    EXPECT_EQ(BasisTruncation(2, 14).size(), 120u);
    EXPECT_THROW(BasisTruncation(4, 2), DomainError);
    EXPECT_THROW(BasisTruncation(1, 0), DomainError);
    EXPECT_THROW(BasisTruncation(1, -1), DomainError);
}

TEST(BasisTruncation, GradedLexOrderAndLookup) {
    const BasisTruncation b(2, 3);
    // Degree first; within a degree the larger leading entry comes first.
    const std::vector<std::vector<int>> expected = {{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2},
                                                    {3, 0}, {2, 1}, {1, 2}, {0, 3}};
    ASSERT_EQ(b.size(), expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i) {
        EXPECT_EQ(b[i].entries(), expected[i]);
        EXPECT_EQ(b.position(expected[i]), i);
    }
    EXPECT_EQ(b.position(std::vector<int>{4, 0}), BasisTruncation::npos);
    EXPECT_EQ(b.positions_up_to_degree(1).size(), 3u);
    for (std::size_t i = 1; i < b.size(); ++i) EXPECT_TRUE(graded_lex_less(b[i - 1], b[i]));
}

TEST(Hermite, RecurrenceMatchesExplicitSum) {
    for (int n = 0; n <= 20; ++n)
        for (real x : {-3.7, -1.0, 0.0, 0.3, 2.5, 5.0}) {
            const real ref = static_cast<real>(oracle::hermite_explicit(n, x));
            EXPECT_NEAR(hermite_1d(n, x), ref, 1e-10 * std::max(1.0, std::abs(ref))) << n << " " << x;
        }
}

TEST(Hermite, ComplexArgumentMatchesExplicitSum) {
    // The explicit sum is a polynomial; evaluate it on a complex point term by term.
    const cplx z(0.7, -1.3);
    for (int n = 0; n <= 12; ++n) {
        cplx ref = 0.0;
        for (int m = 0; 2 * m <= n; ++m) {
            const real c = std::exp(std::lgamma(n + 1.0) - std::lgamma(m + 1.0) - std::lgamma(n - 2 * m + 1.0) - m * std::log(2.0));
            ref += (m % 2 ? -c : c) * std::pow(z, n - 2 * m);
        }
        ref /= std::sqrt(std::tgamma(n + 1.0));
        EXPECT_LT(std::abs(hermite_1d(n, z) - ref), 1e-11 * std::max(1.0, std::abs(ref)));
    }
}

TEST(Hermite, TensorProductEvaluation) {
    const MultiIndex a({2, 3});
    const std::vector<real> x = {0.4, -1.1};
    const real ref = static_cast<real>(oracle::hermite_explicit(2, 0.4) * oracle::hermite_explicit(3, -1.1));
    EXPECT_NEAR(hermite_eval(a, x), ref, 1e-13);
    EXPECT_THROW(hermite_eval(a, std::vector<real>{1.0}), DimensionError);
}

TEST(GaussHermite, FrozenNodesAndWeights) {
    // Roots of He_5 are 0 and +-sqrt(5 +- sqrt(10)); weights normalized to a probability measure.
    const Rule1D r = gauss_hermite(5);
    const std::vector<real> x = {-2.8569700138728056, -1.3556261799742659, 0.0, 1.3556261799742659, 2.8569700138728056};
    const std::vector<real> w = {0.011257411327720691, 0.22207592200561266, 0.53333333333333333, 0.22207592200561266,
                                 0.011257411327720691};
    for (int i = 0; i < 5; ++i) {
        EXPECT_NEAR(r.nodes[static_cast<std::size_t>(i)], x[static_cast<std::size_t>(i)], 1e-14);
        EXPECT_NEAR(r.weights[static_cast<std::size_t>(i)], w[static_cast<std::size_t>(i)], 1e-14);
    }
    EXPECT_NEAR(std::sqrt(5.0 - std::sqrt(10.0)), x[3], 1e-15);
}

TEST(GaussHermite, GaussianMomentsExact) {
    // E x^{2k} = (2k-1)!!
    for (int order : {10, 50, 98, 200}) {
        const Rule1D r = gauss_hermite(order);
        for (int k = 0; 2 * k <= std::min(2 * order - 1, 40); ++k) {
            real m = 0.0, ref = 1.0;
            for (int j = 1; j < 2 * k; j += 2) ref *= j;
            for (std::size_t i = 0; i < r.size(); ++i) m += r.weights[i] * std::pow(r.nodes[i], 2 * k);
            EXPECT_NEAR(m / ref, 1.0, 1e-12) << order << " " << k;
        }
    }
    EXPECT_THROW(gauss_hermite(0), DomainError);
    EXPECT_THROW(gauss_hermite(401), DomainError);
}

TEST(GaussLegendre, PolynomialExactness) {
    const Rule1D r = gauss_legendre(8);
    for (int k = 0; k <= 15; ++k) {
        real s = 0.0;
        for (std::size_t i = 0; i < r.size(); ++i) s += r.weights[i] * std::pow(r.nodes[i], k);
        const real ref = k % 2 ? 0.0 : 2.0 / (k + 1);
        EXPECT_NEAR(s, ref, 1e-14) << k;
    }
    const Rule1D c = composite_legendre(-1.0, 3.0, 5, 10);
    real s = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) s += c.weights[i] * std::exp(c.nodes[i]);
    EXPECT_NEAR(s, std::exp(3.0) - std::exp(-1.0), 1e-12);
}

TEST(QuadratureGrid, TensorStructure) {
    const QuadratureGrid g(2, 6);
    EXPECT_EQ(g.size(), 36);
    EXPECT_NEAR(g.weights().sum(), 1.0, 1e-15);
    EXPECT_EQ(g.exactness_degree(), 11);
    // E[x^2 y^4] = 1 * 3
    real m = 0.0;
    for (Eigen::Index i = 0; i < g.size(); ++i) m += g.weights()[i] * std::pow(g.points()(0, i), 2) * std::pow(g.points()(1, i), 4);
    EXPECT_NEAR(m, 3.0, 1e-13);
    EXPECT_EQ(default_quadrature_order(24), 50);
}

TEST(Orthonormality, AcceptanceSizes) {
    for (auto [d, N] : {std::pair{1, 48}, std::pair{2, 14}}) {
        const auto basis = make_basis(d, N);
        const QuadratureGrid grid(d, default_quadrature_order(N));
        const RMatrix phi = grid_evaluation(*basis, grid);
        const RMatrix gram = phi.transpose() * grid.weights().asDiagonal() * phi;
        EXPECT_LE((gram - RMatrix::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff(), 1e-10) << d << " " << N;
    }
}

TEST(Orthonormality, IndependentSimpsonOracle) {
    for (int m : {0, 3, 7})
        for (int n : {0, 3, 8}) {
            const real v = oracle::gaussian_integral([&](real x) {
                return static_cast<real>(oracle::hermite_explicit(m, x) * oracle::hermite_explicit(n, x));
            });
            EXPECT_NEAR(v, m == n ? 1.0 : 0.0, 1e-9) << m << " " << n;
        }
}

TEST(SpectralFunction, ExpandSynthesizeRoundTrip) {
    const auto basis = make_basis(1, 10);
    const QuadratureGrid grid(1, 22);
    const auto f = expand([](const RVector& x) { return 1.0 + 2.0 * x[0] - 0.5 * x[0] * x[0] * x[0]; }, basis, grid);
    EXPECT_EQ(f.effective_degree(1e-12), 3);
    RMatrix pts(1, 3);
    pts << -1.5, 0.2, 2.0;
    const CVector v = synthesize(f, pts);
    for (int i = 0; i < 3; ++i) {
        const real x = pts(0, i);
        EXPECT_NEAR(v[i].real(), 1.0 + 2.0 * x - 0.5 * x * x * x, 1e-12);
    }
    // Independent oracle: coefficient of h_3 is <f, h_3> = -0.5 * sqrt(6).
    EXPECT_NEAR(f.coeffs()[3].real(), -0.5 * std::sqrt(6.0), 1e-12);
}

TEST(SpectralFunction, ExpandRefusesLowOrder) {
    const auto basis = make_basis(1, 10);
    const QuadratureGrid grid(1, 10);
    EXPECT_THROW(expand([](const RVector&) { return 1.0; }, basis, grid), DomainError);
    EXPECT_THROW(SpectralFunction(basis, CVector::Zero(3)), DimensionError);
}

TEST(SpectralFunction, ComplexSynthesis) {
    const auto basis = make_basis(1, 6);
    CVector c = CVector::Zero(7);
    c[2] = 1.0;
    c[5] = cplx(0.0, 2.0);
    const SpectralFunction f(basis, c);
    CMatrix pts(1, 1);
    pts(0, 0) = cplx(0.3, 0.8);
    const cplx v = synthesize(f, pts)[0];
    const cplx ref = hermite_1d(2, pts(0, 0)) + cplx(0.0, 2.0) * hermite_1d(5, pts(0, 0));
    EXPECT_LT(std::abs(v - ref), 1e-13);
}

TEST(LpNorm, MatchesSimpsonOracle) {
    const auto basis = make_basis(1, 6);
    CVector c = CVector::Zero(7);
    c[1] = 1.0;
    c[4] = cplx(0.5, -0.25);
    const SpectralFunction f(basis, c);
    auto ref = [&](real p) {
        return std::pow(oracle::gaussian_integral([&](real x) { return std::pow(std::abs(oracle::eval_1d(c, x)), p); }), 1.0 / p);
    };
    for (real p : {2.0, 4.0}) EXPECT_NEAR(lp_norm(f, p, QuadratureGrid(1, lp_exact_order(6, p))), ref(p), 1e-7 * ref(p)) << p;
    // Odd p: |f|^3 has kinks at the zeros of f, so the rule only converges algebraically.
    const real r3 = ref(3.0);
    const real e80 = std::abs(lp_norm(f, 3.0, QuadratureGrid(1, 80)) - r3);
    const real e200 = std::abs(lp_norm(f, 3.0, QuadratureGrid(1, 200)) - r3);
    EXPECT_LT(e80, 1e-4 * r3);
    EXPECT_LT(e200, e80);
    EXPECT_NEAR(lp_norm(f, 2.0, QuadratureGrid(1, 8)), f.norm(), 1e-13);
    EXPECT_THROW(lp_norm(f, 0.5, QuadratureGrid(1, 8)), DomainError);
}
