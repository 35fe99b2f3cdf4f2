#include <gtest/gtest.h>

#include "oracles.hpp"
#include "oulab/probes/commutator.hpp"
#include "oulab/probes/offdiag.hpp"

using namespace oulab;

TEST(Region, DistancesAndDilation) {
    const auto K = Region::interval(-1.0, 1.0);
    EXPECT_DOUBLE_EQ(K.distance(std::vector<real>{2.5}), 1.5);
    EXPECT_DOUBLE_EQ(K.dilated(0.5).distance(std::vector<real>{2.5}), 1.0);
    EXPECT_TRUE(K.contains(std::vector<real>{-1.0}));
    EXPECT_DOUBLE_EQ(K.set_distance(Region::interval(3.0, 4.0)), 2.0);
    EXPECT_DOUBLE_EQ(K.dilated(0.25).set_distance(Region::interval(3.0, 4.0).dilated(0.25)), 1.5);

    const auto B = Region::ball({0.0, 0.0}, 1.0);
    EXPECT_NEAR(B.distance(std::vector<real>{3.0, 4.0}), 4.0, 1e-15);
    EXPECT_NEAR(B.set_distance(Region::box({3.0, -1.0}, {5.0, 1.0})), 2.0, 1e-15);
    const auto g = B.distance_gradient(std::vector<real>{3.0, 4.0});
    EXPECT_NEAR(g[0], 0.6, 1e-15);
    EXPECT_NEAR(g[1], 0.8, 1e-15);
    EXPECT_THROW(Region::interval(1.0, 0.0), DomainError);
    EXPECT_THROW(K.dilated(-1.0), DomainError);
}

TEST(Region, IntervalAlgebra) {
    Region r(1);
    r.add_box({{-3.0}, {-1.0}}).add_box({{-1.5}, {0.0}}).add_ball({{4.0}, 1.0});
    const auto iv = r.intervals();
    ASSERT_EQ(iv.size(), 2u);
    EXPECT_DOUBLE_EQ(iv[0].a, -3.0);
    EXPECT_DOUBLE_EQ(iv[0].b, 0.0);
    EXPECT_DOUBLE_EQ(iv[1].a, 3.0);
    const auto co = r.complement_intervals();
    ASSERT_EQ(co.size(), 3u);
    EXPECT_TRUE(std::isinf(co.front().a));
    EXPECT_DOUBLE_EQ(co[1].a, 0.0);
    EXPECT_DOUBLE_EQ(co[1].b, 3.0);
    EXPECT_FALSE(r.separable());
}

TEST(Gram, IntervalMatchesSimpsonOracle) {
    const int N = 10;
    const RMatrix A = interval_gram(N, -0.5, 2.0);
    for (int m : {0, 3, 10})
        for (int n : {0, 4, 9}) {
            const real ref = oracle::gaussian_integral(
                [&](real x) { return static_cast<real>(oracle::hermite_explicit(m, x) * oracle::hermite_explicit(n, x)); }, -0.5, 2.0, 1e-4);
            EXPECT_NEAR(A(m, n), ref, 1e-10) << m << " " << n;
        }
    EXPECT_LT((interval_gram(30, -kInf, kInf) - RMatrix::Identity(31, 31)).cwiseAbs().maxCoeff(), 1e-12);
    // Frozen: gamma([-1, 1]) = erf(1/sqrt 2).
    EXPECT_NEAR(interval_gram(0, -1.0, 1.0)(0, 0), 0.682689492137085897, 1e-14);
}

TEST(Gram, RegionGramsAgreeWithClosedForms) {
    const auto basis = make_basis(2, 6);
    const RMatrix Abox = region_gram(*basis, Region::box({-1.0, 0.0}, {2.0, kInf}));
    EXPECT_NEAR(Abox(0, 0), 0.5 * (std::erf(2.0 / std::sqrt(2.0)) + std::erf(1.0 / std::sqrt(2.0))) * 0.5, 1e-12);
    // Gamma mass of the disc of radius 2 is 1 - e^{-2}.
    const RMatrix Aball = region_gram(*basis, Region::ball({0.0, 0.0}, 2.0));
    EXPECT_NEAR(Aball(0, 0), 1.0 - std::exp(-2.0), 1e-3);
    const RMatrix C = complement_gram(*basis, Region::ball({0.0, 0.0}, 2.0));
    EXPECT_LT((C + Aball - RMatrix::Identity(C.rows(), C.cols())).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Support, RealizedScalarIsConcentrated) {
    const auto basis = make_basis(1, 48);
    const auto s = realize_scalar(basis, Region::interval(-1.0, 1.0), 0.0, 1e-1);
    EXPECT_TRUE(s.within_threshold());
    EXPECT_NEAR(s.state.norm(), 1.0, 1e-12);
    // Independent mass inside [-1, 1] by Simpson on the explicit polynomials. The explicit sum loses
    // digits to cancellation for large |x|, so only the interior, where it is accurate, is integrated.
    const CVector& c = s.state.scalar().coeffs();
    auto dens = [&](real x) { return std::norm(oracle::eval_1d(c, x)); };
    const real inside = oracle::gaussian_integral(dens, -1.0, 1.0, 2e-4);
    EXPECT_NEAR(std::sqrt(1.0 - inside), s.residual, 1e-9);
    // Frozen from a 50-digit computation of the top eigenvalue of the interval Gram matrix.
    EXPECT_NEAR(s.residual, 0.0036693844927365084, 1e-13);
    // More degrees concentrate better.
    const auto coarse = realize_scalar(basis, Region::interval(-1.0, 1.0), 0.0, 1e-1, 24);
    EXPECT_LT(s.residual, coarse.residual);
}

TEST(Support, RealizedFieldSitsInOneComponent) {
    const auto basis = make_basis(2, 8);
    const auto s = realize_field(basis, Region::box({1.0, -kInf}, {3.0, kInf}), 1, 0.0, 0.5);
    EXPECT_EQ(s.state.scalar().norm(), 0.0);
    EXPECT_EQ(s.state.field()[0].norm(), 0.0);
    EXPECT_NEAR(s.state.field()[1].norm(), 1.0, 1e-12);
    EXPECT_LE(s.state.field()[1].effective_degree(), 7);
    EXPECT_THROW(realize_field(basis, Region::box({0.0, 0.0}, {1.0, 1.0}), 2), DomainError);
}

TEST(Bump, ProfileAndSlope) {
    const BumpFunction eta(Region::interval(-1.0, 1.0), 2.0, 0.2);
    EXPECT_DOUBLE_EQ(eta.value(std::vector<real>{0.5}), 1.0);
    EXPECT_DOUBLE_EQ(eta.value(std::vector<real>{3.0}), 0.0);
    EXPECT_DOUBLE_EQ(eta.value(std::vector<real>{-1.0}), 1.0);
    EXPECT_DOUBLE_EQ(eta.value(std::vector<real>{-3.0}), 0.0);
    // The mollified ramp starts to drop right at the plateau edge.
    EXPECT_LT(eta.value(std::vector<real>{-1.05}), 1.0);
    EXPECT_GT(eta.value(std::vector<real>{-1.05}), 0.99);
    EXPECT_NEAR(eta.lipschitz_bound(), 1.0 / 1.6, 1e-15);
    EXPECT_LE(eta.measured_lipschitz(), eta.lipschitz_bound() + 1e-12);
    for (real x : {1.3, 2.0, 2.6, -2.2}) {
        const real h = 1e-6;
        const real fd = (eta.value(std::vector<real>{x + h}) - eta.value(std::vector<real>{x - h})) / (2 * h);
        EXPECT_NEAR(eta.gradient(std::vector<real>{x})[0], fd, 1e-6) << x;
    }
    EXPECT_THROW(BumpFunction(Region::interval(0, 1), 1.0, 0.5), DomainError);
    EXPECT_THROW(separation_eta(Region::interval(0, 1), Region::interval(1, 2), 0.1), DomainError);
    EXPECT_DOUBLE_EQ(separation_eta(Region::interval(0, 1), Region(1), 0.1).value(std::vector<real>{9.0}), 1.0);
}

TEST(Propagation, DiracLeakageShrinksUnderRefinement) {
    const auto K = Region::interval(-1.0, 1.0);
    real worst[2] = {0.0, 0.0};
    int i = 0;
    for (int N : {24, 48}) {
        const auto m = OUModel::classical(1, N);
        const auto u = realize_scalar(m.basis_ptr(), K, 0.0, 1.0);
        const DiracEvolution evo(m);
        for (real t : {0.0, 0.25, 0.5, 0.75, 1.0}) {
            const real l = leakage(m, u, t, 0.25, &evo).leakage;
            worst[i] = std::max(worst[i], l);
            EXPECT_LE(l, u.residual) << N << " " << t;
        }
        ++i;
    }
    // Concentration of a degree-N polynomial on [-1, 1] limits the gain to about 6.9 here.
    EXPECT_GE(worst[0] / worst[1], 5.0);
}

TEST(Propagation, EvolutionIsUnitaryAndMatchesGroup) {
    const auto m = OUModel::classical(1, 16);
    const DiracEvolution evo(m);
    EXPECT_LT((evo.matrix(0.7) - dirac_propagator(m, 0.7).matrix()).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_THROW(DiracEvolution(OUModel::rotational(0.5, 4)), DomainError);
}

TEST(Propagation, SchrodingerLeaksAtFiniteTimes) {
    const auto m = OUModel::classical(1, 48);
    const auto u = realize_scalar(m.basis_ptr(), Region::interval(-1.0, 1.0), 0.0, 1.0);
    for (real t : {pi / 8, pi / 4}) EXPECT_GE(schrodinger_leakage(m, u, t, 0.25).leakage, 1e-2) << t;
}

TEST(Commutator, ClosedFormMatchesAlgebraic) {
    const auto m = OUModel::rotational(0.5, 8);
    const auto eta = expand([](const RVector& x) { return x[0] * x[0] - 0.5 * x[1]; }, m.basis_ptr(), m.grid());
    const auto r = commutator(m, eta);
    EXPECT_EQ(r.eta_degree, 2);
    EXPECT_EQ(r.exact_degree, 5);
    EXPECT_LT(r.agreement, 1e-8);
    EXPECT_LT(r.double_commutator, 1e-8);
}

TEST(Commutator, BumpNormBoundAndDuhamel) {
    const auto eta = BumpFunction(Region::interval(-1.0, 1.0), 2.0, 0.2);
    real prev = kInf;
    for (int N : {16, 32}) {
        const auto r = commutator_norm(OUModel::classical(1, N), eta);
        EXPECT_LE(r.norm, r.grad_sup + r.aliasing + 1e-12);
        EXPECT_LE(r.slack, prev);
        prev = r.slack;
    }
    const auto d = duhamel_check(OUModel::classical(1, 20), eta, 0.8, 40);
    EXPECT_GT(d.lhs_norm, 1e-3);
    EXPECT_LT(d.residual, 1e-6);
}

TEST(McIntoshMorris, BoundHoldsInRegime) {
    const auto m = OUModel::classical(1, 48);
    const auto u = realize_scalar(m.basis_ptr(), Region::interval(-2.5, -1.5), 0.0, 1.0);
    const auto v = realize_scalar(m.basis_ptr(), Region::interval(1.5, 2.5), 0.0, 1.0);
    const auto eta = separation_eta(Region::interval(-2.5, -1.5).dilated(0.3), Region::interval(1.5, 2.5).dilated(0.3), 0.1);
    const DiracEvolution evo(m);
    for (real t : {0.1, 0.5, 1.0}) {
        const auto p = mcintosh_morris_bound(m, u, v, eta, t, 8, 1e-1, &evo);
        EXPECT_TRUE(p.in_regime);
        EXPECT_TRUE(p.holds) << t << " " << p.lhs << " " << p.rhs << " " << p.slack;
    }
}

TEST(Offdiag, HeatPairingBelowBoundAndMehlerAgrees) {
    const auto m = OUModel::classical(1, 48);
    const real R = 3.0;
    const auto f = realize_scalar(m.basis_ptr(), Region::interval(-R / 2 - 1, -R / 2), 0.0, 1.0);
    const auto g = realize_scalar(m.basis_ptr(), Region::interval(R / 2, R / 2 + 1), 0.0, 1.0);
    for (real t : {0.25, 1.0, 4.0}) {
        const auto p = offdiag_heat(m, f, g, t);
        EXPECT_NEAR(p.R, R, 1e-15);
        EXPECT_TRUE(p.holds) << t;
        EXPECT_LT(p.mehler_gap, 1e-6);
        EXPECT_NEAR(p.bound_sqrt, std::sqrt(2 * t / (pi * R * R)) * std::exp(-R * R / (2 * t)), 1e-15);
    }
    const auto gf = realize_field(m.basis_ptr(), Region::interval(R / 2, R / 2 + 1), 0, 0.0, 1.0);
    const auto q = offdiag_heat_gradient(m, f, gf, 1.0);
    EXPECT_TRUE(q.holds);
    EXPECT_LT(q.mehler_gap, 1e-6);
    EXPECT_THROW(offdiag_heat(m, f, f, 1.0), DomainError);
}

TEST(Offdiag, ResolventDecayAndBisectoriality) {
    const auto m = OUModel::classical(1, 32);
    const auto ts = default_bisectorial_grid();
    EXPECT_EQ(ts.size(), 81u);
    // D is self-adjoint here, so ||(I - itD)^{-1}|| = 1 exactly (attained on the kernel).
    EXPECT_NEAR(bisectoriality_constant(m, ts), 1.0, 1e-12);
    const SeparatedPairFactory factory = [&](real R) {
        return std::pair{realize_scalar(m.basis_ptr(), Region::interval(-8.0, -R / 2), 0.0, 1.0),
                         realize_scalar(m.basis_ptr(), Region::interval(R / 2, 8.0), 0.0, 1.0)};
    };
    const auto rep = offdiag_resolvent(m, factory, {2.0, 3.0, 4.0}, {0.5, 1.0, 2.0});
    EXPECT_EQ(rep.rows.size(), 9u);
    EXPECT_GT(rep.alpha, 0.0);
    EXPECT_THROW(offdiag_resolvent(m, factory, {0.0}, {1.0}), DomainError);
}
