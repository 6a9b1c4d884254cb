#include <gtest/gtest.h>

#include <cmath>

#include "nullwave/errors.hpp"
#include "nullwave/reduced_ode.hpp"
#include "nullwave/sampling.hpp"

using namespace nullwave;

namespace {

// 50 reproducible parameter sets with |c| <= 2, rho <= 1.
std::vector<XYParams> random_params(std::size_t count) {
    std::vector<XYParams> out;
    for (std::size_t i = 1; i <= count; ++i) {
        const double c = -2.0 + 4.0 * radical_inverse(i, 2);
        const double rho = 0.05 + 0.95 * radical_inverse(i, 3);
        const double phase = 2.0 * M_PI * radical_inverse(i, 5);
        out.push_back(XYParams::from_initial(c, rho * std::cos(phase), rho * std::sin(phase)));
    }
    return out;
}

}  // namespace

TEST(ClosedFormXY, TrivialBranches) {
    const auto z = closed_form_XY(3.0, {1.0, 0.0, 0.0, 0.0});
    EXPECT_EQ(z.X, 0.0);
    EXPECT_EQ(z.Y, 0.0);
    for (double s : {0.0, 1.0, 50.0}) {
        const auto p = closed_form_XY(s, {1.3, 0.7, 0.7, 0.0});
        EXPECT_EQ(p.X, 0.0);
        EXPECT_EQ(p.Y, 0.7);
    }
}

TEST(ClosedFormXY, InitialValueAndLimits) {
    const XYParams p{1.0, 1.0, 0.0, 1.0};
    const auto p0 = closed_form_XY(0.0, p);
    EXPECT_NEAR(p0.X, 1.0, 1e-15);
    EXPECT_NEAR(p0.Y, 0.0, 1e-15);
    const auto far = closed_form_XY(800.0, p);  // well past the e^{700} overflow point
    EXPECT_TRUE(std::isfinite(far.X));
    EXPECT_NEAR(far.X, 0.0, 1e-300);
    EXPECT_NEAR(far.Y, -1.0, 1e-15);
    const auto back = closed_form_XY(800.0, {-1.0, 1.0, 0.0, 1.0});
    EXPECT_NEAR(back.Y, 1.0, 1e-15);
}

TEST(ClosedFormXY, RejectsInconsistentParameters) {
    EXPECT_THROW(closed_form_XY(1.0, {1.0, 1.0, 2.0, 0.0}), UsageError);
}

TEST(IntegrateXY, MatchesClosedFormAtFixedPoint) {
    const XYParams p{1.0, 1.0, 0.0, 1.0};
    const auto traj = integrate_XY(p, 5.0, 5000);
    const auto exact = closed_form_XY(5.0, p);
    EXPECT_NEAR(traj.back().X, exact.X, 1e-8);
    EXPECT_NEAR(traj.back().Y, exact.Y, 1e-8);
}

TEST(IntegrateXY, ZeroCouplingIsConstant) {
    const auto traj = integrate_XY({0.0, 0.5, 0.3, 0.4}, 10.0, 100);
    for (const auto& pt : traj) {
        EXPECT_EQ(pt.X, 0.4);
        EXPECT_EQ(pt.Y, 0.3);
    }
}

TEST(IntegrateXYProperty, OracleEquivalenceAndFirstIntegral) {
    for (const auto& p : random_params(50)) {
        const auto traj = integrate_XY(p, 10.0, 10000);
        const auto exact = closed_form_XY(10.0, p);
        EXPECT_LE(std::hypot(traj.back().X - exact.X, traj.back().Y - exact.Y), 1e-8 * p.rho);
        for (const auto& pt : traj) EXPECT_NEAR(pt.X * pt.X + pt.Y * pt.Y, p.rho * p.rho, 1e-10);
    }
}

TEST(IntegrateXYProperty, FourthOrderConvergence) {
    const XYParams p{1.5, 0.9, -0.3, std::sqrt(0.81 - 0.09)};
    const auto exact = closed_form_XY(10.0, p);
    auto err = [&](std::size_t steps) {
        const auto t = integrate_XY(p, 10.0, steps).back();
        return std::hypot(t.X - exact.X, t.Y - exact.Y);
    };
    const double e1 = err(200);
    const double e2 = err(400);
    EXPECT_GE(e1 / e2, 8.0 * 0.9);
}

TEST(IntegrateReduced, TrivialCases) {
    const auto dir = SphereDirection::normalized(1, 2, 2);
    const auto a = integrate_reduced(null_form_system(), dir, {0.3, -0.2}, 1.0, 100.0, 50);
    for (const auto& v : a.V) {
        EXPECT_EQ(v[0], 0.3);
        EXPECT_EQ(v[1], -0.2);
    }
    const auto b = integrate_reduced(typical_example_r(), dir, {0.0, 0.0}, 1.0, 100.0, 50);
    for (const auto& v : b.V) {
        EXPECT_EQ(v[0], 0.0);
        EXPECT_EQ(v[1], 0.0);
    }
    EXPECT_DOUBLE_EQ(a.t.back(), 100.0);
    EXPECT_THROW(integrate_reduced(null_form_system(), dir, {0.3, -0.2}, 0.5, 100.0, 50), UsageError);
    EXPECT_THROW(integrate_reduced(null_form_system(), dir, {0.3}, 1.0, 100.0, 50), UsageError);
}

TEST(IntegrateReduced, MatchesClosedFormThroughComplexification) {
    const double c0 = 1.0;
    const auto dir = SphereDirection::normalized(0.3, 0.1, 0.8);
    const auto traj = integrate_reduced(typical_example(c0, c00_only()), dir, {0.2, 0.1}, 1.0, std::exp(10.0), 10000);
    const auto [X0, Y0] = typical_xy_from_V(c0, 0.2, 0.1);
    const auto params = XYParams::from_initial(1.0, X0, Y0);
    for (std::size_t i = 0; i < traj.s.size(); i += 500) {
        const auto xy = closed_form_XY(traj.s[i], params);
        const auto [V1, V2] = typical_V_from_xy(c0, xy.X, xy.Y);
        const double scale = std::hypot(0.2, 0.1);
        EXPECT_LE(std::hypot(traj.V[i][0] - V1, traj.V[i][1] - V2), 1e-6 * scale);
    }
}

TEST(IntegrateReduced, BlowUpIsReportedWithLastTime) {
    // dV/ds = -V^2 / 2 for the John-type system with aligned data blows up at s = 2/|V0|.
    const auto dir = SphereDirection::normalized(0, 0, 1);
    try {
        integrate_reduced(simple_system(1.0, -1.0), dir, {-1.0, 1.0}, 1.0, std::exp(40.0), 4000);
        FAIL() << "expected divergence";
    } catch (const DivergenceError& e) {
        EXPECT_GT(e.last_valid_t(), 1.0);
        EXPECT_LT(e.last_valid_t(), std::exp(40.0));
    }
}

TEST(ConservedForm, ZeroAndConstantCases) {
    const auto dir = SphereDirection::normalized(1, 0, 0);
    const auto z = integrate_reduced(typical_example(2.0, c00_only()), dir, {0.0, 0.0}, 1.0, 10.0, 10);
    for (double q : conserved_form(z, WeightMatrix::typical_example(2.0))) EXPECT_EQ(q, 0.0);
    const auto n = integrate_reduced(null_form_system(), dir, {0.4, 0.1}, 1.0, 10.0, 10);
    for (double q : conserved_form(n, WeightMatrix::identity(2))) EXPECT_EQ(q, 0.4 * 0.4 + 0.1 * 0.1);
}

TEST(ConservedFormProperty, QuadraticFirstIntegralAndBound) {
    IndexMatrix c{};
    c[0][0] = 1.0;
    c[1][3] = 0.8;
    c[3][1] = 0.8;
    struct Case {
        CoefficientTensor t;
        WeightMatrix w;
    };
    const std::vector<Case> cases = {{typical_example(2.0, c), WeightMatrix::typical_example(2.0)},
                                     {typical_example_r(), WeightMatrix::typical_example_r()}};
    const auto omegas = fibonacci_sphere(12);
    const auto v0s = quasi_random_unit_vectors(12, 2, 3);
    for (const auto& cs : cases) {
        const double M0 = positivity_bounds(cs.w).M0;
        for (std::size_t i = 0; i < omegas.size(); ++i) {
            const auto dir = SphereDirection::normalized(omegas[i][0], omegas[i][1], omegas[i][2]);
            const std::vector<double> v0{0.8 * v0s[i][0], 0.8 * v0s[i][1]};
            const auto traj = integrate_reduced(cs.t, dir, v0, 1.0, std::exp(10.0), 10000);
            const auto q = conserved_form(traj, cs.w);
            const double n0 = 0.64;
            for (double x : q) EXPECT_LE(std::abs(x - q.front()), 1e-8 * n0);
            for (const auto& v : traj.V) EXPECT_LE(std::hypot(v[0], v[1]), M0 * std::sqrt(n0) * (1 + 1e-12));
        }
    }
}

TEST(General2, TypicalExampleNormalizedVariables) {
    const auto dir = SphereDirection::normalized(0.5, -0.5, 0.7);
    const auto tensor = typical_example(2.0, c00_only());
    const auto d = diagonalize_2x2(tensor, WeightMatrix::typical_example(2.0), dir);
    const std::vector<double> v0{0.3, 0.2};
    const auto g = integrate_general2(d, v0, 10.0, 10000);
    ASSERT_FALSE(g.null_direction);
    const double rho2 = g.points.front().X * g.points.front().X + g.points.front().Y * g.points.front().Y;
    for (const auto& p : g.points) EXPECT_NEAR(p.X * p.X + p.Y * p.Y, rho2, 1e-10);
    // dual route: integrate the original system and map it
    const auto traj = integrate_reduced(tensor, dir, v0, 1.0, std::exp(10.0), 10000);
    for (std::size_t i = 0; i < traj.s.size(); i += 1000) {
        const auto [X, Y] = general2_from_V(d, traj.V[i][0], traj.V[i][1]);
        EXPECT_NEAR(X, g.points[i].X, 1e-9);
        EXPECT_NEAR(Y, g.points[i].Y, 1e-9);
    }
}

TEST(General2Property, ExampleRDualRouteAndPositiveLimit) {
    const auto omegas = fibonacci_sphere(20);
    const auto v0s = quasi_random_unit_vectors(20, 2, 7);
    for (std::size_t i = 0; i < omegas.size(); ++i) {
        const auto dir = SphereDirection::normalized(omegas[i][0], omegas[i][1], omegas[i][2]);
        const auto d = diagonalize_2x2(typical_example_r(), WeightMatrix::typical_example_r(), dir);
        const std::vector<double> v0{v0s[i][0], v0s[i][1]};
        const auto g = integrate_general2(d, v0, 12.0, 12000);
        if (g.null_direction) continue;
        const auto traj = integrate_reduced(typical_example_r(), dir, v0, 1.0, std::exp(12.0), 12000);
        const auto [X, Y] = general2_from_V(d, traj.V.back()[0], traj.V.back()[1]);
        EXPECT_NEAR(X, g.points.back().X, 1e-8);
        EXPECT_NEAR(Y, g.points.back().Y, 1e-8);
        const auto& p0 = g.points.front();
        const auto exact = closed_form_XY(12.0, XYParams::from_initial(-1.0, p0.X, p0.Y));
        EXPECT_NEAR(g.points.back().Y, exact.Y, 1e-8);
        if (std::abs(p0.X) > 0.05) {
            // the Yt limit is +rho for c = -1
            const auto late = closed_form_XY(400.0, XYParams::from_initial(-1.0, p0.X, p0.Y));
            EXPECT_NEAR(late.Y, std::hypot(p0.X, p0.Y), 1e-10);
        }
    }
}

TEST(General2, NullDirectionIsReported) {
    const auto d = diagonalize_2x2(null_form_system(), WeightMatrix::identity(2), SphereDirection({0, 1, 0}));
    const auto g = integrate_general2(d, {0.1, 0.2}, 1.0, 4);
    EXPECT_TRUE(g.null_direction);
    EXPECT_EQ(g.note, "null direction, constant profile");
}
