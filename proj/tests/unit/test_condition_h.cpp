#include <gtest/gtest.h>

#include <cmath>

#include "nullwave/condition_h.hpp"
#include "nullwave/errors.hpp"
#include "nullwave/sampling.hpp"

using namespace nullwave;

namespace {

IndexMatrix mixed_c() {
    IndexMatrix c{};
    c[0][0] = 1.0;
    c[1][1] = 0.4;
    c[0][2] = 0.3;
    c[2][0] = 0.3;
    return c;
}

double max_reduced_norm(const CoefficientTensor& t) {
    double m = 0.0;
    const auto ys = quasi_random_unit_vectors(400, 2);
    for (const auto& w : fibonacci_sphere(400)) {
        const auto dir = SphereDirection::normalized(w[0], w[1], w[2]);
        for (const auto& y : ys) {
            const auto F = eval_Fred(t, dir, y);
            m = std::max(m, std::hypot(F[0], F[1]));
        }
    }
    return m;
}

}  // namespace

TEST(ConditionH, TypicalExampleWithDiagonalWeight) {
    for (double c0 : {0.5, 1.0, 3.0}) {
        const auto r = verify_condition_H(typical_example(c0, mixed_c()), WeightMatrix::typical_example(c0));
        EXPECT_TRUE(r.holds) << c0;
        EXPECT_NEAR(r.bounds.M0, std::max(c0, 1.0 / c0), 1e-12);
    }
}

TEST(ConditionH, TypicalExampleRWithItsWeight) {
    const auto r = verify_condition_H(typical_example_r(), WeightMatrix::typical_example_r());
    EXPECT_TRUE(r.holds);
    EXPECT_TRUE(r.positive_definite);
}

TEST(ConditionH, NullFormSystemWithIdentity) {
    EXPECT_TRUE(verify_condition_H(null_form_system(), WeightMatrix::identity(2)).holds);
    EXPECT_TRUE(verify_condition_H(third_example_a(), WeightMatrix::identity(3)).holds);
}

TEST(ConditionH, WrongWeightFailsWithWitness) {
    const auto r = verify_condition_H(typical_example(2.0, c00_only()), WeightMatrix::identity(2));
    EXPECT_FALSE(r.holds);
    EXPECT_GT(r.max_violation, 0.1);
    EXPECT_EQ(r.witness_Y.size(), 2u);
}

TEST(ConditionH, IndefiniteWeightFails) {
    const auto r = verify_condition_H(simple_system(1.0, -1.0), WeightMatrix::diagonal({1.0, -1.0}));
    EXPECT_FALSE(r.holds);
    EXPECT_FALSE(r.positive_definite);
}

TEST(ConditionH, NonSymmetricWeightIsInputError) {
    const WeightMatrix bad(2, [](const SphereDirection&) {
        Eigen::MatrixXd A(2, 2);
        A << 1.0, 0.5, 0.0, 1.0;
        return A;
    }, WeightProvenance::AnalyticClosedForm, "bad");
    EXPECT_THROW(verify_condition_H(typical_example_r(), bad), InputError);
}

TEST(ConditionH, SampleCountsAreChecked) {
    EXPECT_THROW(verify_condition_H(typical_example_r(), WeightMatrix::typical_example_r(), 999, 1000), UsageError);
}

TEST(ConditionHProperty, RescalingFreedom) {
    auto h = [](const SphereDirection& d) { return 2.0 + d[0]; };
    EXPECT_TRUE(verify_condition_H(typical_example_r(), WeightMatrix::typical_example_r().rescaled(h)).holds);
    EXPECT_TRUE(verify_condition_H(typical_example(1.5, mixed_c()), WeightMatrix::typical_example(1.5).rescaled(h)).holds);
}

TEST(PositivityBounds, ClosedFormCases) {
    EXPECT_DOUBLE_EQ(positivity_bounds(WeightMatrix::identity(2)).M0, 1.0);
    EXPECT_DOUBLE_EQ(positivity_bounds(WeightMatrix::diagonal({1.0, 4.0})).M0, 4.0);
    // eigenvalues {1, 2 - w1^2}: the supremum 2 is attained where w1 = 0
    const auto b = positivity_bounds(WeightMatrix::typical_example_r(), 4000);
    EXPECT_NEAR(b.M0, 2.0, 1e-6);
    EXPECT_NEAR(b.lambda_min, 1.0, 1e-12);
    EXPECT_THROW(positivity_bounds(WeightMatrix::diagonal({1.0, 0.0})), InputError);
}

TEST(PositivityBounds, ExampleRWeightEigenvaluesOnW1Sweep) {
    for (int i = 0; i <= 200; ++i) {
        const double w1 = -1.0 + 2.0 * i / 200.0;
        const double rest = std::sqrt(std::max(0.0, 1.0 - w1 * w1));
        const SphereDirection dir({w1, rest, 0.0});
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(WeightMatrix::typical_example_r()(dir));
        EXPECT_NEAR(es.eigenvalues()(0), std::min(1.0, 2.0 - w1 * w1), 1e-12);
        EXPECT_NEAR(es.eigenvalues()(1), std::max(1.0, 2.0 - w1 * w1), 1e-12);
    }
}

TEST(Diagonalize, TypicalExampleUnitCase) {
    const auto d = diagonalize_2x2(typical_example(1.0, c00_only()), WeightMatrix::identity(2),
                                   SphereDirection::normalized(0.2, 0.5, -0.7));
    EXPECT_TRUE(d.eigen_tie);
    EXPECT_TRUE(d.P.isApprox(Eigen::Matrix2d::Identity()));
    EXPECT_NEAR(d.ctilde1, 1.0, 1e-12);
    EXPECT_NEAR(d.ctilde2, 0.0, 1e-12);
    EXPECT_NEAR(d.c1, 1.0, 1e-12);
    EXPECT_NEAR(d.c2, 0.0, 1e-12);
}

TEST(Diagonalize, NullFormSystemHasZeroCoefficients) {
    for (const auto& w : fibonacci_sphere(50)) {
        const auto d = diagonalize_2x2(null_form_system(), WeightMatrix::identity(2),
                                       SphereDirection::normalized(w[0], w[1], w[2]));
        EXPECT_TRUE(d.degenerate());
    }
}

TEST(Diagonalize, ExampleRAtFirstAxis) {
    const auto d = diagonalize_2x2(typical_example_r(), WeightMatrix::typical_example_r(), SphereDirection({1, 0, 0}));
    EXPECT_LE(d.residual, 1e-9);
    // at w1 = 1 the weight is the identity
    EXPECT_TRUE(d.eigen_tie);
}

TEST(Diagonalize, RejectsWrongWeight) {
    EXPECT_THROW(diagonalize_2x2(typical_example(2.0, c00_only()), WeightMatrix::identity(2), SphereDirection({0, 0, 1})),
                 InputError);
    EXPECT_THROW(diagonalize_2x2(third_example_a(), WeightMatrix::identity(3), SphereDirection({0, 0, 1})), UsageError);
}

TEST(DiagonalizeProperty, ReconstructionTemplateAndBoundedness) {
    struct Case {
        CoefficientTensor t;
        WeightMatrix w;
    };
    const std::vector<Case> cases = {
        {typical_example_r(), WeightMatrix::typical_example_r()},
        {typical_example(2.5, mixed_c()), WeightMatrix::typical_example(2.5)},
        {typical_example(0.4, mixed_c()), WeightMatrix::typical_example(0.4)},
        {typical_example_r(), WeightMatrix::typical_example_r().rescaled([](const SphereDirection& d) { return 2.0 + d[0]; })},
    };
    const auto omegas = fibonacci_sphere(200);
    const auto yts = quasi_random_unit_vectors(200, 2, 17);
    for (const auto& cs : cases) {
        const double bound = max_reduced_norm(cs.t);
        for (std::size_t i = 0; i < omegas.size(); ++i) {
            const auto dir = SphereDirection::normalized(omegas[i][0], omegas[i][1], omegas[i][2]);
            const auto d = diagonalize_2x2(cs.t, cs.w, dir);
            EXPECT_LE((d.P.transpose() * d.P - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff(), 1e-10);
            const Eigen::Matrix2d An = cs.w(dir) / d.lambda_min;
            const Eigen::Matrix2d rec = d.P.transpose() * Eigen::Vector2d(1.0, d.c0).asDiagonal() * d.P;
            EXPECT_LE((rec - An).cwiseAbs().maxCoeff(), 1e-10);

            const Eigen::Vector2d yt = 1.5 * Eigen::Vector2d(yts[i][0], yts[i][1]);
            const Eigen::Vector2d y = d.P.transpose() * yt;
            const std::vector<double> yv{y(0), y(1)};
            const auto F = eval_Fred(cs.t, dir, yv);
            const Eigen::Vector2d G = d.P * Eigen::Vector2d(F[0], F[1]);
            const double lin = d.ctilde1 * yt(0) + d.ctilde2 * yt(1);
            const Eigen::Vector2d tmpl(-d.c0 * yt(1) * lin, yt(0) * lin);
            EXPECT_LE((G - tmpl).norm(), 1e-9 * (1.0 + yt.squaredNorm()));

            EXPECT_LE(std::abs(d.ctilde1), bound + 1e-9);
            EXPECT_LE(std::abs(d.ctilde2), bound + 1e-9);
        }
    }
}

TEST(DiagonalizeProperty, ScatteringCoefficientsAreOrthogonalImage) {
    const auto omegas = fibonacci_sphere(100);
    for (const auto& w : omegas) {
        const auto dir = SphereDirection::normalized(w[0], w[1], w[2]);
        const auto d = diagonalize_2x2(typical_example_r(), WeightMatrix::typical_example_r(), dir);
        EXPECT_NEAR(std::hypot(d.c1, d.c2), std::hypot(d.ctilde1, d.ctilde2), 1e-12);
    }
}

TEST(Classify, TruthTable) {
    auto cls = [](const ExampleSystem& e) { return classify(e.tensor(), known_weight(e)).classification; };
    ExampleSystem typical;
    typical.tag = ExampleTag::TypicalExample;
    typical.c0 = 2.0;
    typical.c_ab = mixed_c();
    EXPECT_EQ(cls(typical), Classification::ConditionHOnly);
    EXPECT_EQ(cls({ExampleTag::TypicalExampleR}), Classification::ConditionHOnly);
    EXPECT_EQ(cls({ExampleTag::NullForms}), Classification::NullCondition);
    EXPECT_EQ(cls({ExampleTag::FirstExampleA}), Classification::NeitherKnown);
    EXPECT_EQ(cls({ExampleTag::SecondExampleA}), Classification::NeitherKnown);
    ExampleSystem john;
    john.tag = ExampleTag::Simple;
    john.c1 = 1.0;
    john.c2 = -1.0;
    EXPECT_EQ(cls(john), Classification::NeitherKnown);
    // without a weight nothing beyond the null condition is claimed
    EXPECT_EQ(classify(typical.tensor(), std::nullopt).classification, Classification::NeitherKnown);
    EXPECT_EQ(to_string(Classification::ConditionHOnly), "condition_H_only");
}

TEST(WeightTable, NearestNodeLookup) {
    std::vector<std::array<double, 3>> nodes{{0, 0, 1}, {0, 0, -1}};
    std::vector<Eigen::MatrixXd> mats{Eigen::MatrixXd::Identity(2, 2), 2.0 * Eigen::MatrixXd::Identity(2, 2)};
    const auto w = WeightMatrix::table(nodes, mats);
    EXPECT_EQ(w.provenance(), WeightProvenance::UserSuppliedTable);
    EXPECT_DOUBLE_EQ(w(SphereDirection::normalized(0.1, 0, 1))(0, 0), 1.0);
    EXPECT_DOUBLE_EQ(w(SphereDirection::normalized(0.1, 0, -1))(1, 1), 2.0);
}
