#pragma once

// Condition (H): a positive-definite symmetric weight A(omega) with
// Y^T A(omega) F^red(omega, Y) = 0, its positivity bound M0, and the
// two-component diagonalization used by the scattering relation.

#include <Eigen/Dense>

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nullwave/nonlinearity.hpp"

namespace nullwave {

enum class WeightProvenance { AnalyticClosedForm, UserSuppliedTable };

class WeightMatrix {
public:
    using Evaluator = std::function<Eigen::MatrixXd(const SphereDirection&)>;

    WeightMatrix(int n_components, Evaluator evaluator, WeightProvenance provenance, std::string label);

    static WeightMatrix identity(int n_components);
    static WeightMatrix diagonal(const std::vector<double>& diag);
    /// diag(1, c0)
    static WeightMatrix typical_example(double c0);
    /// 1/2 [[3 - w1^2, 1 - w1^2], [1 - w1^2, 3 - w1^2]]
    static WeightMatrix typical_example_r();
    /// Piecewise-constant weight: each direction takes the matrix of the nearest node.
    static WeightMatrix table(std::vector<std::array<double, 3>> nodes, std::vector<Eigen::MatrixXd> matrices);

    /// h(omega) A(omega); h must be positive.
    WeightMatrix rescaled(std::function<double(const SphereDirection&)> h) const;

    /// Throws InputError if the result is not symmetric to 1e-12 (relative).
    Eigen::MatrixXd operator()(const SphereDirection& dir) const;

    int n_components() const noexcept { return n_; }
    WeightProvenance provenance() const noexcept { return provenance_; }
    const std::string& label() const noexcept { return label_; }

private:
    int n_;
    Evaluator evaluator_;
    WeightProvenance provenance_;
    std::string label_;
};

struct PositivityBounds {
    double M0 = 1.0;
    double lambda_min = 1.0;  // smallest eigenvalue seen
    double lambda_max = 1.0;  // largest eigenvalue seen
    std::array<double, 3> argmax_omega{0.0, 0.0, 1.0};
};

/// M0 = max over sampled omega of max(lambda_max, 1/lambda_min).
/// Throws InputError naming the witness direction if A(omega) is not positive definite.
PositivityBounds positivity_bounds(const WeightMatrix& weight, std::size_t omega_samples = 1000);

struct ConditionHReport {
    bool holds = false;
    bool positive_definite = true;
    PositivityBounds bounds;
    double max_violation = 0.0;  // max |Y^T A F^red| / |Y|^3 (unscaled)
    std::array<double, 3> witness_omega{0.0, 0.0, 1.0};
    std::vector<double> witness_Y;
};

/// Samples omega on a Fibonacci lattice and Y on the unit sphere of R^N.
/// The tolerance is relative to max(1, max|c|) * max(1, lambda_max).
ConditionHReport verify_condition_H(const CoefficientTensor& tensor, const WeightMatrix& weight,
                                    std::size_t omega_samples = 1000, std::size_t y_samples = 1000,
                                    double tol = 1e-9);

/// Two-component normal form at one direction:
///   A / lambda_min = P^T diag(1, c0) P,
///   P F^red(omega, P^T Yt) = (ct1 Yt1 + ct2 Yt2) (-c0 Yt2, Yt1)^T,
///   (c2, -c1)^T = P^T (ct2, -ct1)^T.
struct Diagonalization2 {
    std::array<double, 3> omega{0.0, 0.0, 1.0};
    Eigen::Matrix2d P = Eigen::Matrix2d::Identity();
    double lambda_min = 1.0;  // normalization h = 1 / lambda_min
    double c0 = 1.0;
    double ctilde1 = 0.0;
    double ctilde2 = 0.0;
    double c1 = 0.0;
    double c2 = 0.0;
    double residual = 0.0;    // max template mismatch / (1 + |Yt|^2) on the check set
    bool eigen_tie = false;   // equal eigenvalues, P fixed to I

    bool degenerate(double tol = 1e-12) const { return ctilde1 * ctilde1 + ctilde2 * ctilde2 <= tol * tol; }
};

/// Throws UsageError for N != 2 and InputError when the template does not fit
/// (the pair does not satisfy (H) at this direction).
Diagonalization2 diagonalize_2x2(const CoefficientTensor& tensor, const WeightMatrix& weight,
                                 const SphereDirection& dir, double tol = 1e-9);

enum class Classification { NullCondition, ConditionHOnly, NeitherKnown };

std::string to_string(Classification c);

struct ClassificationReport {
    Classification classification = Classification::NeitherKnown;
    NullConditionReport null_report;
    std::optional<ConditionHReport> h_report;
    std::string weight_label;  // empty when no weight was available
};

/// The weight known in closed form for a built-in system, if any.
std::optional<WeightMatrix> known_weight(const ExampleSystem& example);

/// null_condition if F^red == 0; condition_H_only if the given weight verifies;
/// neither_known otherwise. No weight search is attempted.
ClassificationReport classify(const CoefficientTensor& tensor, const std::optional<WeightMatrix>& weight,
                              std::size_t omega_samples = 1000, std::size_t y_samples = 1000);

}  // namespace nullwave
