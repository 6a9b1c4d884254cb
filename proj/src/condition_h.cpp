#include "nullwave/condition_h.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "nullwave/errors.hpp"
#include "nullwave/sampling.hpp"

namespace nullwave {

namespace {

// F^red_j(omega, Y) = Y^T B_j Y with B_j precomputed per direction.
std::vector<Eigen::MatrixXd> reduced_bilinear(const CoefficientTensor& tensor, const SphereDirection& dir) {
    const int n = tensor.n_components();
    std::vector<Eigen::MatrixXd> B(static_cast<std::size_t>(n), Eigen::MatrixXd::Zero(n, n));
    const auto w = dir.extended();
    for (const auto& [idx, c] : tensor.entries()) {
        B[static_cast<std::size_t>(idx.j)](idx.k, idx.l) +=
            c * w[static_cast<std::size_t>(idx.a)] * w[static_cast<std::size_t>(idx.b)];
    }
    return B;
}

std::string format_omega(const std::array<double, 3>& w) {
    std::ostringstream os;
    os.precision(6);
    os << "(" << w[0] << ", " << w[1] << ", " << w[2] << ")";
    return os.str();
}

}  // namespace

WeightMatrix::WeightMatrix(int n_components, Evaluator evaluator, WeightProvenance provenance, std::string label)
    : n_(n_components), evaluator_(std::move(evaluator)), provenance_(provenance), label_(std::move(label)) {
    if (n_components < 1) throw UsageError("WeightMatrix: n_components must be >= 1");
    if (!evaluator_) throw UsageError("WeightMatrix: empty evaluator");
}

WeightMatrix WeightMatrix::identity(int n_components) {
    return {n_components, [n_components](const SphereDirection&) { return Eigen::MatrixXd::Identity(n_components, n_components); },
            WeightProvenance::AnalyticClosedForm, "identity"};
}

WeightMatrix WeightMatrix::diagonal(const std::vector<double>& diag) {
    if (diag.empty()) throw UsageError("WeightMatrix::diagonal: empty diagonal");
    Eigen::VectorXd d(static_cast<Eigen::Index>(diag.size()));
    for (std::size_t i = 0; i < diag.size(); ++i) d(static_cast<Eigen::Index>(i)) = diag[i];
    std::ostringstream label;
    label << "diag(";
    for (std::size_t i = 0; i < diag.size(); ++i) label << (i ? "," : "") << diag[i];
    label << ")";
    return {static_cast<int>(diag.size()), [d](const SphereDirection&) { return Eigen::MatrixXd(d.asDiagonal()); },
            WeightProvenance::AnalyticClosedForm, label.str()};
}

WeightMatrix WeightMatrix::typical_example(double c0) {
    if (!(c0 > 0.0)) throw UsageError("WeightMatrix::typical_example: c0 must be positive");
    return diagonal({1.0, c0});
}

WeightMatrix WeightMatrix::typical_example_r() {
    return {2,
            [](const SphereDirection& dir) {
                const double w1 = dir[0] * dir[0];
                Eigen::MatrixXd A(2, 2);
                A << 0.5 * (3.0 - w1), 0.5 * (1.0 - w1), 0.5 * (1.0 - w1), 0.5 * (3.0 - w1);
                return A;
            },
            WeightProvenance::AnalyticClosedForm, "example_2_3"};
}

WeightMatrix WeightMatrix::table(std::vector<std::array<double, 3>> nodes, std::vector<Eigen::MatrixXd> matrices) {
    if (nodes.empty() || nodes.size() != matrices.size()) {
        throw UsageError("WeightMatrix::table: need one matrix per node");
    }
    const auto n = matrices.front().rows();
    for (const auto& m : matrices) {
        if (m.rows() != n || m.cols() != n) throw InputError("WeightMatrix::table: matrices must be square and equal-sized");
    }
    for (auto& w : nodes) {
        const double norm = std::sqrt(w[0] * w[0] + w[1] * w[1] + w[2] * w[2]);
        if (!(norm > 0.0)) throw InputError("WeightMatrix::table: zero direction");
        for (double& x : w) x /= norm;
    }
    return {static_cast<int>(n),
            [nodes = std::move(nodes), matrices = std::move(matrices)](const SphereDirection& dir) {
                std::size_t best = 0;
                double best_dot = -2.0;
                for (std::size_t i = 0; i < nodes.size(); ++i) {
                    const double d = nodes[i][0] * dir[0] + nodes[i][1] * dir[1] + nodes[i][2] * dir[2];
                    if (d > best_dot) {
                        best_dot = d;
                        best = i;
                    }
                }
                return matrices[best];
            },
            WeightProvenance::UserSuppliedTable, "table"};
}

WeightMatrix WeightMatrix::rescaled(std::function<double(const SphereDirection&)> h) const {
    auto inner = evaluator_;
    return {n_,
            [inner, h](const SphereDirection& dir) {
                const double s = h(dir);
                if (!(s > 0.0)) throw InputError("WeightMatrix: rescaling factor must be positive");
                return Eigen::MatrixXd(s * inner(dir));
            },
            provenance_, label_ + " (rescaled)"};
}

Eigen::MatrixXd WeightMatrix::operator()(const SphereDirection& dir) const {
    Eigen::MatrixXd A = evaluator_(dir);
    if (A.rows() != n_ || A.cols() != n_) throw InputError("WeightMatrix: evaluator returned wrong shape");
    const double scale = std::max(1.0, A.cwiseAbs().maxCoeff());
    if ((A - A.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
        throw InputError("WeightMatrix: A(omega) is not symmetric at " + format_omega(dir.omega()));
    }
    return A;
}

PositivityBounds positivity_bounds(const WeightMatrix& weight, std::size_t omega_samples) {
    PositivityBounds b;
    b.lambda_min = std::numeric_limits<double>::infinity();
    b.lambda_max = 0.0;
    b.M0 = 0.0;
    for (const auto& w : fibonacci_sphere(omega_samples)) {
        const SphereDirection dir = SphereDirection::normalized(w[0], w[1], w[2]);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(weight(dir), Eigen::EigenvaluesOnly);
        const double lo = es.eigenvalues().minCoeff();
        const double hi = es.eigenvalues().maxCoeff();
        if (!(lo > 0.0)) {
            throw InputError("WeightMatrix: not positive definite at omega = " + format_omega(dir.omega()));
        }
        b.lambda_min = std::min(b.lambda_min, lo);
        b.lambda_max = std::max(b.lambda_max, hi);
        const double m = std::max(hi, 1.0 / lo);
        if (m > b.M0) {
            b.M0 = m;
            b.argmax_omega = dir.omega();
        }
    }
    return b;
}

ConditionHReport verify_condition_H(const CoefficientTensor& tensor, const WeightMatrix& weight,
                                    std::size_t omega_samples, std::size_t y_samples, double tol) {
    if (omega_samples < 1000 || y_samples < 1000) {
        throw UsageError("verify_condition_H: need at least 1000 samples of omega and of Y");
    }
    if (tensor.n_components() != weight.n_components()) throw UsageError("verify_condition_H: dimension mismatch");
    const int n = tensor.n_components();

    ConditionHReport report;
    try {
        report.bounds = positivity_bounds(weight, omega_samples);
    } catch (const InputError&) {
        // Locate the witness again so the caller gets a direction, not just a message.
        report.positive_definite = false;
        for (const auto& w : fibonacci_sphere(omega_samples)) {
            const SphereDirection dir = SphereDirection::normalized(w[0], w[1], w[2]);
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(weight(dir), Eigen::EigenvaluesOnly);
            if (!(es.eigenvalues().minCoeff() > 0.0)) {
                report.witness_omega = dir.omega();
                break;
            }
        }
        return report;
    }

    const auto ys = quasi_random_unit_vectors(y_samples, static_cast<std::size_t>(n));
    std::vector<Eigen::VectorXd> yv;
    yv.reserve(ys.size());
    for (const auto& y : ys) yv.emplace_back(Eigen::Map<const Eigen::VectorXd>(y.data(), n));
    report.witness_Y = ys.front();

    Eigen::VectorXd F(n);
    for (const auto& w : fibonacci_sphere(omega_samples)) {
        const SphereDirection dir = SphereDirection::normalized(w[0], w[1], w[2]);
        const Eigen::MatrixXd A = weight(dir);
        const auto B = reduced_bilinear(tensor, dir);
        for (std::size_t i = 0; i < yv.size(); ++i) {
            const Eigen::VectorXd& Y = yv[i];
            for (int j = 0; j < n; ++j) F(j) = Y.dot(B[static_cast<std::size_t>(j)] * Y);
            const double v = std::abs(Y.dot(A * F));
            if (v > report.max_violation) {
                report.max_violation = v;
                report.witness_omega = dir.omega();
                report.witness_Y = ys[i];
            }
        }
    }
    const double scale = std::max(1.0, tensor.max_abs_coefficient()) * std::max(1.0, report.bounds.lambda_max);
    report.holds = report.max_violation <= tol * scale;
    return report;
}

Diagonalization2 diagonalize_2x2(const CoefficientTensor& tensor, const WeightMatrix& weight,
                                 const SphereDirection& dir, double tol) {
    if (tensor.n_components() != 2 || weight.n_components() != 2) {
        throw UsageError("diagonalize_2x2: requires a two-component system");
    }
    Diagonalization2 d;
    d.omega = dir.omega();

    const Eigen::Matrix2d A = weight(dir);
    const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(A);
    const double l1 = es.eigenvalues()(0);  // ascending
    const double l2 = es.eigenvalues()(1);
    if (!(l1 > 0.0)) throw InputError("diagonalize_2x2: weight not positive definite at " + format_omega(d.omega));
    d.lambda_min = l1;
    d.c0 = l2 / l1;

    if (l2 - l1 <= 1e-12 * l2) {
        d.eigen_tie = true;
        d.P.setIdentity();
        d.c0 = 1.0;
    } else {
        Eigen::Vector2d v = es.eigenvectors().col(0);
        if (std::abs(v(1)) > std::abs(v(0)) ? v(1) < 0.0 : v(0) < 0.0) v = -v;
        d.P.row(0) = v.transpose();
        d.P.row(1) << -v(1), v(0);
    }

    // G(Yt) = P F^red(omega, P^T Yt) is linear in (ct1, ct2) for each fixed Yt.
    auto G = [&](const Eigen::Vector2d& yt) {
        const Eigen::Vector2d y = d.P.transpose() * yt;
        const std::array<double, 2> ya{y(0), y(1)};
        const auto f = eval_Fred(tensor, dir, ya);
        return Eigen::Vector2d(d.P * Eigen::Vector2d(f[0], f[1]));
    };
    auto template_basis = [&](const Eigen::Vector2d& yt) {
        // columns: coefficient of ct1 and of ct2
        Eigen::Matrix2d m;
        m << -d.c0 * yt(0) * yt(1), -d.c0 * yt(1) * yt(1),
              yt(0) * yt(0),          yt(1) * yt(0);
        return m;
    };

    const std::array<Eigen::Vector2d, 4> fit_points = {Eigen::Vector2d(1, 0), Eigen::Vector2d(0, 1),
                                                       Eigen::Vector2d(1, 1), Eigen::Vector2d(1, -1)};
    Eigen::Matrix<double, 8, 2> M;
    Eigen::Matrix<double, 8, 1> rhs;
    for (std::size_t i = 0; i < fit_points.size(); ++i) {
        M.block<2, 2>(static_cast<Eigen::Index>(2 * i), 0) = template_basis(fit_points[i]);
        rhs.segment<2>(static_cast<Eigen::Index>(2 * i)) = G(fit_points[i]);
    }
    const Eigen::Vector2d ct = M.colPivHouseholderQr().solve(rhs);
    d.ctilde1 = ct(0);
    d.ctilde2 = ct(1);

    const Eigen::Vector2d c = d.P.transpose() * Eigen::Vector2d(d.ctilde2, -d.ctilde1);
    d.c2 = c(0);
    d.c1 = -c(1);

    const double scale = std::max(1.0, tensor.max_abs_coefficient());
    for (const auto& y : quasi_random_unit_vectors(100, 2)) {
        const Eigen::Vector2d yt(2.0 * y[0], 2.0 * y[1]);  // |Yt| = 2 so quadratic terms dominate
        const double r = (G(yt) - template_basis(yt) * ct).norm() / (1.0 + yt.squaredNorm());
        d.residual = std::max(d.residual, r);
    }
    if (!(d.residual <= tol * scale)) {
        throw InputError("system does not satisfy (H) at omega = " + format_omega(d.omega));
    }
    return d;
}

std::string to_string(Classification c) {
    switch (c) {
        case Classification::NullCondition: return "null_condition";
        case Classification::ConditionHOnly: return "condition_H_only";
        case Classification::NeitherKnown: return "neither_known";
    }
    return "unknown";
}

std::optional<WeightMatrix> known_weight(const ExampleSystem& example) {
    switch (example.tag) {
        case ExampleTag::TypicalExample: return WeightMatrix::typical_example(example.c0);
        case ExampleTag::TypicalExampleR: return WeightMatrix::typical_example_r();
        case ExampleTag::ThirdExampleA: return WeightMatrix::identity(3);
        case ExampleTag::NullForms: return WeightMatrix::identity(2);
        case ExampleTag::Simple:
            // -c1 Y1^2 Y2 + a c2 Y2 Y1^2 = 0 for a = c1 / c2, positive only when c1 c2 > 0.
            if (example.c1 * example.c2 > 0.0) return WeightMatrix::diagonal({1.0, example.c1 / example.c2});
            return std::nullopt;
        case ExampleTag::FirstExampleA:
        case ExampleTag::SecondExampleA: return std::nullopt;
    }
    return std::nullopt;
}

ClassificationReport classify(const CoefficientTensor& tensor, const std::optional<WeightMatrix>& weight,
                              std::size_t omega_samples, std::size_t y_samples) {
    ClassificationReport r;
    r.null_report = check_null_condition(tensor, std::max<std::size_t>(omega_samples * 10, 10000));
    if (r.null_report.holds) {
        r.classification = Classification::NullCondition;
        return r;
    }
    if (weight) {
        r.weight_label = weight->label();
        r.h_report = verify_condition_H(tensor, *weight, omega_samples, y_samples);
        if (r.h_report->holds) {
            r.classification = Classification::ConditionHOnly;
            return r;
        }
    }
    r.classification = Classification::NeitherKnown;
    return r;
}

}  // namespace nullwave
