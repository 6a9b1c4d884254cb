#include "nullwave/reduced_ode.hpp"

#include <cmath>

#include "nullwave/errors.hpp"
#include "nullwave/rk4.hpp"

namespace nullwave {

namespace {

bool all_finite(const std::vector<double>& v) {
    for (double x : v) {
        if (!std::isfinite(x)) return false;
    }
    return true;
}

}  // namespace

ReducedTrajectory integrate_reduced(const CoefficientTensor& tensor, const SphereDirection& dir,
                                    const std::vector<double>& V0, double t0, double t_end, std::size_t steps,
                                    double sigma) {
    if (!(t0 >= 1.0)) throw UsageError("integrate_reduced: t0 must be >= 1");
    if (!(t_end > t0)) throw UsageError("integrate_reduced: t_end must exceed t0");
    if (steps == 0) throw UsageError("integrate_reduced: steps must be positive");
    if (static_cast<int>(V0.size()) != tensor.n_components()) throw UsageError("integrate_reduced: dimension mismatch");

    const double s0 = std::log(t0);
    const double h = (std::log(t_end) - s0) / static_cast<double>(steps);
    auto rhs = [&](double, const std::vector<double>& v) {
        auto F = eval_Fred(tensor, dir, v);
        for (double& f : F) f *= -0.5;
        return F;
    };

    ReducedTrajectory traj;
    traj.omega = dir.omega();
    traj.sigma = sigma;
    traj.s.reserve(steps + 1);
    traj.t.reserve(steps + 1);
    traj.V.reserve(steps + 1);
    traj.s.push_back(s0);
    traj.t.push_back(t0);
    traj.V.push_back(V0);
    std::vector<double> v = V0;
    for (std::size_t i = 0; i < steps; ++i) {
        const double s = s0 + h * static_cast<double>(i);
        v = rk4_step(rhs, s, v, h);
        const double s_next = (i + 1 == steps) ? std::log(t_end) : s0 + h * static_cast<double>(i + 1);
        if (!all_finite(v)) throw DivergenceError("integrate_reduced: non-finite state", traj.t.back());
        traj.s.push_back(s_next);
        traj.t.push_back(i + 1 == steps ? t_end : std::exp(s_next));
        traj.V.push_back(v);
    }
    return traj;
}

std::vector<double> conserved_form(const ReducedTrajectory& traj, const WeightMatrix& weight) {
    const SphereDirection dir(traj.omega);
    const Eigen::MatrixXd A = weight(dir);
    std::vector<double> out;
    out.reserve(traj.V.size());
    for (const auto& v : traj.V) {
        if (static_cast<Eigen::Index>(v.size()) != A.rows()) throw UsageError("conserved_form: dimension mismatch");
        const Eigen::Map<const Eigen::VectorXd> x(v.data(), static_cast<Eigen::Index>(v.size()));
        out.push_back(x.dot(A * x));
    }
    return out;
}

XYParams XYParams::from_initial(double c, double X0, double Y0) {
    return {c, std::hypot(X0, Y0), Y0, X0};
}

XYPoint closed_form_XY(double s, const XYParams& p) {
    if (!(p.rho >= 0.0) || std::abs(p.eta) > p.rho * (1.0 + 1e-12)) {
        throw UsageError("closed_form_XY: need rho >= 0 and |eta| <= rho");
    }
    if (p.rho == 0.0) return {s, 0.0, 0.0};
    if (p.xi == 0.0) return {s, 0.0, p.eta};

    // a = rho + eta, b = rho - eta with ab = xi^2; the smaller one is formed
    // from xi^2 to avoid cancellation.
    double a;
    double b;
    if (p.eta >= 0.0) {
        a = p.rho + p.eta;
        b = p.xi * p.xi / a;
    } else {
        b = p.rho - p.eta;
        a = p.xi * p.xi / b;
    }
    const double k = p.c * p.rho * s;
    if (k >= 0.0) {
        // divide numerator and denominator by e^k
        const double e2 = std::exp(-2.0 * k);
        const double den = a * e2 + b;
        return {s, 2.0 * p.rho * p.xi * std::exp(-k) / den, p.rho * (a * e2 - b) / den};
    }
    const double e2 = std::exp(2.0 * k);
    const double den = a + b * e2;
    return {s, 2.0 * p.rho * p.xi * std::exp(k) / den, p.rho * (a - b * e2) / den};
}

std::vector<XYPoint> integrate_XY(const XYParams& params, double s_end, std::size_t steps) {
    if (steps == 0) throw UsageError("integrate_XY: steps must be positive");
    const double h = s_end / static_cast<double>(steps);
    const double c = params.c;
    auto rhs = [c](double, const std::array<double, 2>& y) {
        return std::array<double, 2>{c * y[0] * y[1], -c * y[0] * y[0]};
    };
    std::vector<XYPoint> out;
    out.reserve(steps + 1);
    std::array<double, 2> y{params.xi, params.eta};
    out.push_back({0.0, y[0], y[1]});
    for (std::size_t i = 0; i < steps; ++i) {
        y = rk4_step(rhs, h * static_cast<double>(i), y, h);
        if (!std::isfinite(y[0]) || !std::isfinite(y[1])) {
            throw DivergenceError("integrate_XY: non-finite state", out.back().s);
        }
        out.push_back({h * static_cast<double>(i + 1), y[0], y[1]});
    }
    return out;
}

std::pair<double, double> typical_xy_from_V(double c0, double V1, double V2) {
    return {0.5 * std::sqrt(c0) * V1, 0.5 * c0 * V2};
}

std::pair<double, double> typical_V_from_xy(double c0, double X, double Y) {
    return {2.0 * X / std::sqrt(c0), 2.0 * Y / c0};
}

std::pair<double, double> general2_from_V(const Diagonalization2& d, double V1, double V2) {
    const Eigen::Vector2d vt = d.P * Eigen::Vector2d(V1, V2);
    const double sq = std::sqrt(d.c0);
    const double re = sq * vt(0);
    const double im = d.c0 * vt(1);
    const double X = (sq * d.ctilde1 * re + d.ctilde2 * im) / (2.0 * sq);
    const double Y = (d.ctilde2 * re - sq * d.ctilde1 * im) / (2.0 * sq);
    return {X, Y};
}

General2Trajectory integrate_general2(const Diagonalization2& diag, const std::vector<double>& V0, double s_end,
                                      std::size_t steps) {
    if (V0.size() != 2) throw UsageError("integrate_general2: V0 must have two components");
    General2Trajectory out;
    if (diag.degenerate()) {
        out.null_direction = true;
        out.note = "null direction, constant profile";
        const double h = s_end / static_cast<double>(std::max<std::size_t>(steps, 1));
        for (std::size_t i = 0; i <= steps; ++i) out.points.push_back({h * static_cast<double>(i), 0.0, 0.0});
        return out;
    }
    const auto [X0, Y0] = general2_from_V(diag, V0[0], V0[1]);
    // Xt' = -Xt Yt, Yt' = Xt^2 is the X/Y system with c = -1.
    out.points = integrate_XY(XYParams::from_initial(-1.0, X0, Y0), s_end, steps);
    return out;
}

}  // namespace nullwave
