#pragma once

// The reduced system dV/dt = -F^red(omega, V) / (2t) along a ray, integrated in
// s = log t, and the explicit X/Y system with its closed-form solution.

#include <array>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "nullwave/condition_h.hpp"
#include "nullwave/nonlinearity.hpp"

namespace nullwave {

struct ReducedTrajectory {
    std::array<double, 3> omega{0.0, 0.0, 1.0};
    double sigma = 0.0;  // label only
    std::vector<double> s;
    std::vector<double> t;
    std::vector<std::vector<double>> V;
};

/// Fixed-step RK4 in s = log t with `steps` uniform steps from t0 to t_end.
/// Throws DivergenceError (carrying the last finite t) on a non-finite state.
ReducedTrajectory integrate_reduced(const CoefficientTensor& tensor, const SphereDirection& dir,
                                    const std::vector<double>& V0, double t0, double t_end, std::size_t steps,
                                    double sigma = 0.0);

/// V^T A(omega) V at every sample of the trajectory.
std::vector<double> conserved_form(const ReducedTrajectory& traj, const WeightMatrix& weight);

/// Initial data of the X/Y system: rho^2 = xi^2 + eta^2, xi = X(0), eta = Y(0).
struct XYParams {
    double c = 1.0;
    double rho = 0.0;
    double eta = 0.0;
    double xi = 0.0;

    /// Builds consistent parameters from an initial point.
    static XYParams from_initial(double c, double X0, double Y0);
};

struct XYPoint {
    double s = 0.0;
    double X = 0.0;
    double Y = 0.0;
};

/// Closed-form solution of X' = c X Y, Y' = -c X^2 evaluated without overflow.
XYPoint closed_form_XY(double s, const XYParams& params);

/// RK4 trajectory of the same system, `steps + 1` samples on [0, s_end].
std::vector<XYPoint> integrate_XY(const XYParams& params, double s_end, std::size_t steps);

/// (X, Y) = (Re p / 2, Im p / 2) with p = sqrt(c0) V1 + i c0 V2.
std::pair<double, double> typical_xy_from_V(double c0, double V1, double V2);
std::pair<double, double> typical_V_from_xy(double c0, double X, double Y);

/// Normalized two-component variables:
///   Vt = P V, pt = sqrt(c0) Vt1 + i c0 Vt2,
///   (Xt, Yt) = M (Re pt, Im pt),  M = 1/(2 sqrt c0) [[sqrt c0 ct1, ct2], [ct2, -sqrt c0 ct1]],
/// which obey Xt' = -Xt Yt, Yt' = Xt^2.
std::pair<double, double> general2_from_V(const Diagonalization2& diag, double V1, double V2);

struct General2Trajectory {
    bool null_direction = false;  // ct1 = ct2 = 0: F^red vanishes here and V is constant
    std::string note;
    std::vector<XYPoint> points;  // (s, Xt, Yt)
};

General2Trajectory integrate_general2(const Diagonalization2& diag, const std::vector<double>& V0, double s_end,
                                      std::size_t steps);

}  // namespace nullwave
