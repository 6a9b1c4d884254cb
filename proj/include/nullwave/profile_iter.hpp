#pragma once

// Forced profile equation  i z'(t) = Phi(z) z / t + J(t)  and the iteration
// Theta_n, zeta_n, z_n that converges to a solution p of  i p'(s) = Phi(p) p.
// Every tabulated function lives on one uniform grid in s = log t, so all
// integrals against dtau / tau are trapezoid sums in s.

#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

#include "nullwave/reduced_ode.hpp"

namespace nullwave {

using cplx = std::complex<double>;

struct ForcedODEProblem {
    std::function<double(cplx)> phi;  // real valued, Lipschitz with constant C0
    double C0 = 0.0;
    std::function<cplx(double)> J;    // forcing; may be empty, meaning unknown or zero
    double E0 = 0.0;                  // |J(t)| <= E0 t^{-1-lambda}
    double lambda = 1.0;
    double t0 = 1.0;
    cplx z_t0{0.0, 0.0};

    /// K = C0 (E0 t0^{-lambda} + |z(t0)| lambda) / lambda^2; iteration needs K < 1.
    double gate_K() const;
};

struct ZTable {
    std::vector<double> s;
    std::vector<cplx> z;

    std::size_t size() const noexcept { return s.size(); }
    double step() const { return s.size() > 1 ? s[1] - s[0] : 0.0; }
};

/// RK4 in s of dz/ds = -i (Phi(z) z + t J(t)), `steps` uniform steps to t_end.
ZTable solve_forced(const ForcedODEProblem& problem, double t_end, std::size_t steps);

struct ProfileIterationResult {
    ZTable p;                          // last iterate, the profile approximation
    std::vector<cplx> zeta;            // zeta_0 .. zeta_{n-1}
    std::vector<double> increments;    // sup_t |z_{n+1} - z_n|
    std::vector<double> increments_t0;// |z_{n+1}(t0) - z_n(t0)|
    std::vector<double> ratios;        // increments[n+1] / increments[n] above the floor
    double K = 0.0;
    double tail_bound = 0.0;           // truncation of the improper integrals at t_end
    std::vector<double> bound_rhs;     // E0 / (lambda (1-K) t^lambda) + tail_bound per grid point
    std::size_t iterations = 0;
    bool used_forcing = false;         // zeta_0 from the J integral rather than the limit form
};

/// Runs the iteration for at most n_max steps, stopping once the increment drops
/// below quad_tol. Throws NumericalError if K >= 1 (the message carries K).
ProfileIterationResult iterate_profile(const ForcedODEProblem& problem, const ZTable& z_tab, std::size_t n_max = 60,
                                       double quad_tol = 1e-13);

struct ProfileEquationCheck {
    double max_residual = 0.0;     // max |i p'(s) - Phi(p) p| on interior points
    double modulus_spread = 0.0;   // max |p| - min |p|
};

ProfileEquationCheck check_profile_equation(const ZTable& p_tab, const std::function<double(cplx)>& phi);

/// Manufactured forced problem: the target p(s) = 2 (X + iY) solves the profile
/// equation with Phi(z) = c Re z / 2, z(t) = p(log t) + w t^{-lambda}, and J is
/// defined so that z solves the forced equation exactly.
struct ManufacturedForced {
    ForcedODEProblem problem;
    XYParams target;
    cplx w;

    cplx target_p(double s) const;
    cplx exact_z(double t) const;
};

ManufacturedForced make_manufactured_forced(double c, double rho, double phase, cplx w, double lambda,
                                            double t0 = 1.0);

}  // namespace nullwave
