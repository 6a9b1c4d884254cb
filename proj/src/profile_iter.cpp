#include "nullwave/profile_iter.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nullwave/errors.hpp"
#include "nullwave/rk4.hpp"

namespace nullwave {

namespace {

constexpr cplx kI{0.0, 1.0};

// Cumulative trapezoid of f on a uniform grid.
std::vector<double> cumulative_trapezoid(const std::vector<double>& f, double h) {
    std::vector<double> out(f.size(), 0.0);
    for (std::size_t i = 1; i < f.size(); ++i) out[i] = out[i - 1] + 0.5 * h * (f[i - 1] + f[i]);
    return out;
}

}  // namespace

double ForcedODEProblem::gate_K() const {
    return C0 * (E0 * std::pow(t0, -lambda) + std::abs(z_t0) * lambda) / (lambda * lambda);
}

ZTable solve_forced(const ForcedODEProblem& problem, double t_end, std::size_t steps) {
    if (!problem.phi) throw UsageError("solve_forced: Phi is required");
    if (!(problem.t0 >= 1.0) || !(t_end > problem.t0)) throw UsageError("solve_forced: need 1 <= t0 < t_end");
    if (steps == 0) throw UsageError("solve_forced: steps must be positive");

    const double s0 = std::log(problem.t0);
    const double h = (std::log(t_end) - s0) / static_cast<double>(steps);
    // state as (Re z, Im z) so the generic RK4 step applies
    auto rhs = [&](double s, const std::array<double, 2>& y) {
        const cplx z(y[0], y[1]);
        cplx f = problem.phi(z) * z;
        if (problem.J) {
            const double t = std::exp(s);
            f += t * problem.J(t);
        }
        const cplx dz = -kI * f;
        return std::array<double, 2>{dz.real(), dz.imag()};
    };

    ZTable tab;
    tab.s.reserve(steps + 1);
    tab.z.reserve(steps + 1);
    std::array<double, 2> y{problem.z_t0.real(), problem.z_t0.imag()};
    tab.s.push_back(s0);
    tab.z.push_back(problem.z_t0);
    for (std::size_t i = 0; i < steps; ++i) {
        y = rk4_step(rhs, s0 + h * static_cast<double>(i), y, h);
        if (!std::isfinite(y[0]) || !std::isfinite(y[1])) {
            throw DivergenceError("solve_forced: non-finite state", std::exp(tab.s.back()));
        }
        tab.s.push_back(s0 + h * static_cast<double>(i + 1));
        tab.z.emplace_back(y[0], y[1]);
    }
    return tab;
}

ProfileIterationResult iterate_profile(const ForcedODEProblem& problem, const ZTable& z_tab, std::size_t n_max,
                                       double quad_tol) {
    if (!problem.phi) throw UsageError("iterate_profile: Phi is required");
    if (z_tab.size() < 3) throw UsageError("iterate_profile: table too short");
    if (!(problem.lambda > 0.0) || !(problem.C0 >= 0.0) || !(problem.E0 >= 0.0)) {
        throw UsageError("iterate_profile: need C0, E0 >= 0 and lambda > 0");
    }
    ProfileIterationResult res;
    res.K = problem.gate_K();
    if (!(res.K < 1.0)) {
        std::ostringstream os;
        os << "iterate_profile: contraction gate fails, K = " << res.K << " >= 1";
        throw NumericalError(os.str());
    }

    const std::size_t m = z_tab.size();
    const double h = z_tab.step();
    const double t_end = std::exp(z_tab.s.back());

    auto phi_of = [&](const std::vector<cplx>& z) {
        std::vector<double> out(z.size());
        for (std::size_t i = 0; i < z.size(); ++i) out[i] = problem.phi(z[i]);
        return out;
    };

    const std::vector<cplx>& z0 = z_tab.z;
    const std::vector<double> phi0 = phi_of(z0);
    const std::vector<double> theta0 = cumulative_trapezoid(phi0, h);

    // zeta_0 = z(t0) - i int_{t0}^{t_end} J e^{i Theta_0} dtau, the integral taken in s.
    cplx zeta0;
    if (problem.J) {
        res.used_forcing = true;
        cplx acc{0.0, 0.0};
        cplx prev;
        for (std::size_t i = 0; i < m; ++i) {
            const double t = std::exp(z_tab.s[i]);
            const cplx f = problem.J(t) * std::exp(kI * theta0[i]) * t;
            if (i > 0) acc += 0.5 * h * (prev + f);
            prev = f;
        }
        zeta0 = z0.front() - kI * acc;
    } else {
        zeta0 = z0.back() * std::exp(kI * theta0.back());
    }

    const double decay_end = std::pow(t_end, -problem.lambda);
    res.tail_bound = problem.E0 / problem.lambda * decay_end +
                     std::abs(zeta0) * problem.C0 * problem.E0 /
                         (problem.lambda * problem.lambda * (1.0 - res.K)) * decay_end;

    std::vector<cplx> zn = z0;
    std::vector<double> phin = phi0;
    std::vector<cplx> next(m);
    for (std::size_t n = 0; n < n_max; ++n) {
        const std::vector<double> theta = cumulative_trapezoid(phin, h);
        // zeta_n = zeta_0 exp(i int (Phi(z_n) - Phi(z_0)) ds), so only phases change.
        std::vector<double> dphi(m);
        for (std::size_t i = 0; i < m; ++i) dphi[i] = phin[i] - phi0[i];
        const double shift = cumulative_trapezoid(dphi, h).back();
        const cplx zeta = zeta0 * std::exp(kI * shift);
        res.zeta.push_back(zeta);

        double sup = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            next[i] = zeta * std::exp(-kI * theta[i]);
            sup = std::max(sup, std::abs(next[i] - zn[i]));
        }
        res.increments.push_back(sup);
        res.increments_t0.push_back(std::abs(next.front() - zn.front()));
        zn.swap(next);
        phin = phi_of(zn);
        ++res.iterations;
        if (sup < quad_tol) break;
    }
    for (std::size_t n = 0; n + 1 < res.increments.size(); ++n) {
        if (res.increments[n + 1] < quad_tol || res.increments[n] < quad_tol) break;
        res.ratios.push_back(res.increments[n + 1] / res.increments[n]);
    }

    res.p.s = z_tab.s;
    res.p.z = zn;
    res.bound_rhs.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double t = std::exp(z_tab.s[i]);
        res.bound_rhs[i] =
            problem.E0 / (problem.lambda * (1.0 - res.K) * std::pow(t, problem.lambda)) + res.tail_bound;
    }
    return res;
}

ProfileEquationCheck check_profile_equation(const ZTable& p_tab, const std::function<double(cplx)>& phi) {
    ProfileEquationCheck out;
    if (p_tab.size() < 3) return out;
    const double h = p_tab.step();
    double lo = std::abs(p_tab.z.front());
    double hi = lo;
    for (std::size_t i = 0; i < p_tab.size(); ++i) {
        const double a = std::abs(p_tab.z[i]);
        lo = std::min(lo, a);
        hi = std::max(hi, a);
        if (i == 0 || i + 1 == p_tab.size()) continue;
        const cplx dp = (p_tab.z[i + 1] - p_tab.z[i - 1]) / (2.0 * h);
        out.max_residual = std::max(out.max_residual, std::abs(kI * dp - phi(p_tab.z[i]) * p_tab.z[i]));
    }
    out.modulus_spread = hi - lo;
    return out;
}

cplx ManufacturedForced::target_p(double s) const {
    const auto xy = closed_form_XY(s - std::log(problem.t0), target);
    return {2.0 * xy.X, 2.0 * xy.Y};
}

cplx ManufacturedForced::exact_z(double t) const {
    return target_p(std::log(t)) + w * std::pow(t, -problem.lambda);
}

ManufacturedForced make_manufactured_forced(double c, double rho, double phase, cplx w, double lambda, double t0) {
    if (!(lambda > 0.0) || !(rho >= 0.0) || !(t0 >= 1.0)) throw UsageError("make_manufactured_forced: bad parameters");
    ManufacturedForced m;
    m.target = XYParams::from_initial(c, rho * std::cos(phase), rho * std::sin(phase));
    m.w = w;
    auto phi = [c](cplx z) { return 0.5 * c * z.real(); };
    m.problem.phi = phi;
    m.problem.C0 = 0.5 * std::abs(c);
    m.problem.lambda = lambda;
    m.problem.t0 = t0;
    m.problem.E0 = std::abs(w) * (m.problem.C0 * (4.0 * rho + std::abs(w)) + lambda);

    const ManufacturedForced snapshot = m;  // the forcing needs the target, not the problem
    m.problem.J = [snapshot, phi, lambda](double t) {
        const cplx p = snapshot.target_p(std::log(t));
        const cplx z = p + snapshot.w * std::pow(t, -lambda);
        return (phi(p) * p - phi(z) * z) / t - kI * lambda * snapshot.w * std::pow(t, -1.0 - lambda);
    };
    m.problem.z_t0 = m.exact_z(t0);
    return m;
}

}  // namespace nullwave
