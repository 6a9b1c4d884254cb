#include "nullwave/wave_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "kernels/point_scalar.hpp"
#include "parallel.hpp"
#include "nullwave/errors.hpp"

namespace nullwave {

namespace {

std::vector<KernelTerm> compile_terms(const CoefficientTensor& tensor) {
    std::vector<KernelTerm> out;
    for (const auto& t : tensor.terms()) out.push_back({t.j, t.k, t.a, t.l, t.b, t.c});
    return out;
}

// Sum over grid edges whose lower endpoint lies in padded plane k of
// (a_hi - a_lo)(b_hi - b_lo); edges to the ghost layer included.
double plane_edge_product(const PaddedField& a, const PaddedField& b, int k) {
    const int n = a.n();
    double s = 0.0;
    for (int j = 0; j <= n; ++j) {
        for (int i = 0; i <= n; ++i) {
            const double va = a.at(i, j, k);
            const double vb = b.at(i, j, k);
            if (j >= 1 && k >= 1) s += (a.at(i + 1, j, k) - va) * (b.at(i + 1, j, k) - vb);
            if (i >= 1 && k >= 1) s += (a.at(i, j + 1, k) - va) * (b.at(i, j + 1, k) - vb);
            if (i >= 1 && j >= 1) s += (a.at(i, j, k + 1) - va) * (b.at(i, j, k + 1) - vb);
        }
    }
    return s;
}

double plane_diff_sq(const PaddedField& a, const PaddedField& b, int k) {
    const int n = a.n();
    double s = 0.0;
    for (int j = 1; j <= n; ++j) {
        for (int i = 1; i <= n; ++i) {
            const double d = a.at(i, j, k) - b.at(i, j, k);
            s += d * d;
        }
    }
    return s;
}


}  // namespace

std::size_t steps_for(const GridSpec& grid, double duration) {
    if (!(duration > 0.0)) return 0;
    const double nominal = grid.cfl * grid.dx();
    return static_cast<std::size_t>(std::ceil(duration / nominal - 1e-9));
}

WaveSolver::WaveSolver(CoefficientTensor tensor, GridSpec grid, double dt, SolverOptions options)
    : tensor_(std::move(tensor)),
      terms_(compile_terms(tensor_)),
      grid_(grid),
      dt_(dt),
      options_(options),
      n_(tensor_.n_components()),
      isa_(options.isa ? *options.isa : default_isa()),
      kernel_(select_kernel(isa_)) {
    grid_.validate();
    if (n_ < 1 || n_ > kMaxKernelComponents) throw UsageError("wave solver: 1 to 4 components supported");
    if (!(dt_ > 0.0) || !(dt_ < grid_.dx() / std::sqrt(3.0))) throw UsageError("wave solver: dt violates the CFL bound");
    if (options_.threads < 1) throw UsageError("wave solver: threads must be >= 1");
    const int n = grid_.points_per_axis;
    prev_.assign(static_cast<std::size_t>(n_), PaddedField(n));
    cur_.assign(static_cast<std::size_t>(n_), PaddedField(n));
    plane_max_.assign(static_cast<std::size_t>(n), 0.0);
}

void WaveSolver::fill_source(double t) {
    const int n = grid_.points_per_axis;
    if (src_.empty()) src_.assign(static_cast<std::size_t>(n_), PaddedField(n));
    for (int c = 0; c < n_; ++c) {
        auto& s = src_[static_cast<std::size_t>(c)];
        detail::for_slabs(options_.threads, 1, n + 1, [&](int k0, int k1) {
            for (int k = k0; k < k1; ++k) {
                for (int j = 1; j <= n; ++j) {
                    for (int i = 1; i <= n; ++i) {
                        s.at(i, j, k) = source_(c, t, {grid_.coord(i - 1), grid_.coord(j - 1), grid_.coord(k - 1)});
                    }
                }
            }
        });
    }
}

void WaveSolver::initialize(const SampledData& data, double t0) {
    if (static_cast<int>(data.u.size()) != n_ || static_cast<int>(data.ut.size()) != n_) {
        throw UsageError("wave solver: data has the wrong number of components");
    }
    for (int c = 0; c < n_; ++c) {
        if (data.u[static_cast<std::size_t>(c)].n() != grid_.points_per_axis) throw UsageError("wave solver: data grid mismatch");
    }
    t0_ = t0;
    steps_ = 0;
    const int n = grid_.points_per_axis;
    if (source_) fill_source(t0);
    for (int c = 0; c < n_; ++c) cur_[static_cast<std::size_t>(c)] = data.u[static_cast<std::size_t>(c)];

    StepArgs a;
    a.n = n;
    a.n_components = n_;
    a.sy = cur_[0].stride_y();
    a.sz = cur_[0].stride_z();
    a.inv_dx2 = 1.0 / (grid_.dx() * grid_.dx());
    a.inv_2dx = 1.0 / (2.0 * grid_.dx());
    a.terms = terms_.data();
    a.n_terms = static_cast<int>(terms_.size());

    double max_ut = 0.0;
    for (int k = 1; k <= n; ++k) {
        for (int j = 1; j <= n; ++j) {
            for (int i = 1; i <= n; ++i) {
                const std::size_t p = cur_[0].index(i, j, k);
                double lap[kMaxKernelComponents];
                double D[kMaxKernelComponents][4];
                double F[kMaxKernelComponents];
                for (int c = 0; c < n_; ++c) {
                    const double* u = cur_[static_cast<std::size_t>(c)].data();
                    lap[c] = (u[p + 1] + u[p - 1] + u[p + a.sy] + u[p - a.sy] + u[p + a.sz] + u[p - a.sz] - 6.0 * u[p]) *
                             a.inv_dx2;
                    D[c][0] = data.ut[static_cast<std::size_t>(c)].data()[p];
                    D[c][1] = (u[p + 1] - u[p - 1]) * a.inv_2dx;
                    D[c][2] = (u[p + a.sy] - u[p - a.sy]) * a.inv_2dx;
                    D[c][3] = (u[p + a.sz] - u[p - a.sz]) * a.inv_2dx;
                    max_ut = std::max(max_ut, std::abs(D[c][0]));
                }
                detail::nonlinearity_scalar(a, D, F);
                for (int c = 0; c < n_; ++c) {
                    const double s = source_ ? src_[static_cast<std::size_t>(c)].data()[p] : 0.0;
                    const double acc = lap[c] + F[c] + s;
                    prev_[static_cast<std::size_t>(c)].data()[p] =
                        cur_[static_cast<std::size_t>(c)].data()[p] - dt_ * D[c][0] + 0.5 * dt_ * dt_ * acc;
                }
            }
        }
    }
    initial_max_ut_ = max_ut;
}

void WaveSolver::initialize(const FieldSnapshot& snap) {
    if (static_cast<int>(snap.n_components()) != n_) throw UsageError("wave solver: snapshot has the wrong number of components");
    if (snap.grid.points_per_axis != grid_.points_per_axis) throw UsageError("wave solver: snapshot grid mismatch");
    SampledData d;
    for (int c = 0; c < n_; ++c) {
        PaddedField u(grid_.points_per_axis);
        PaddedField ut(grid_.points_per_axis);
        u.set_interior(snap.u[static_cast<std::size_t>(c)]);
        ut.set_interior(snap.ut[static_cast<std::size_t>(c)]);
        d.u.push_back(std::move(u));
        d.ut.push_back(std::move(ut));
    }
    initialize(d, snap.t);
}

double WaveSolver::step() {
    const int n = grid_.points_per_axis;
    if (source_) fill_source(time());
    StepArgs a;
    a.n = n;
    a.n_components = n_;
    a.sy = cur_[0].stride_y();
    a.sz = cur_[0].stride_z();
    a.inv_dx2 = 1.0 / (grid_.dx() * grid_.dx());
    a.inv_2dx = 1.0 / (2.0 * grid_.dx());
    a.inv_dt = 1.0 / dt_;
    a.half_dt = 0.5 * dt_;
    a.dt2 = dt_ * dt_;
    for (int c = 0; c < n_; ++c) {
        a.cur[c] = cur_[static_cast<std::size_t>(c)].data();
        a.prev[c] = prev_[static_cast<std::size_t>(c)].data();
        a.source[c] = source_ ? src_[static_cast<std::size_t>(c)].data() : nullptr;
    }
    a.terms = terms_.data();
    a.n_terms = static_cast<int>(terms_.size());
    run_kernel(a, plane_max_.data());
    std::swap(prev_, cur_);
    ++steps_;
    double m = 0.0;
    for (double v : plane_max_) m = (m > v || std::isnan(m)) ? m : v;
    return m;
}

void WaveSolver::run_kernel(StepArgs& args, double* plane_max) {
    const StepKernel kernel = kernel_;
    detail::for_slabs(options_.threads, 1, grid_.points_per_axis + 1,
               [&](int k0, int k1) { kernel(args, k0, k1, plane_max + (k0 - 1)); });
}

std::vector<double> WaveSolver::energies() const {
    const int n = grid_.points_per_axis;
    const double dx = grid_.dx();
    std::vector<double> out;
    std::vector<double> kin(static_cast<std::size_t>(n + 1), 0.0);
    std::vector<double> grad(static_cast<std::size_t>(n + 1), 0.0);
    for (int c = 0; c < n_; ++c) {
        const auto& a = cur_[static_cast<std::size_t>(c)];
        const auto& b = prev_[static_cast<std::size_t>(c)];
        detail::for_slabs(options_.threads, 0, n + 1, [&](int k0, int k1) {
            for (int k = k0; k < k1; ++k) {
                grad[static_cast<std::size_t>(k)] = plane_edge_product(a, b, k);
                kin[static_cast<std::size_t>(k)] = k >= 1 ? plane_diff_sq(a, b, k) : 0.0;
            }
        });
        double sk = 0.0;
        double sg = 0.0;
        for (int k = 0; k <= n; ++k) {
            sk += kin[static_cast<std::size_t>(k)];
            sg += grad[static_cast<std::size_t>(k)];
        }
        const double e2 = 0.5 * (sk / (dt_ * dt_) * dx * dx * dx + sg * dx);
        out.push_back(e2 >= 0.0 ? std::sqrt(e2) : std::numeric_limits<double>::quiet_NaN());
    }
    return out;
}

std::pair<double, double> WaveSolver::max_outside(double radius) const {
    const int n = grid_.points_per_axis;
    double outside = 0.0;
    double all = 0.0;
    const double r2 = radius * radius;
    for (int c = 0; c < n_; ++c) {
        const auto& u = cur_[static_cast<std::size_t>(c)];
        for (int k = 1; k <= n; ++k) {
            const double z = grid_.coord(k - 1);
            for (int j = 1; j <= n; ++j) {
                const double y = grid_.coord(j - 1);
                for (int i = 1; i <= n; ++i) {
                    const double x = grid_.coord(i - 1);
                    const double v = std::abs(u.at(i, j, k));
                    all = std::max(all, v);
                    if (x * x + y * y + z * z > r2) outside = std::max(outside, v);
                }
            }
        }
    }
    return {outside, all};
}

std::optional<std::vector<double>> WaveSolver::ray_value(double sigma, const SphereDirection& omega) const {
    const double h = grid_.dx();
    const double t = half_time();
    const double r = t + sigma;
    if (r < 4.0 * h) return std::nullopt;
    const auto& w = omega.omega();
    auto at = [&](double rad) { return std::array<double, 3>{rad * w[0], rad * w[1], rad * w[2]}; };
    const auto xp = at(r + h);
    const auto xm = at(r - h);
    const auto x0 = at(r);
    std::vector<double> V(static_cast<std::size_t>(n_));
    for (int c = 0; c < n_; ++c) {
        const auto& a = cur_[static_cast<std::size_t>(c)];
        const auto& b = prev_[static_cast<std::size_t>(c)];
        const double up = 0.5 * (trilinear(a, grid_, xp) + trilinear(b, grid_, xp));
        const double um = 0.5 * (trilinear(a, grid_, xm) + trilinear(b, grid_, xm));
        const double drru = ((r + h) * up - (r - h) * um) / (2.0 * h);
        const double ut = (trilinear(a, grid_, x0) - trilinear(b, grid_, x0)) / dt_;
        V[static_cast<std::size_t>(c)] = 0.5 * (drru - r * ut);
    }
    return V;
}

FieldSnapshot WaveSolver::snapshot() const {
    const int n = grid_.points_per_axis;
    FieldSnapshot snap;
    snap.t = time();
    snap.grid = grid_;
    std::vector<PaddedField> S;
    if (source_) {
        S.assign(static_cast<std::size_t>(n_), PaddedField(n));
        for (int c = 0; c < n_; ++c) {
            for (int k = 1; k <= n; ++k) {
                for (int j = 1; j <= n; ++j) {
                    for (int i = 1; i <= n; ++i) {
                        S[static_cast<std::size_t>(c)].at(i, j, k) =
                            source_(c, snap.t, {grid_.coord(i - 1), grid_.coord(j - 1), grid_.coord(k - 1)});
                    }
                }
            }
        }
    }
    std::vector<PaddedField> ut(static_cast<std::size_t>(n_), PaddedField(n));
    StepArgs a;
    a.n_components = n_;
    a.terms = terms_.data();
    a.n_terms = static_cast<int>(terms_.size());
    const std::size_t sy = cur_[0].stride_y();
    const std::size_t sz = cur_[0].stride_z();
    const double inv_dx2 = 1.0 / (grid_.dx() * grid_.dx());
    const double inv_2dx = 1.0 / (2.0 * grid_.dx());
    for (int k = 1; k <= n; ++k) {
        for (int j = 1; j <= n; ++j) {
            for (int i = 1; i <= n; ++i) {
                const std::size_t p = cur_[0].index(i, j, k);
                double lap[kMaxKernelComponents];
                double D[kMaxKernelComponents][4];
                double F[kMaxKernelComponents];
                for (int c = 0; c < n_; ++c) {
                    const double* u = cur_[static_cast<std::size_t>(c)].data();
                    lap[c] = (u[p + 1] + u[p - 1] + u[p + sy] + u[p - sy] + u[p + sz] + u[p - sz] - 6.0 * u[p]) * inv_dx2;
                    D[c][0] = (u[p] - prev_[static_cast<std::size_t>(c)].data()[p]) / dt_;
                    D[c][1] = (u[p + 1] - u[p - 1]) * inv_2dx;
                    D[c][2] = (u[p + sy] - u[p - sy]) * inv_2dx;
                    D[c][3] = (u[p + sz] - u[p - sz]) * inv_2dx;
                }
                detail::nonlinearity_scalar(a, D, F);
                for (int c = 0; c < n_; ++c) {
                    const double s = source_ ? S[static_cast<std::size_t>(c)].data()[p] : 0.0;
                    ut[static_cast<std::size_t>(c)].data()[p] = D[c][0] + 0.5 * dt_ * (lap[c] + F[c] + s);
                }
            }
        }
    }
    for (int c = 0; c < n_; ++c) {
        snap.u.push_back(cur_[static_cast<std::size_t>(c)].interior());
        snap.ut.push_back(ut[static_cast<std::size_t>(c)].interior());
    }
    return snap;
}

namespace {

bool reached(double t, double target, double dt) { return t >= target - 1e-9 * std::max(1.0, dt); }

}  // namespace

RunResult run(const CoefficientTensor& tensor, const InitialData& data, const GridSpec& grid, const RunRequest& request,
              const SolverOptions& options) {
    if (data.size() != static_cast<std::size_t>(tensor.n_components())) {
        throw UsageError("run: initial data and tensor disagree on the number of components");
    }
    RunRequest req = request;
    req.support_radius = std::max(req.support_radius, data.support_radius());
    grid.validate_horizon(req.t_end, req.support_radius);
    return run(tensor, sample(data, grid), grid, req, options);
}

RunResult run(const CoefficientTensor& tensor, const SampledData& data, const GridSpec& grid, const RunRequest& request,
              const SolverOptions& options) {
    grid.validate();
    if (!(request.t_end > 0.0)) throw UsageError("run: t_end must be positive");
    const std::size_t steps = steps_for(grid, request.t_end);
    const double dt = request.t_end / static_cast<double>(steps);
    WaveSolver solver(tensor, grid, dt, options);
    if (request.source) solver.set_source(request.source);
    solver.initialize(data, 0.0);

    RunResult res;
    res.dt = dt;
    res.isa = solver.isa();
    res.initial_max_ut = solver.initial_max_ut();
    for (const auto& p : request.probes) {
        RayProfile ray;
        ray.sigma = p.sigma;
        ray.omega = p.omega;
        res.rays.push_back(std::move(ray));
    }
    const bool weighted = request.c0.has_value() && tensor.n_components() == 2;
    std::vector<double> snap_times = request.snapshot_times;
    std::vector<double> check_times = request.checkpoint_times;
    std::sort(snap_times.begin(), snap_times.end());
    std::sort(check_times.begin(), check_times.end());
    std::size_t next_snap = 0;
    std::size_t next_check = 0;
    double next_record = 0.0;
    double reference = solver.initial_max_ut();
    const double dx = grid.dx();

    for (std::size_t s = 0; s < steps; ++s) {
        const double max_ut = solver.step();
        if (s == 0) reference = std::max(reference, max_ut);
        const double t = solver.time();
        const double th = solver.half_time();
        const bool last = s + 1 == steps;
        if (!std::isfinite(max_ut) || max_ut > options.blowup_factor * reference) {
            res.blew_up = true;
            res.blowup_t = t - dt;  // the level whose u_t was measured
            res.blowup_max_ut = max_ut;
            break;
        }

        for (auto& ray : res.rays) {
            if (auto v = solver.ray_value(ray.sigma, ray.omega)) {
                ray.t.push_back(th);
                ray.V.push_back(std::move(*v));
            }
        }

        if (request.cadence <= 0.0 || reached(th, next_record, dt) || last) {
            EnergyRecord rec;
            rec.t = th;
            rec.E = solver.energies();
            if (weighted) rec.E_tilde = std::sqrt(rec.E[0] * rec.E[0] / *request.c0 + rec.E[1] * rec.E[1]);
            bool finite = true;
            for (double e : rec.E) finite = finite && std::isfinite(e);
            res.energies.push_back(std::move(rec));
            if (!finite) {
                res.blew_up = true;
                res.blowup_t = t;
                res.blowup_max_ut = max_ut;
                break;
            }
            const auto [outside, all] = solver.max_outside(t + request.support_radius + 2.0 * dx);
            const auto [far, all2] = solver.max_outside(t + request.support_radius + 16.0 * dx);
            if (all > 0.0) {
                res.max_outside_ratio = std::max(res.max_outside_ratio, outside / all);
                res.max_outside_ratio_far = std::max(res.max_outside_ratio_far, far / all2);
            }
            while (request.cadence > 0.0 && reached(th, next_record, dt)) next_record += request.cadence;
        }

        while (next_check < check_times.size() && (reached(t, check_times[next_check], dt) || last)) {
            ProfileGridSample sample;
            sample.t = th;
            const auto& pg = request.profile_grid;
            const std::size_t ns = pg.sigma.size();
            sample.values.assign(static_cast<std::size_t>(tensor.n_components()),
                                 std::vector<double>(ns * pg.omegas.size(), 0.0));
            for (std::size_t w = 0; w < pg.omegas.size(); ++w) {
                for (std::size_t si = 0; si < ns; ++si) {
                    if (auto v = solver.ray_value(pg.sigma[si], pg.omegas[w])) {
                        for (std::size_t c = 0; c < v->size(); ++c) sample.values[c][w * ns + si] = (*v)[c];
                    }
                }
            }
            res.checkpoints.push_back(std::move(sample));
            ++next_check;
        }
        while (next_snap < snap_times.size() && (reached(t, snap_times[next_snap], dt) || last)) {
            res.snapshots.push_back(solver.snapshot());
            ++next_snap;
        }
    }
    res.steps = solver.steps_taken();
    res.t_reached = solver.time();
    return res;
}

EnergyRecord energy(const FieldSnapshot& snap, std::optional<double> c0) {
    EnergyRecord rec;
    rec.t = snap.t;
    const int n = snap.grid.points_per_axis;
    for (std::size_t c = 0; c < snap.n_components(); ++c) {
        PaddedField u(n);
        PaddedField ut(n);
        u.set_interior(snap.u[c]);
        ut.set_interior(snap.ut[c]);
        rec.E.push_back(std::sqrt(data_norm_sq(u, ut, snap.grid.dx())));
    }
    if (c0 && rec.E.size() == 2) rec.E_tilde = std::sqrt(rec.E[0] * rec.E[0] / *c0 + rec.E[1] * rec.E[1]);
    return rec;
}

void profile_residual(RayProfile& ray, const CoefficientTensor& tensor) {
    const std::size_t m = ray.t.size();
    ray.residual.assign(m, 0.0);
    if (m < 2) return;
    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t lo = i == 0 ? 0 : i - 1;
        const std::size_t hi = i + 1 == m ? i : i + 1;
        const double dt = ray.t[hi] - ray.t[lo];
        const auto Fred = eval_Fred(tensor, ray.omega, ray.V[i]);
        double h2 = 0.0;
        for (std::size_t c = 0; c < ray.V[i].size(); ++c) {
            const double dV = (ray.V[hi][c] - ray.V[lo][c]) / dt;
            const double h = dV + Fred[c] / (2.0 * ray.t[i]);
            h2 += h * h;
        }
        ray.residual[i] = std::sqrt(h2);
    }
}

ScatteringComparison scattering_snapshot(const FieldSnapshot& at_T1, const FieldSnapshot& at_T2, double cfl,
                                         const SolverOptions& options) {
    if (!(at_T2.t > at_T1.t)) throw UsageError("scattering_snapshot: need T2 > T1");
    if (at_T1.n_components() != at_T2.n_components() || at_T1.grid.points_per_axis != at_T2.grid.points_per_axis) {
        throw UsageError("scattering_snapshot: snapshots do not match");
    }
    ScatteringComparison out;
    out.T1 = at_T1.t;
    out.T2 = at_T2.t;
    GridSpec grid = at_T1.grid;
    grid.cfl = cfl;
    const int n = grid.points_per_axis;
    const std::size_t steps = steps_for(grid, at_T2.t - at_T1.t);
    const double dt = (at_T2.t - at_T1.t) / static_cast<double>(steps);
    for (std::size_t c = 0; c < at_T1.n_components(); ++c) {
        FieldSnapshot one;
        one.t = at_T1.t;
        one.grid = grid;
        one.u.push_back(at_T1.u[c]);
        one.ut.push_back(at_T1.ut[c]);
        WaveSolver free(CoefficientTensor(1), grid, dt, options);
        free.initialize(one);
        for (std::size_t s = 0; s < steps; ++s) free.step();
        const FieldSnapshot fin = free.snapshot();
        PaddedField du(n);
        PaddedField dut(n);
        std::vector<double> a(fin.u[0].size());
        for (std::size_t i = 0; i < a.size(); ++i) a[i] = at_T2.u[c][i] - fin.u[0][i];
        du.set_interior(a);
        for (std::size_t i = 0; i < a.size(); ++i) a[i] = at_T2.ut[c][i] - fin.ut[0][i];
        dut.set_interior(a);
        out.difference.push_back(std::sqrt(data_norm_sq(du, dut, grid.dx())));
        FieldSnapshot two;
        two.t = at_T2.t;
        two.grid = grid;
        two.u.push_back(at_T2.u[c]);
        two.ut.push_back(at_T2.ut[c]);
        out.energy.push_back(energy(two).E[0]);
    }
    return out;
}

}  // namespace nullwave
