#pragma once

// Leapfrog solver for  Box u = F(du) (+ S)  on [-L, L]^3 with zero Dirichlet
// ghosts; the domain is sized so the boundary never sees the solution.

#include <array>
#include <functional>
#include <optional>
#include <vector>

#include "nullwave/grid.hpp"
#include "nullwave/initial_data.hpp"
#include "nullwave/kernels.hpp"
#include "nullwave/nonlinearity.hpp"
#include "nullwave/snapshot_io.hpp"

namespace nullwave {

struct SolverOptions {
    int threads = 1;
    std::optional<KernelIsa> isa;  // default_isa() when empty
    double blowup_factor = 10.0;   // max|u_t| beyond this multiple of its initial value
};

/// Source term S_j(t, x) added to the right-hand side (manufactured solutions).
using SourceFn = std::function<double(int component, double t, const std::array<double, 3>& x)>;

struct EnergyRecord {
    double t = 0.0;
    std::vector<double> E;           // ||u_j||_E per component
    std::optional<double> E_tilde;   // (E_1^2 / c0 + E_2^2)^{1/2}
};

struct Probe {
    double sigma = 0.0;
    SphereDirection omega{{0.0, 0.0, 1.0}};
};

struct RayProfile {
    double sigma = 0.0;
    SphereDirection omega{{0.0, 0.0, 1.0}};
    std::vector<double> t;
    std::vector<std::vector<double>> V;  // V[sample][component]
    std::vector<double> residual;        // |H(t)| after profile_residual
};

/// Nodes on which whole profiles V(t; sigma, omega) are recorded at checkpoints.
struct ProfileGridSpec {
    std::vector<double> sigma;
    std::vector<SphereDirection> omegas;
    std::vector<double> weights;  // sphere weights, one per omega
};

struct ProfileGridSample {
    double t = 0.0;
    // values[c][w * n_sigma + s]; exactly zero where t + sigma < 4 dx (and so where sigma <= -t)
    std::vector<std::vector<double>> values;
};

class WaveSolver {
public:
    WaveSolver(CoefficientTensor tensor, GridSpec grid, double dt, SolverOptions options = {});

    /// Loads Cauchy data at time t0 and builds u^{-1} by a second-order Taylor step.
    void initialize(const SampledData& data, double t0 = 0.0);
    void initialize(const FieldSnapshot& snap);
    void set_source(SourceFn source) { source_ = std::move(source); }

    /// One leapfrog step; returns max |u_t| of the level that was advanced from.
    double step();

    int n_components() const noexcept { return n_; }
    const GridSpec& grid() const noexcept { return grid_; }
    double dt() const noexcept { return dt_; }
    double time() const noexcept { return t0_ + static_cast<double>(steps_) * dt_; }
    double half_time() const noexcept { return time() - 0.5 * dt_; }
    std::size_t steps_taken() const noexcept { return steps_; }
    KernelIsa isa() const noexcept { return isa_; }
    double initial_max_ut() const noexcept { return initial_max_ut_; }

    /// Conserved discrete energy per component at the half level, as ||u_j||_E.
    std::vector<double> energies() const;
    /// max|u| at the current level outside radius `radius`, and over the whole grid.
    std::pair<double, double> max_outside(double radius) const;

    /// Profile V = (d_r (r u) - r u_t) / 2 at x = (t + sigma) omega on the half level.
    /// Returns nullopt when t + sigma < 4 dx.
    std::optional<std::vector<double>> ray_value(double sigma, const SphereDirection& omega) const;

    /// (u, u_t) at the current level, u_t by the same second-order predictor as the kernel.
    FieldSnapshot snapshot() const;

    const PaddedField& current(int c) const { return cur_.at(static_cast<std::size_t>(c)); }
    const PaddedField& previous(int c) const { return prev_.at(static_cast<std::size_t>(c)); }

private:
    void fill_source(double t);
    void run_kernel(StepArgs& args, double* plane_max);
    template <typename Fn>
    void parallel_planes(Fn&& fn) const;

    CoefficientTensor tensor_;
    std::vector<KernelTerm> terms_;
    GridSpec grid_;
    double dt_;
    SolverOptions options_;
    int n_;
    KernelIsa isa_;
    StepKernel kernel_;
    std::vector<PaddedField> prev_;
    std::vector<PaddedField> cur_;
    std::vector<PaddedField> src_;
    SourceFn source_;
    double t0_ = 0.0;
    std::size_t steps_ = 0;
    double initial_max_ut_ = 0.0;
    std::vector<double> plane_max_;
};

/// Number of uniform steps so that dt <= cfl dx and t_end is hit exactly.
std::size_t steps_for(const GridSpec& grid, double duration);

struct RunRequest {
    double t_end = 1.0;
    std::vector<Probe> probes;
    double cadence = 0.0;                 // energy record spacing; <= 0 means every step
    std::vector<double> snapshot_times;   // taken at the first step on or after each time
    std::vector<double> checkpoint_times; // profile-grid samples, same rule
    ProfileGridSpec profile_grid;
    std::optional<double> c0;             // enables E_tilde for N = 2
    double support_radius = 0.0;          // R, for the finite-propagation diagnostic
    SourceFn source;
};

struct RunResult {
    std::vector<EnergyRecord> energies;
    std::vector<RayProfile> rays;
    std::vector<FieldSnapshot> snapshots;
    std::vector<ProfileGridSample> checkpoints;
    bool blew_up = false;
    double blowup_t = 0.0;
    double blowup_max_ut = 0.0;
    double initial_max_ut = 0.0;
    double t_reached = 0.0;
    double dt = 0.0;
    std::size_t steps = 0;
    double max_outside_ratio = 0.0;      // max over records of max|u| beyond t + R + 2dx over max|u|
    double max_outside_ratio_far = 0.0;  // the same beyond t + R + 16dx
    KernelIsa isa = KernelIsa::Scalar;
};

/// Full time loop. A blow-up stops the loop and is reported in the result
/// rather than thrown, so partial output survives.
RunResult run(const CoefficientTensor& tensor, const InitialData& data, const GridSpec& grid, const RunRequest& request,
              const SolverOptions& options = {});
/// Same loop from pre-sampled data.
RunResult run(const CoefficientTensor& tensor, const SampledData& data, const GridSpec& grid, const RunRequest& request,
              const SolverOptions& options = {});

/// Energy of a snapshot per component: midpoint sum of 1/2 (u_t^2 + |grad u|^2)
/// with forward edge differences.
EnergyRecord energy(const FieldSnapshot& snap, std::optional<double> c0 = std::nullopt);

/// H(t) = dV/dt + F^red(omega, V) / (2t) by central differences along the ray;
/// fills ray.residual with |H| (end points use one-sided differences).
void profile_residual(RayProfile& ray, const CoefficientTensor& tensor);
inline constexpr double kDiagnosticMu = 0.25;

struct ScatteringComparison {
    double T1 = 0.0;
    double T2 = 0.0;
    std::vector<double> difference;  // ||u_j(T2) - u_j^free(T2)||_E
    std::vector<double> energy;      // ||u_j(T2)||_E
};

/// Evolves each component of `at_T1` freely to the time of `at_T2` and compares.
ScatteringComparison scattering_snapshot(const FieldSnapshot& at_T1, const FieldSnapshot& at_T2, double cfl,
                                         const SolverOptions& options = {});

}  // namespace nullwave
