#pragma once

// Run configuration. One YAML tree drives every subcommand; each reads only
// the sections it needs:
//
//   system:   {example, c0, c_ab, c1, c2}
//   grid:     {L, n, cfl}
//   data:     {epsilon, R, profile, components: [...], user_table}
//   probes:   [{sigma, omega: [x, y, z]}]
//   times:    {t_end, cadence, snapshot_times, checkpoints}
//   profile_grid: {sigma_min, sigma_max, sigma_step, n_theta}
//   solver:   {threads, isa, blowup_factor}
//   analysis: {radiation_check, translation_n}

#include <optional>
#include <string>
#include <vector>

#include "nullwave/grid.hpp"
#include "nullwave/initial_data.hpp"
#include "nullwave/nonlinearity.hpp"
#include "nullwave/wave_solver.hpp"

namespace nullwave {

struct ProfileGridConfig {
    std::optional<double> sigma_min;  // default -t_end / 2
    std::optional<double> sigma_max;  // default R + 2
    std::optional<double> sigma_step; // default dx
    int n_theta = 6;
};

struct AnalysisConfig {
    bool radiation_check = false;  // compare late profiles with T[f, g] (free runs)
    int translation_n = 96;        // points per axis of the grid that samples the data for T
};

struct RunConfig {
    ExampleSystem system;
    bool has_grid = false;
    GridSpec grid;
    bool has_data = false;
    InitialData data;
    std::vector<Probe> probes;
    double t_end = 0.0;
    double cadence = 0.0;
    std::vector<double> snapshot_times;
    std::vector<double> checkpoint_times;
    ProfileGridConfig profile_grid;
    SolverOptions solver;
    AnalysisConfig analysis;
    std::string canonical;  // re-emitted YAML, the input of the config hash

    /// Support radius: data.R when given, else the largest component support.
    double support_radius() const;
    /// sigma grid of the recorded profile checkpoints.
    std::vector<double> sigma_grid() const;
};

/// Throws UsageError naming the offending key on any malformed or missing entry.
RunConfig parse_config(const std::string& yaml_text);
RunConfig load_config(const std::string& path);

/// SHA-256 of the canonical form, lowercase hex. Comments and formatting do not matter.
std::string config_hash(const RunConfig& config);

/// Aligned initial data for Simple(c1, c2) blow-up tests:
/// (f1, g1) = (phi, psi) / sqrt(|c1 c2|), (f2, g2) = -(phi, psi) / c1.
InitialData aligned_data(const ComponentProfile& phi_psi, double c1, double c2, double epsilon);

}  // namespace nullwave
