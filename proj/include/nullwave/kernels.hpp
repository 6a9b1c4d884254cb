#pragma once

// Leapfrog update for  u_tt = Lap u + F(du) + S  on a padded grid.
//
// Per interior point and component c:
//   lap_c   7-point Laplacian of u^n
//   D_c,a   centred differences of u^n for a = 1..3
//   D_c,0   lagged time derivative (u^n - u^{n-1}) / dt
//   F_lag   nonlinearity with the lagged D_c,0
//   D_c,0  += dt/2 (lap_c + F_lag_c + S_c)      second-order predictor for u_t(t_n)
//   u^{n+1} = 2 u^n - u^{n-1} + dt^2 (lap_c + F_c + S_c)
// u^{n+1} overwrites u^{n-1} in place. All variants perform the same operations
// in the same order, so with FP contraction disabled their outputs are
// bitwise identical.

#include <cstddef>
#include <string>
#include <vector>

namespace nullwave {

inline constexpr int kMaxKernelComponents = 4;

struct KernelTerm {
    int j, k, a, l, b;
    double c;
};

struct StepArgs {
    int n = 0;             // interior points per axis
    int n_components = 0;  // at most kMaxKernelComponents
    std::size_t sy = 0;    // padded strides
    std::size_t sz = 0;
    double inv_dx2 = 0.0;
    double inv_2dx = 0.0;
    double inv_dt = 0.0;
    double half_dt = 0.0;
    double dt2 = 0.0;
    const double* cur[kMaxKernelComponents] = {};
    double* prev[kMaxKernelComponents] = {};        // in: u^{n-1}; out: u^{n+1}
    const double* source[kMaxKernelComponents] = {};// S^n, or nullptr for none
    const KernelTerm* terms = nullptr;
    int n_terms = 0;
};

/// Updates interior planes k in [k_begin, k_end) (1-based padded indices) and
/// writes max |(u^n - u^{n-1}) / dt| of each plane to plane_max[k - k_begin].
using StepKernel = void (*)(const StepArgs& args, int k_begin, int k_end, double* plane_max);

enum class KernelIsa { Scalar, Avx2, Neon };

std::string to_string(KernelIsa isa);

void step_kernel_scalar(const StepArgs& args, int k_begin, int k_end, double* plane_max);
#if defined(NULLWAVE_HAVE_AVX2)
void step_kernel_avx2(const StepArgs& args, int k_begin, int k_end, double* plane_max);
#endif
#if defined(NULLWAVE_HAVE_NEON)
void step_kernel_neon(const StepArgs& args, int k_begin, int k_end, double* plane_max);
#endif

/// ISAs compiled in and supported by the running CPU, scalar first.
std::vector<KernelIsa> available_isas();
/// Best available ISA unless NULLWAVE_ISA=scalar|avx2|neon overrides it.
KernelIsa default_isa();
/// Throws UsageError when the requested ISA is not available.
StepKernel select_kernel(KernelIsa isa);

}  // namespace nullwave
