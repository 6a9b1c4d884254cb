#include <cstdlib>
#include <string>

#include "nullwave/errors.hpp"
#include "nullwave/kernels.hpp"

namespace nullwave {

std::string to_string(KernelIsa isa) {
    switch (isa) {
        case KernelIsa::Scalar: return "scalar";
        case KernelIsa::Avx2: return "avx2";
        case KernelIsa::Neon: return "neon";
    }
    return "unknown";
}

std::vector<KernelIsa> available_isas() {
    std::vector<KernelIsa> out{KernelIsa::Scalar};
#if defined(NULLWAVE_HAVE_AVX2)
    __builtin_cpu_init();
    if (__builtin_cpu_supports("avx2")) out.push_back(KernelIsa::Avx2);
#endif
#if defined(NULLWAVE_HAVE_NEON)
    out.push_back(KernelIsa::Neon);  // Advanced SIMD is mandatory on AArch64
#endif
    return out;
}

KernelIsa default_isa() {
    const auto avail = available_isas();
    if (const char* env = std::getenv("NULLWAVE_ISA")) {
        const std::string want(env);
        for (KernelIsa isa : avail) {
            if (to_string(isa) == want) return isa;
        }
        throw UsageError("NULLWAVE_ISA=" + want + " is not available on this machine");
    }
    return avail.back();
}

StepKernel select_kernel(KernelIsa isa) {
    switch (isa) {
        case KernelIsa::Scalar: return &step_kernel_scalar;
        case KernelIsa::Avx2:
#if defined(NULLWAVE_HAVE_AVX2)
            if (__builtin_cpu_supports("avx2")) return &step_kernel_avx2;
#endif
            break;
        case KernelIsa::Neon:
#if defined(NULLWAVE_HAVE_NEON)
            return &step_kernel_neon;
#endif
            break;
    }
    throw UsageError("kernel ISA '" + to_string(isa) + "' is not available");
}

}  // namespace nullwave
