#include <arm_neon.h>

#include "point_scalar.hpp"

namespace nullwave {

namespace {

inline void nonlinearity_neon(const StepArgs& a, const float64x2_t (*D)[4], float64x2_t* F) {
    for (int c = 0; c < a.n_components; ++c) F[c] = vdupq_n_f64(0.0);
    for (int t = 0; t < a.n_terms; ++t) {
        const KernelTerm& term = a.terms[t];
        const float64x2_t prod = vmulq_f64(vmulq_f64(vdupq_n_f64(term.c), D[term.k][term.a]), D[term.l][term.b]);
        F[term.j] = vaddq_f64(F[term.j], prod);
    }
}

// lane-wise (m > v) ? m : v, matching the scalar reduction
inline float64x2_t max_like_scalar(float64x2_t m, float64x2_t v) {
    return vbslq_f64(vcgtq_f64(m, v), m, v);
}

inline float64x2_t update2(const StepArgs& a, std::size_t p) {
    float64x2_t lap[kMaxKernelComponents];
    float64x2_t D[kMaxKernelComponents][4];
    float64x2_t F[kMaxKernelComponents];
    float64x2_t S[kMaxKernelComponents];
    float64x2_t up[kMaxKernelComponents];
    const float64x2_t six = vdupq_n_f64(6.0);
    const float64x2_t two = vdupq_n_f64(2.0);
    const float64x2_t inv_dx2 = vdupq_n_f64(a.inv_dx2);
    const float64x2_t inv_2dx = vdupq_n_f64(a.inv_2dx);
    const float64x2_t inv_dt = vdupq_n_f64(a.inv_dt);
    float64x2_t m = vdupq_n_f64(0.0);
    const int N = a.n_components;
    for (int c = 0; c < N; ++c) {
        const double* u = a.cur[c];
        const float64x2_t uc = vld1q_f64(u + p);
        const float64x2_t xp = vld1q_f64(u + p + 1);
        const float64x2_t xm = vld1q_f64(u + p - 1);
        const float64x2_t yp = vld1q_f64(u + p + a.sy);
        const float64x2_t ym = vld1q_f64(u + p - a.sy);
        const float64x2_t zp = vld1q_f64(u + p + a.sz);
        const float64x2_t zm = vld1q_f64(u + p - a.sz);
        float64x2_t l = vaddq_f64(xp, xm);
        l = vaddq_f64(l, yp);
        l = vaddq_f64(l, ym);
        l = vaddq_f64(l, zp);
        l = vaddq_f64(l, zm);
        l = vsubq_f64(l, vmulq_f64(six, uc));
        lap[c] = vmulq_f64(l, inv_dx2);
        D[c][1] = vmulq_f64(vsubq_f64(xp, xm), inv_2dx);
        D[c][2] = vmulq_f64(vsubq_f64(yp, ym), inv_2dx);
        D[c][3] = vmulq_f64(vsubq_f64(zp, zm), inv_2dx);
        up[c] = vld1q_f64(a.prev[c] + p);
        D[c][0] = vmulq_f64(vsubq_f64(uc, up[c]), inv_dt);
        m = max_like_scalar(m, vabsq_f64(D[c][0]));
        S[c] = a.source[c] ? vld1q_f64(a.source[c] + p) : vdupq_n_f64(0.0);
    }
    if (a.n_terms > 0) {
        const float64x2_t half_dt = vdupq_n_f64(a.half_dt);
        nonlinearity_neon(a, D, F);
        for (int c = 0; c < N; ++c) {
            D[c][0] = vaddq_f64(D[c][0], vmulq_f64(half_dt, vaddq_f64(vaddq_f64(lap[c], F[c]), S[c])));
        }
        nonlinearity_neon(a, D, F);
    } else {
        for (int c = 0; c < N; ++c) F[c] = vdupq_n_f64(0.0);
    }
    const float64x2_t dt2 = vdupq_n_f64(a.dt2);
    for (int c = 0; c < N; ++c) {
        const float64x2_t uc = vld1q_f64(a.cur[c] + p);
        const float64x2_t acc = vaddq_f64(vaddq_f64(lap[c], F[c]), S[c]);
        const float64x2_t next = vaddq_f64(vsubq_f64(vmulq_f64(two, uc), up[c]), vmulq_f64(dt2, acc));
        vst1q_f64(a.prev[c] + p, next);
    }
    return m;
}

}  // namespace

void step_kernel_neon(const StepArgs& args, int k_begin, int k_end, double* plane_max) {
    for (int k = k_begin; k < k_end; ++k) {
        float64x2_t mv = vdupq_n_f64(0.0);
        double m = 0.0;
        for (int j = 1; j <= args.n; ++j) {
            const std::size_t row = args.sz * static_cast<std::size_t>(k) + args.sy * static_cast<std::size_t>(j);
            int i = 1;
            for (; i + 1 <= args.n; i += 2) mv = max_like_scalar(mv, update2(args, row + static_cast<std::size_t>(i)));
            for (; i <= args.n; ++i) {
                const double v = detail::update_point_scalar(args, row + static_cast<std::size_t>(i));
                m = (m > v) ? m : v;
            }
        }
        const double lanes[2] = {vgetq_lane_f64(mv, 0), vgetq_lane_f64(mv, 1)};
        for (double v : lanes) m = (m > v) ? m : v;
        plane_max[k - k_begin] = m;
    }
}

}  // namespace nullwave
