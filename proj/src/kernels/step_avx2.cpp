#include <immintrin.h>

#include "point_scalar.hpp"

namespace nullwave {

namespace {

inline void nonlinearity_avx2(const StepArgs& a, const __m256d (*D)[4], __m256d* F) {
    for (int c = 0; c < a.n_components; ++c) F[c] = _mm256_setzero_pd();
    for (int t = 0; t < a.n_terms; ++t) {
        const KernelTerm& term = a.terms[t];
        const __m256d prod = _mm256_mul_pd(_mm256_mul_pd(_mm256_set1_pd(term.c), D[term.k][term.a]), D[term.l][term.b]);
        F[term.j] = _mm256_add_pd(F[term.j], prod);
    }
}

inline __m256d update4(const StepArgs& a, std::size_t p) {
    __m256d lap[kMaxKernelComponents];
    __m256d D[kMaxKernelComponents][4];
    __m256d F[kMaxKernelComponents];
    __m256d S[kMaxKernelComponents];
    __m256d up[kMaxKernelComponents];
    const __m256d six = _mm256_set1_pd(6.0);
    const __m256d two = _mm256_set1_pd(2.0);
    const __m256d inv_dx2 = _mm256_set1_pd(a.inv_dx2);
    const __m256d inv_2dx = _mm256_set1_pd(a.inv_2dx);
    const __m256d inv_dt = _mm256_set1_pd(a.inv_dt);
    const __m256d sign = _mm256_set1_pd(-0.0);
    __m256d m = _mm256_setzero_pd();
    const int N = a.n_components;
    for (int c = 0; c < N; ++c) {
        const double* u = a.cur[c];
        const __m256d uc = _mm256_loadu_pd(u + p);
        const __m256d xp = _mm256_loadu_pd(u + p + 1);
        const __m256d xm = _mm256_loadu_pd(u + p - 1);
        const __m256d yp = _mm256_loadu_pd(u + p + a.sy);
        const __m256d ym = _mm256_loadu_pd(u + p - a.sy);
        const __m256d zp = _mm256_loadu_pd(u + p + a.sz);
        const __m256d zm = _mm256_loadu_pd(u + p - a.sz);
        __m256d l = _mm256_add_pd(xp, xm);
        l = _mm256_add_pd(l, yp);
        l = _mm256_add_pd(l, ym);
        l = _mm256_add_pd(l, zp);
        l = _mm256_add_pd(l, zm);
        l = _mm256_sub_pd(l, _mm256_mul_pd(six, uc));
        lap[c] = _mm256_mul_pd(l, inv_dx2);
        D[c][1] = _mm256_mul_pd(_mm256_sub_pd(xp, xm), inv_2dx);
        D[c][2] = _mm256_mul_pd(_mm256_sub_pd(yp, ym), inv_2dx);
        D[c][3] = _mm256_mul_pd(_mm256_sub_pd(zp, zm), inv_2dx);
        up[c] = _mm256_loadu_pd(a.prev[c] + p);
        D[c][0] = _mm256_mul_pd(_mm256_sub_pd(uc, up[c]), inv_dt);
        m = _mm256_max_pd(m, _mm256_andnot_pd(sign, D[c][0]));
        S[c] = a.source[c] ? _mm256_loadu_pd(a.source[c] + p) : _mm256_setzero_pd();
    }
    if (a.n_terms > 0) {
        const __m256d half_dt = _mm256_set1_pd(a.half_dt);
        nonlinearity_avx2(a, D, F);
        for (int c = 0; c < N; ++c) {
            D[c][0] = _mm256_add_pd(D[c][0], _mm256_mul_pd(half_dt, _mm256_add_pd(_mm256_add_pd(lap[c], F[c]), S[c])));
        }
        nonlinearity_avx2(a, D, F);
    } else {
        for (int c = 0; c < N; ++c) F[c] = _mm256_setzero_pd();
    }
    const __m256d dt2 = _mm256_set1_pd(a.dt2);
    for (int c = 0; c < N; ++c) {
        const __m256d uc = _mm256_loadu_pd(a.cur[c] + p);
        const __m256d acc = _mm256_add_pd(_mm256_add_pd(lap[c], F[c]), S[c]);
        const __m256d next = _mm256_add_pd(_mm256_sub_pd(_mm256_mul_pd(two, uc), up[c]), _mm256_mul_pd(dt2, acc));
        _mm256_storeu_pd(a.prev[c] + p, next);
    }
    return m;
}

}  // namespace

void step_kernel_avx2(const StepArgs& args, int k_begin, int k_end, double* plane_max) {
    for (int k = k_begin; k < k_end; ++k) {
        __m256d mv = _mm256_setzero_pd();
        double m = 0.0;
        for (int j = 1; j <= args.n; ++j) {
            const std::size_t row = args.sz * static_cast<std::size_t>(k) + args.sy * static_cast<std::size_t>(j);
            int i = 1;
            for (; i + 3 <= args.n; i += 4) mv = _mm256_max_pd(mv, update4(args, row + static_cast<std::size_t>(i)));
            for (; i <= args.n; ++i) {
                const double v = detail::update_point_scalar(args, row + static_cast<std::size_t>(i));
                m = (m > v) ? m : v;
            }
        }
        alignas(32) double lanes[4];
        _mm256_store_pd(lanes, mv);
        for (double v : lanes) m = (m > v) ? m : v;
        plane_max[k - k_begin] = m;
    }
}

}  // namespace nullwave
