#pragma once

// One grid point of the leapfrog update, shared by the scalar kernel and the
// remainder loops of the vector kernels.

#include <cmath>

#include "nullwave/kernels.hpp"

namespace nullwave::detail {

inline void nonlinearity_scalar(const StepArgs& a, const double (*D)[4], double* F) {
    for (int c = 0; c < a.n_components; ++c) F[c] = 0.0;
    for (int t = 0; t < a.n_terms; ++t) {
        const KernelTerm& term = a.terms[t];
        F[term.j] = F[term.j] + (term.c * D[term.k][term.a]) * D[term.l][term.b];
    }
}

inline double update_point_scalar(const StepArgs& a, std::size_t p) {
    double lap[kMaxKernelComponents];
    double D[kMaxKernelComponents][4];
    double F[kMaxKernelComponents];
    double S[kMaxKernelComponents];
    double up[kMaxKernelComponents];
    double m = 0.0;
    const int N = a.n_components;
    for (int c = 0; c < N; ++c) {
        const double* u = a.cur[c];
        const double uc = u[p];
        double l = u[p + 1] + u[p - 1];
        l = l + u[p + a.sy];
        l = l + u[p - a.sy];
        l = l + u[p + a.sz];
        l = l + u[p - a.sz];
        l = l - 6.0 * uc;
        lap[c] = l * a.inv_dx2;
        D[c][1] = (u[p + 1] - u[p - 1]) * a.inv_2dx;
        D[c][2] = (u[p + a.sy] - u[p - a.sy]) * a.inv_2dx;
        D[c][3] = (u[p + a.sz] - u[p - a.sz]) * a.inv_2dx;
        up[c] = a.prev[c][p];
        D[c][0] = (uc - up[c]) * a.inv_dt;
        const double ab = std::fabs(D[c][0]);
        m = (m > ab) ? m : ab;
        S[c] = a.source[c] ? a.source[c][p] : 0.0;
    }
    if (a.n_terms > 0) {
        nonlinearity_scalar(a, D, F);
        for (int c = 0; c < N; ++c) D[c][0] = D[c][0] + a.half_dt * ((lap[c] + F[c]) + S[c]);
        nonlinearity_scalar(a, D, F);
    } else {
        for (int c = 0; c < N; ++c) F[c] = 0.0;
    }
    for (int c = 0; c < N; ++c) {
        const double uc = a.cur[c][p];
        const double acc = (lap[c] + F[c]) + S[c];
        a.prev[c][p] = (2.0 * uc - up[c]) + a.dt2 * acc;
    }
    return m;
}

}  // namespace nullwave::detail
