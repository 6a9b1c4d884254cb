#pragma once

#include <cstddef>
#include <vector>

namespace nullwave {

/// One classical RK4 step of dy/ds = f(s, y) for any vector-like State
/// supporting size(), operator[] and copy construction.
template <class State, class Rhs>
State rk4_step(const Rhs& f, double s, const State& y, double h) {
    const std::size_t n = y.size();
    auto axpy = [n](const State& base, const State& k, double a) {
        State out = base;
        for (std::size_t i = 0; i < n; ++i) out[i] = base[i] + a * k[i];
        return out;
    };
    const State k1 = f(s, y);
    const State k2 = f(s + 0.5 * h, axpy(y, k1, 0.5 * h));
    const State k3 = f(s + 0.5 * h, axpy(y, k2, 0.5 * h));
    const State k4 = f(s + h, axpy(y, k3, h));
    State out = y;
    for (std::size_t i = 0; i < n; ++i) out[i] = y[i] + (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    return out;
}

}  // namespace nullwave
