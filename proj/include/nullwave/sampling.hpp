#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace nullwave {

// Deterministic low-discrepancy samplers used by the sampling-based
// decision procedures (null condition, condition (H)).

/// Radical inverse of `index` in the given prime base (Halton component).
double radical_inverse(std::size_t index, unsigned base);

/// Fibonacci-lattice points on S^2; well spread for any count.
std::vector<std::array<double, 3>> fibonacci_sphere(std::size_t count);

/// `count` unit vectors in R^dim from Halton points pushed through
/// Box-Muller and normalized. For dim == 1 alternates +1/-1.
std::vector<std::vector<double>> quasi_random_unit_vectors(std::size_t count, std::size_t dim,
                                                           std::size_t offset = 0);

}  // namespace nullwave
