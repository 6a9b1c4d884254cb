#include "nullwave/sampling.hpp"

#include <cmath>
#include <numbers>

namespace nullwave {

namespace {
constexpr unsigned kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};
}

double radical_inverse(std::size_t index, unsigned base) {
    double result = 0.0;
    double f = 1.0 / base;
    while (index > 0) {
        result += f * static_cast<double>(index % base);
        index /= base;
        f /= base;
    }
    return result;
}

std::vector<std::array<double, 3>> fibonacci_sphere(std::size_t count) {
    std::vector<std::array<double, 3>> points;
    points.reserve(count);
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (std::size_t i = 0; i < count; ++i) {
        const double z = 1.0 - (2.0 * static_cast<double>(i) + 1.0) / static_cast<double>(count);
        const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double phi = golden * static_cast<double>(i);
        points.push_back({rho * std::cos(phi), rho * std::sin(phi), z});
    }
    return points;
}

std::vector<std::vector<double>> quasi_random_unit_vectors(std::size_t count, std::size_t dim,
                                                           std::size_t offset) {
    std::vector<std::vector<double>> out;
    out.reserve(count);
    if (dim == 1) {
        for (std::size_t i = 0; i < count; ++i) {
            out.push_back({(i + offset) % 2 == 0 ? 1.0 : -1.0});
        }
        return out;
    }
    // Box-Muller needs pairs of uniforms; the Halton dimensions used are 2*ceil(dim/2).
    const std::size_t pairs = (dim + 1) / 2;
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t idx = i + offset + 1;
        std::vector<double> v(dim);
        for (std::size_t p = 0; p < pairs; ++p) {
            double u1 = radical_inverse(idx, kPrimes[(2 * p) % 16]);
            const double u2 = radical_inverse(idx, kPrimes[(2 * p + 1) % 16]);
            u1 = std::max(u1, 1e-300);
            const double mag = std::sqrt(-2.0 * std::log(u1));
            const double ang = 2.0 * std::numbers::pi * u2;
            v[2 * p] = mag * std::cos(ang);
            if (2 * p + 1 < dim) v[2 * p + 1] = mag * std::sin(ang);
        }
        double norm = 0.0;
        for (double x : v) norm += x * x;
        norm = std::sqrt(norm);
        if (norm == 0.0) {
            v.assign(dim, 0.0);
            v[0] = 1.0;
        } else {
            for (double& x : v) x /= norm;
        }
        out.push_back(std::move(v));
    }
    return out;
}

}  // namespace nullwave
