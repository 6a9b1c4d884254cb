#include "nullwave/grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nullwave/errors.hpp"

namespace nullwave {

void GridSpec::validate() const {
    if (!(half_width > 0.0)) throw UsageError("grid: L must be positive");
    if (points_per_axis < 4) throw UsageError("grid: n must be at least 4");
    if (!(cfl > 0.0) || !(cfl < 1.0 / std::sqrt(3.0))) throw UsageError("grid: cfl must lie in (0, 1/sqrt(3))");
}

void GridSpec::validate_horizon(double t_end, double support_radius) const {
    validate();
    if (half_width < t_end + support_radius + 2.0 * dx()) {
        std::ostringstream os;
        os << "grid: L = " << half_width << " is smaller than t_end + R + 2dx = " << t_end + support_radius + 2.0 * dx();
        throw UsageError(os.str());
    }
}

PaddedField::PaddedField(int n)
    : n_(n),
      sy_(static_cast<std::size_t>(n + 2)),
      sz_(static_cast<std::size_t>(n + 2) * static_cast<std::size_t>(n + 2)),
      data_(sz_ * static_cast<std::size_t>(n + 2), 0.0) {}

void PaddedField::fill(double v) {
    std::fill(data_.begin(), data_.end(), 0.0);
    for (int k = 1; k <= n_; ++k) {
        for (int j = 1; j <= n_; ++j) {
            double* row = data_.data() + index(1, j, k);
            std::fill(row, row + n_, v);
        }
    }
}

std::vector<double> PaddedField::interior() const {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_));
    for (int k = 1; k <= n_; ++k) {
        for (int j = 1; j <= n_; ++j) {
            const double* row = data_.data() + index(1, j, k);
            out.insert(out.end(), row, row + n_);
        }
    }
    return out;
}

void PaddedField::set_interior(const std::vector<double>& values) {
    const auto n = static_cast<std::size_t>(n_);
    if (values.size() != n * n * n) throw UsageError("PaddedField: interior size mismatch");
    std::size_t src = 0;
    for (int k = 1; k <= n_; ++k) {
        for (int j = 1; j <= n_; ++j) {
            std::copy_n(values.data() + src, n, data_.data() + index(1, j, k));
            src += n;
        }
    }
}

double trilinear(const PaddedField& f, const GridSpec& grid, const std::array<double, 3>& x) {
    const double dx = grid.dx();
    const int n = f.n();
    // padded index coordinate: interior cell i (1-based) sits at x = -L + (i - 1/2) dx
    std::array<int, 3> i0{};
    std::array<double, 3> w{};
    for (int d = 0; d < 3; ++d) {
        const double q = (x[static_cast<std::size_t>(d)] + grid.half_width) / dx + 0.5;
        const double fl = std::floor(q);
        if (fl < 0.0 || fl > n) return 0.0;  // beyond the ghost layer the field is zero
        i0[static_cast<std::size_t>(d)] = static_cast<int>(fl);
        w[static_cast<std::size_t>(d)] = q - fl;
    }
    const int i = i0[0];
    const int j = i0[1];
    const int k = i0[2];
    const double c00 = f.at(i, j, k) * (1.0 - w[0]) + f.at(i + 1, j, k) * w[0];
    const double c10 = f.at(i, j + 1, k) * (1.0 - w[0]) + f.at(i + 1, j + 1, k) * w[0];
    const double c01 = f.at(i, j, k + 1) * (1.0 - w[0]) + f.at(i + 1, j, k + 1) * w[0];
    const double c11 = f.at(i, j + 1, k + 1) * (1.0 - w[0]) + f.at(i + 1, j + 1, k + 1) * w[0];
    const double c0 = c00 * (1.0 - w[1]) + c10 * w[1];
    const double c1 = c01 * (1.0 - w[1]) + c11 * w[1];
    return c0 * (1.0 - w[2]) + c1 * w[2];
}

}  // namespace nullwave
