#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace nullwave {

/// Cell-centred grid on [-L, L]^3 with n points per axis, x_i = -L + (i + 1/2) dx.
struct GridSpec {
    double half_width = 1.0;  // L
    int points_per_axis = 32; // n
    double cfl = 0.5;         // dt = cfl * dx, must lie in (0, 1/sqrt(3))

    double dx() const { return 2.0 * half_width / points_per_axis; }
    double coord(int i) const { return -half_width + (i + 0.5) * dx(); }
    std::size_t cells() const {
        const auto n = static_cast<std::size_t>(points_per_axis);
        return n * n * n;
    }

    /// Throws UsageError on a bad CFL number or non-positive sizes.
    void validate() const;
    /// Throws UsageError unless L >= t_end + R + 2 dx, so the boundary is causally invisible.
    void validate_horizon(double t_end, double support_radius) const;
};

/// One scalar field on the grid padded by a zero ghost layer on every side.
/// Interior indices run over 1..n; storage is x-fastest.
class PaddedField {
public:
    PaddedField() = default;
    explicit PaddedField(int n);

    int n() const noexcept { return n_; }
    std::size_t stride_y() const noexcept { return sy_; }
    std::size_t stride_z() const noexcept { return sz_; }
    std::size_t index(int i, int j, int k) const noexcept {
        return static_cast<std::size_t>(i) + sy_ * static_cast<std::size_t>(j) + sz_ * static_cast<std::size_t>(k);
    }
    double& at(int i, int j, int k) noexcept { return data_[index(i, j, k)]; }
    double at(int i, int j, int k) const noexcept { return data_[index(i, j, k)]; }

    double* data() noexcept { return data_.data(); }
    const double* data() const noexcept { return data_.data(); }
    void fill(double v);

    /// Interior values in x-fastest order without the ghost layer.
    std::vector<double> interior() const;
    void set_interior(const std::vector<double>& values);

private:
    int n_ = 0;
    std::size_t sy_ = 0;
    std::size_t sz_ = 0;
    std::vector<double> data_;
};

/// Trilinear interpolation of an interior field at a physical point; points
/// outside the cell-centre lattice see the zero ghost values.
double trilinear(const PaddedField& f, const GridSpec& grid, const std::array<double, 3>& x);

}  // namespace nullwave
