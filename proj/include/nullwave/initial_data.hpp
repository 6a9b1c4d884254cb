#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "nullwave/grid.hpp"

namespace nullwave {

enum class ProfileKind {
    Zero,
    PolynomialBump,  // f = a_f b, g = a_g b with b = (1 - |x - x0|^2 / R^2)^degree inside B_R
    OutgoingShell,   // r f = a W b((r - r0) / W), g = -a b'((r - r0) / W) / r; travels outward only
    UserTable,       // values taken from a snapshot file
};

std::string to_string(ProfileKind k);
ProfileKind parse_profile_kind(const std::string& s);

struct ComponentProfile {
    ProfileKind kind = ProfileKind::Zero;
    double f_amplitude = 1.0;
    double g_amplitude = 0.0;
    double radius = 1.0;  // bump radius
    int degree = 4;
    std::array<double, 3> center{0.0, 0.0, 0.0};
    std::optional<std::array<double, 3>> g_center;  // bump: centre of g when it differs from f's
    double shell_radius = 2.0;  // r0
    double shell_width = 1.0;   // W, must be below r0

    /// Radius of a ball around the origin containing the support.
    double support_radius() const;
    double f(const std::array<double, 3>& x) const;
    double g(const std::array<double, 3>& x) const;
};

/// One-dimensional bump b(x) = (1 - x^2)^degree on [-1, 1] and its derivative.
double bump1d(double x, int degree);
double bump1d_derivative(double x, int degree);

struct InitialData {
    double epsilon = 0.05;
    std::vector<ComponentProfile> components;
    std::string user_table;  // snapshot path used when any component is UserTable
    double user_radius = 0.0;

    std::size_t size() const noexcept { return components.size(); }
    double support_radius() const;
};

/// Sampled Cauchy data (u, u_t) = (eps f, eps g) on the padded grid.
struct SampledData {
    std::vector<PaddedField> u;
    std::vector<PaddedField> ut;
};

SampledData sample(const InitialData& data, const GridSpec& grid);

/// ||(phi, psi)||_H^2 = 1/2 (||grad phi||^2 + ||psi||^2) with forward edge differences,
/// the same discrete gradient the solver's conserved energy uses.
double data_norm_sq(const PaddedField& phi, const PaddedField& psi, double dx);

}  // namespace nullwave
