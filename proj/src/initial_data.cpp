#include "nullwave/initial_data.hpp"

#include <algorithm>
#include <cmath>

#include "nullwave/errors.hpp"
#include "nullwave/snapshot_io.hpp"

namespace nullwave {

std::string to_string(ProfileKind k) {
    switch (k) {
        case ProfileKind::Zero: return "zero";
        case ProfileKind::PolynomialBump: return "polynomial_bump";
        case ProfileKind::OutgoingShell: return "outgoing_shell";
        case ProfileKind::UserTable: return "user_table";
    }
    return "unknown";
}

ProfileKind parse_profile_kind(const std::string& s) {
    if (s == "zero") return ProfileKind::Zero;
    if (s == "polynomial_bump" || s == "bump") return ProfileKind::PolynomialBump;
    if (s == "outgoing_shell" || s == "shell") return ProfileKind::OutgoingShell;
    if (s == "user_table") return ProfileKind::UserTable;
    throw UsageError("unknown profile kind '" + s + "'");
}

double bump1d(double x, int degree) {
    if (std::abs(x) >= 1.0) return 0.0;
    return std::pow(1.0 - x * x, degree);
}

double bump1d_derivative(double x, int degree) {
    if (std::abs(x) >= 1.0 || degree == 0) return 0.0;
    return -2.0 * degree * x * std::pow(1.0 - x * x, degree - 1);
}

double ComponentProfile::support_radius() const {
    switch (kind) {
        case ProfileKind::Zero:
        case ProfileKind::UserTable: return 0.0;
        case ProfileKind::PolynomialBump: {
            const auto& c = g_center.value_or(center);
            return std::max(std::hypot(center[0], center[1], center[2]), std::hypot(c[0], c[1], c[2])) + radius;
        }
        case ProfileKind::OutgoingShell: return shell_radius + shell_width;
    }
    return 0.0;
}

namespace {

double radius_of(const std::array<double, 3>& x) { return std::hypot(x[0], x[1], x[2]); }

double bump3d(const ComponentProfile& p, const std::array<double, 3>& c, const std::array<double, 3>& x) {
    const double dx = x[0] - c[0];
    const double dy = x[1] - c[1];
    const double dz = x[2] - c[2];
    const double q = (dx * dx + dy * dy + dz * dz) / (p.radius * p.radius);
    if (q >= 1.0) return 0.0;
    return std::pow(1.0 - q, p.degree);
}

void validate(const ComponentProfile& p) {
    if (p.kind == ProfileKind::PolynomialBump && (!(p.radius > 0.0) || p.degree < 1)) {
        throw UsageError("polynomial_bump: need radius > 0 and degree >= 1");
    }
    if (p.kind == ProfileKind::OutgoingShell && (!(p.shell_width > 0.0) || !(p.shell_radius > p.shell_width) || p.degree < 2)) {
        throw UsageError("outgoing_shell: need 0 < width < radius and degree >= 2");
    }
}

}  // namespace

double ComponentProfile::f(const std::array<double, 3>& x) const {
    switch (kind) {
        case ProfileKind::PolynomialBump: return f_amplitude * bump3d(*this, center, x);
        case ProfileKind::OutgoingShell: {
            const double r = radius_of(x);
            const double s = (r - shell_radius) / shell_width;
            if (std::abs(s) >= 1.0) return 0.0;
            return f_amplitude * shell_width * bump1d(s, degree) / r;
        }
        default: return 0.0;
    }
}

double ComponentProfile::g(const std::array<double, 3>& x) const {
    switch (kind) {
        case ProfileKind::PolynomialBump: return g_amplitude * bump3d(*this, g_center.value_or(center), x);
        case ProfileKind::OutgoingShell: {
            // r u = F(r - t) at t = 0, so u_t = -F'(r) / r
            const double r = radius_of(x);
            const double s = (r - shell_radius) / shell_width;
            if (std::abs(s) >= 1.0) return 0.0;
            return -f_amplitude * bump1d_derivative(s, degree) / r;
        }
        default: return 0.0;
    }
}

double InitialData::support_radius() const {
    double r = 0.0;
    for (const auto& c : components) {
        r = std::max(r, c.kind == ProfileKind::UserTable ? user_radius : c.support_radius());
    }
    return r;
}

SampledData sample(const InitialData& data, const GridSpec& grid) {
    grid.validate();
    if (data.components.empty()) throw UsageError("initial data: no components");
    if (!(data.epsilon > 0.0)) throw UsageError("initial data: epsilon must be positive");
    const int n = grid.points_per_axis;
    SampledData out;
    out.u.assign(data.size(), PaddedField(n));
    out.ut.assign(data.size(), PaddedField(n));

    FieldSnapshot table;
    bool have_table = false;
    for (std::size_t c = 0; c < data.size(); ++c) {
        const auto& p = data.components[c];
        validate(p);
        if (p.kind == ProfileKind::Zero) continue;
        if (p.kind == ProfileKind::UserTable) {
            if (!have_table) {
                table = read_snapshot(data.user_table);
                have_table = true;
                if (table.grid.points_per_axis != n || std::abs(table.grid.half_width - grid.half_width) > 1e-12 * grid.half_width) {
                    throw UsageError("user_table: snapshot grid does not match the run grid");
                }
            }
            if (c >= table.n_components()) throw UsageError("user_table: snapshot has too few components");
            std::vector<double> u = table.u[c];
            std::vector<double> ut = table.ut[c];
            for (auto& v : u) v *= data.epsilon;
            for (auto& v : ut) v *= data.epsilon;
            out.u[c].set_interior(u);
            out.ut[c].set_interior(ut);
            continue;
        }
        for (int k = 1; k <= n; ++k) {
            for (int j = 1; j <= n; ++j) {
                for (int i = 1; i <= n; ++i) {
                    const std::array<double, 3> x{grid.coord(i - 1), grid.coord(j - 1), grid.coord(k - 1)};
                    out.u[c].at(i, j, k) = data.epsilon * p.f(x);
                    out.ut[c].at(i, j, k) = data.epsilon * p.g(x);
                }
            }
        }
    }
    return out;
}

double data_norm_sq(const PaddedField& phi, const PaddedField& psi, double dx) {
    const int n = phi.n();
    double grad = 0.0;
    double kin = 0.0;
    for (int k = 0; k <= n; ++k) {
        for (int j = 0; j <= n; ++j) {
            for (int i = 0; i <= n; ++i) {
                const double v = phi.at(i, j, k);
                const bool in_j = j >= 1;
                const bool in_k = k >= 1;
                const bool in_i = i >= 1;
                if (in_j && in_k) {
                    const double d = phi.at(i + 1, j, k) - v;
                    grad += d * d;
                }
                if (in_i && in_k) {
                    const double d = phi.at(i, j + 1, k) - v;
                    grad += d * d;
                }
                if (in_i && in_j) {
                    const double d = phi.at(i, j, k + 1) - v;
                    grad += d * d;
                }
                if (in_i && in_j && in_k) kin += psi.at(i, j, k) * psi.at(i, j, k);
            }
        }
    }
    return 0.5 * (grad * dx + kin * dx * dx * dx);
}

}  // namespace nullwave
