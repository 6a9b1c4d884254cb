#include "nullwave/radiation.hpp"

#include <gsl/gsl_integration.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "nullwave/errors.hpp"
#include "parallel.hpp"

namespace nullwave {

SphereQuadrature SphereQuadrature::product_gauss(int n_theta) {
    if (n_theta < 1) throw UsageError("sphere quadrature: n_theta must be positive");
    SphereQuadrature q;
    q.n_theta = n_theta;
    q.n_phi = 2 * n_theta;
    q.degree = 2 * n_theta - 1;
    gsl_integration_glfixed_table* table = gsl_integration_glfixed_table_alloc(static_cast<std::size_t>(n_theta));
    if (table == nullptr) throw NumericalError("sphere quadrature: GSL table allocation failed");
    std::vector<double> z(static_cast<std::size_t>(n_theta));
    std::vector<double> wz(static_cast<std::size_t>(n_theta));
    for (int i = 0; i < n_theta; ++i) {
        gsl_integration_glfixed_point(-1.0, 1.0, static_cast<std::size_t>(i), &z[static_cast<std::size_t>(i)],
                                      &wz[static_cast<std::size_t>(i)], table);
    }
    gsl_integration_glfixed_table_free(table);
    std::sort(z.begin(), z.end());

    const int np = q.n_phi;
    const std::size_t total = static_cast<std::size_t>(n_theta) * static_cast<std::size_t>(np);
    std::vector<std::array<double, 3>> pts(total);
    std::vector<double> w(total);
    auto idx = [np](int i, int k) { return static_cast<std::size_t>(i) * static_cast<std::size_t>(np) + static_cast<std::size_t>(k); };
    // Ring i and ring n_theta-1-i are mirror images; build the upper one and
    // negate it so antipodes are exact.
    for (int i = 0; i < n_theta; ++i) {
        const int mirror = n_theta - 1 - i;
        for (int k = 0; k < np; ++k) {
            const int ka = (k + np / 2) % np;
            const bool derived = i < mirror || (i == mirror && k >= np / 2);
            if (derived) continue;
            const double zi = i == mirror ? 0.0 : z[static_cast<std::size_t>(i)];
            const double s = std::sqrt(std::max(0.0, 1.0 - zi * zi));
            const double phi = 2.0 * std::numbers::pi * (k + 0.5) / np;
            pts[idx(i, k)] = {s * std::cos(phi), s * std::sin(phi), zi};
            pts[idx(mirror, ka)] = {-pts[idx(i, k)][0], -pts[idx(i, k)][1], -pts[idx(i, k)][2]};
            const double wi = 0.5 * (wz[static_cast<std::size_t>(i)] + wz[static_cast<std::size_t>(mirror)]) *
                              2.0 * std::numbers::pi / np;
            w[idx(i, k)] = wi;
            w[idx(mirror, ka)] = wi;
        }
    }
    q.nodes.reserve(total);
    q.antipode.resize(total);
    for (int i = 0; i < n_theta; ++i) {
        for (int k = 0; k < np; ++k) {
            // renormalize without breaking the exact negation symmetry
            auto p = pts[idx(i, k)];
            const double r = std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
            q.nodes.emplace_back(std::array<double, 3>{p[0] / r, p[1] / r, p[2] / r});
            q.weights.push_back(w[idx(i, k)]);
            q.antipode[idx(i, k)] = idx(n_theta - 1 - i, (k + np / 2) % np);
        }
    }
    return q;
}

double SphereQuadrature::integrate(const std::function<double(const SphereDirection&)>& fn) const {
    double s = 0.0;
    for (std::size_t w = 0; w < nodes.size(); ++w) s += weights[w] * fn(nodes[w]);
    return s;
}

double sphere_monomial_integral(int a, int b, int c) {
    if (a % 2 != 0 || b % 2 != 0 || c % 2 != 0) return 0.0;
    const double ga = std::tgamma(0.5 * (a + 1));
    const double gb = std::tgamma(0.5 * (b + 1));
    const double gc = std::tgamma(0.5 * (c + 1));
    return 2.0 * ga * gb * gc / std::tgamma(0.5 * (a + b + c + 3));
}

double quadrature_self_test(const SphereQuadrature& quad, int degree) {
    double worst = 0.0;
    for (int a = 0; a <= degree; ++a) {
        for (int b = 0; a + b <= degree; ++b) {
            for (int c = 0; a + b + c <= degree; ++c) {
                const double got = quad.integrate([&](const SphereDirection& d) {
                    return std::pow(d[0], a) * std::pow(d[1], b) * std::pow(d[2], c);
                });
                worst = std::max(worst, std::abs(got - sphere_monomial_integral(a, b, c)));
            }
        }
    }
    return worst;
}

std::vector<double> uniform_grid(double lo, double hi, double step) {
    if (!(step > 0.0) || !(hi >= lo)) throw UsageError("uniform_grid: need step > 0 and hi >= lo");
    const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
    std::vector<double> g(count);
    for (std::size_t i = 0; i < count; ++i) g[i] = lo + static_cast<double>(i) * step;
    return g;
}

namespace {

bool canonical(const std::array<double, 3>& w) {
    for (double c : w) {
        if (c > 0.0) return true;
        if (c < 0.0) return false;
    }
    return true;
}

std::array<double, 3> cross(const std::array<double, 3>& a, const std::array<double, 3>& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

bool symmetric(const std::vector<double>& g) {
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (g[i] != -g[g.size() - 1 - i]) return false;
    }
    return true;
}

}  // namespace

double radon_plane(const PaddedField& field, const GridSpec& grid, double sigma, const SphereDirection& omega,
                   const RadonOptions& options) {
    std::array<double, 3> w = omega.omega();
    if (!canonical(w)) {
        w = {-w[0], -w[1], -w[2]};
        sigma = -sigma;
    }
    const double dx = grid.dx();
    const double spread = std::sqrt(3.0) * dx;  // support growth of the trilinear interpolant
    double rho = std::sqrt(3.0) * grid.half_width;
    if (options.support_radius > 0.0) {
        const double R = options.support_radius + spread;
        if (std::abs(sigma) >= R) return 0.0;
        rho = std::sqrt(R * R - sigma * sigma);
    }
    const double h = options.plane_step > 0.0 ? options.plane_step : dx;

    std::size_t axis = 0;
    for (std::size_t i = 1; i < 3; ++i) {
        if (std::abs(w[i]) < std::abs(w[axis])) axis = i;
    }
    std::array<double, 3> e{0.0, 0.0, 0.0};
    e[axis] = 1.0;
    std::array<double, 3> e1 = cross(w, e);
    const double n1 = std::sqrt(e1[0] * e1[0] + e1[1] * e1[1] + e1[2] * e1[2]);
    for (double& c : e1) c /= n1;
    const std::array<double, 3> e2 = cross(w, e1);

    const auto m = static_cast<int>(std::ceil(2.0 * rho / h));
    double sum = 0.0;
    for (int jb = 0; jb < m; ++jb) {
        const double b = (jb + 0.5 - 0.5 * m) * h;
        double row = 0.0;
        for (int ia = 0; ia < m; ++ia) {
            const double a = (ia + 0.5 - 0.5 * m) * h;
            const std::array<double, 3> y{sigma * w[0] + a * e1[0] + b * e2[0], sigma * w[1] + a * e1[1] + b * e2[1],
                                          sigma * w[2] + a * e1[2] + b * e2[2]};
            row += trilinear(field, grid, y);
        }
        sum += row;
    }
    return sum * h * h;
}

double TranslationData::dsigma() const {
    if (sigma.size() < 2) return 0.0;
    return (sigma.back() - sigma.front()) / static_cast<double>(sigma.size() - 1);
}

double TranslationData::l2_norm() const {
    const std::size_t ns = sigma.size();
    double total = 0.0;
    for (std::size_t w = 0; w < quad.size(); ++w) {
        double s = 0.0;
        for (std::size_t i = 0; i < ns; ++i) s += values[w * ns + i] * values[w * ns + i];
        total += quad.weights[w] * s;
    }
    return std::sqrt(total * dsigma());
}

TranslationData radon_transform(const PaddedField& field, const GridSpec& grid, const std::vector<double>& sigma,
                                const SphereQuadrature& quad, const RadonOptions& options) {
    TranslationData out;
    out.sigma = sigma;
    out.quad = quad;
    const std::size_t ns = sigma.size();
    out.values.assign(ns * quad.size(), 0.0);
    // antipodal nodes reuse the canonical plane when the grid is symmetric
    const bool reuse = symmetric(sigma);
    std::vector<int> todo;
    for (std::size_t w = 0; w < quad.size(); ++w) {
        if (!reuse || canonical(quad.nodes[w].omega())) todo.push_back(static_cast<int>(w));
    }
    detail::for_slabs(options.threads, 0, static_cast<int>(todo.size()), [&](int b, int e) {
        for (int t = b; t < e; ++t) {
            const auto w = static_cast<std::size_t>(todo[static_cast<std::size_t>(t)]);
            for (std::size_t s = 0; s < ns; ++s) {
                out.values[w * ns + s] = radon_plane(field, grid, sigma[s], quad.nodes[w], options);
            }
        }
    });
    if (reuse) {
        for (std::size_t w = 0; w < quad.size(); ++w) {
            if (canonical(quad.nodes[w].omega())) continue;
            const std::size_t a = quad.antipode[w];
            for (std::size_t s = 0; s < ns; ++s) out.values[w * ns + s] = out.values[a * ns + (ns - 1 - s)];
        }
    }
    return out;
}

namespace {

PaddedField laplacian(const PaddedField& f, double dx) {
    const int n = f.n();
    PaddedField out(n);
    const double s = 1.0 / (dx * dx);
    for (int k = 1; k <= n; ++k)
        for (int j = 1; j <= n; ++j)
            for (int i = 1; i <= n; ++i)
                out.at(i, j, k) = (f.at(i + 1, j, k) + f.at(i - 1, j, k) + f.at(i, j + 1, k) + f.at(i, j - 1, k) +
                                   f.at(i, j, k + 1) + f.at(i, j, k - 1) - 6.0 * f.at(i, j, k)) * s;
    return out;
}

PaddedField partial(const PaddedField& f, int axis, double dx) {
    const int n = f.n();
    PaddedField out(n);
    const int di = axis == 0 ? 1 : 0;
    const int dj = axis == 1 ? 1 : 0;
    const int dk = axis == 2 ? 1 : 0;
    const double s = 1.0 / (2.0 * dx);
    for (int k = 1; k <= n; ++k)
        for (int j = 1; j <= n; ++j)
            for (int i = 1; i <= n; ++i)
                out.at(i, j, k) = (f.at(i + di, j + dj, k + dk) - f.at(i - di, j - dj, k - dk)) * s;
    return out;
}

}  // namespace

TranslationData translation_representation(const PaddedField& phi0, const PaddedField& phi1, const GridSpec& grid,
                                           const std::vector<double>& sigma, const SphereQuadrature& quad,
                                           const RadonOptions& options, SigmaDerivative method) {
    if (sigma.size() < 2) throw UsageError("translation_representation: need at least two sigma nodes");
    if (phi0.n() != grid.points_per_axis || phi1.n() != grid.points_per_axis) {
        throw UsageError("translation_representation: fields do not match the grid");
    }
    TranslationData out;
    out.sigma = sigma;
    out.quad = quad;
    const std::size_t ns = sigma.size();
    out.values.assign(ns * quad.size(), 0.0);
    const double k = 1.0 / (4.0 * std::numbers::pi);

    if (method == SigmaDerivative::FieldDerivatives) {
        const double dx = grid.dx();
        const TranslationData lap = radon_transform(laplacian(phi0, dx), grid, sigma, quad, options);
        std::array<TranslationData, 3> grad;
        for (int a = 0; a < 3; ++a) grad[static_cast<std::size_t>(a)] = radon_transform(partial(phi1, a, dx), grid, sigma, quad, options);
        for (std::size_t w = 0; w < quad.size(); ++w) {
            const auto& om = quad.nodes[w];
            for (std::size_t s = 0; s < ns; ++s) {
                const std::size_t i = w * ns + s;
                const double d1 = om[0] * grad[0].values[i] + om[1] * grad[1].values[i] + om[2] * grad[2].values[i];
                out.values[i] = k * (-lap.values[i] + d1);
            }
        }
        return out;
    }

    const double h = (sigma.back() - sigma.front()) / static_cast<double>(sigma.size() - 1);
    std::vector<double> ext;
    ext.reserve(sigma.size() + 2);
    ext.push_back(sigma.front() - h);
    ext.insert(ext.end(), sigma.begin(), sigma.end());
    ext.push_back(sigma.back() + h);
    const TranslationData r0 = radon_transform(phi0, grid, ext, quad, options);
    const TranslationData r1 = radon_transform(phi1, grid, ext, quad, options);
    const std::size_t ne = ext.size();
    for (std::size_t w = 0; w < quad.size(); ++w) {
        const double* a = &r0.values[w * ne];
        const double* b = &r1.values[w * ne];
        for (std::size_t s = 0; s < ns; ++s) {
            const std::size_t e = s + 1;
            const double d2 = (a[e + 1] - 2.0 * a[e] + a[e - 1]) / (h * h);
            const double d1 = (b[e + 1] - b[e - 1]) / (2.0 * h);
            out.values[w * ns + s] = k * (-d2 + d1);
        }
    }
    return out;
}

TranslationData profile_as_translation(const ProfileGridSample& sample, int component, const std::vector<double>& sigma,
                                       const SphereQuadrature& quad) {
    if (component < 0 || static_cast<std::size_t>(component) >= sample.values.size()) {
        throw UsageError("profile_as_translation: component out of range");
    }
    const auto& v = sample.values[static_cast<std::size_t>(component)];
    if (v.size() != sigma.size() * quad.size()) throw UsageError("profile_as_translation: grid size mismatch");
    TranslationData out;
    out.sigma = sigma;
    out.quad = quad;
    out.values = v;
    return out;
}

ProfileGridSpec profile_grid_for(const std::vector<double>& sigma, const SphereQuadrature& quad) {
    ProfileGridSpec pg;
    pg.sigma = sigma;
    pg.omegas = quad.nodes;
    pg.weights = quad.weights;
    return pg;
}

namespace {

void require_same_grid(const TranslationData& a, const TranslationData& b) {
    if (a.sigma != b.sigma || a.quad.size() != b.quad.size() || a.values.size() != b.values.size()) {
        throw UsageError("translation data live on different grids");
    }
}

}  // namespace

RadiationDiscrepancy radiation_field_check(const TranslationData& late_profile, const TranslationData& trans) {
    require_same_grid(late_profile, trans);
    TranslationData diff = trans;
    for (std::size_t i = 0; i < diff.values.size(); ++i) diff.values[i] = late_profile.values[i] - trans.values[i];
    RadiationDiscrepancy r;
    r.difference_l2 = diff.l2_norm();
    r.profile_l2 = late_profile.l2_norm();
    r.translation_l2 = trans.l2_norm();
    r.discrepancy = r.translation_l2 > 0.0 ? r.difference_l2 / r.translation_l2 : r.profile_l2;
    return r;
}

RelationCoefficients relation_coefficients(const CoefficientTensor& tensor, const WeightMatrix& weight) {
    return [tensor, weight](const SphereDirection& dir) {
        const Diagonalization2 d = diagonalize_2x2(tensor, weight, dir);
        if (d.degenerate()) return std::make_pair(0.0, 0.0);
        return std::make_pair(d.c1, d.c2);
    };
}

RelationReport scattering_relation_check(const TranslationData& V1, const TranslationData& V2,
                                         const RelationCoefficients& c12, const std::string& c1c2_source) {
    require_same_grid(V1, V2);
    RelationReport rep;
    rep.c1c2_source = c1c2_source;
    rep.n_sigma = V1.n_sigma();
    rep.n_omega = V1.quad.size();
    const std::size_t ns = V1.n_sigma();
    std::vector<std::pair<double, double>> c(V1.quad.size());
    double cmax = 0.0;
    for (std::size_t w = 0; w < c.size(); ++w) {
        c[w] = c12(V1.quad.nodes[w]);
        cmax = std::max(cmax, std::abs(c[w].first) + std::abs(c[w].second));
    }
    if (!(cmax > 0.0)) return rep;
    rep.applicable = true;
    double num = 0.0;
    double den = 0.0;
    for (std::size_t w = 0; w < c.size(); ++w) {
        const auto [c1, c2] = c[w];
        const double cs = std::abs(c1) + std::abs(c2);
        if (cs < 1e-6 * cmax) ++rep.ill_conditioned_nodes;
        double sn = 0.0;
        double sd = 0.0;
        for (std::size_t s = 0; s < ns; ++s) {
            const double a = V1.values[w * ns + s];
            const double b = V2.values[w * ns + s];
            const double r = c1 * a + c2 * b;
            const double d = cs * (std::abs(a) + std::abs(b));
            sn += r * r;
            sd += d * d;
        }
        num += V1.quad.weights[w] * sn;
        den += V1.quad.weights[w] * sd;
    }
    rep.numerator = std::sqrt(num * V1.dsigma());
    rep.denominator = std::sqrt(den * V1.dsigma());
    rep.residual = rep.denominator > 0.0 ? rep.numerator / rep.denominator : 0.0;
    return rep;
}

}  // namespace nullwave
