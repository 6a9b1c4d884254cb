#pragma once

// Radon transform, translation representation and the two late-time
// comparisons built on them: free radiation fields against T[phi0, phi1], and
// the linear relation c1 V1+ + c2 V2+ = 0 between components.

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "nullwave/condition_h.hpp"
#include "nullwave/grid.hpp"
#include "nullwave/nonlinearity.hpp"
#include "nullwave/wave_solver.hpp"

namespace nullwave {

/// Product rule on S^2: Gauss-Legendre in cos(theta) times 2 n_theta uniform
/// azimuths. Exact for polynomials of degree <= 2 n_theta - 1. The node set is
/// closed under negation and antipodal nodes are exact negatives.
struct SphereQuadrature {
    int n_theta = 0;
    int n_phi = 0;
    int degree = 0;
    std::vector<SphereDirection> nodes;
    std::vector<double> weights;
    std::vector<std::size_t> antipode;

    static SphereQuadrature product_gauss(int n_theta);

    std::size_t size() const noexcept { return nodes.size(); }
    double integrate(const std::function<double(const SphereDirection&)>& fn) const;
};

/// Largest absolute error over all monomials x^a y^b z^c with a + b + c <= degree.
double quadrature_self_test(const SphereQuadrature& quad, int degree);

/// Exact integral of x^a y^b z^c over S^2.
double sphere_monomial_integral(int a, int b, int c);

/// Uniform grid lo, lo + step, ... up to hi (inclusive within rounding).
std::vector<double> uniform_grid(double lo, double hi, double step);

struct RadonOptions {
    double support_radius = 0.0;  // planes are sampled over this disc; <= 0 means the whole cube
    double plane_step = 0.0;      // midpoint spacing on the plane; <= 0 means dx
    int threads = 1;
};

/// Integral of the trilinear interpolant over the plane y . omega = sigma by a
/// 2D midpoint rule. Uses a canonical sign of omega, so that
/// radon_plane(s, w) == radon_plane(-s, -w) bit for bit.
double radon_plane(const PaddedField& field, const GridSpec& grid, double sigma, const SphereDirection& omega,
                   const RadonOptions& options = {});

/// Samples P(sigma, omega) on a uniform sigma grid times a sphere quadrature.
struct TranslationData {
    std::vector<double> sigma;
    SphereQuadrature quad;
    std::vector<double> values;  // values[w * n_sigma + s]

    std::size_t n_sigma() const noexcept { return sigma.size(); }
    double dsigma() const;
    double at(std::size_t w, std::size_t s) const { return values[w * sigma.size() + s]; }
    /// (sum_w weight_w sum_s P^2 dsigma)^{1/2}
    double l2_norm() const;
};

TranslationData radon_transform(const PaddedField& field, const GridSpec& grid, const std::vector<double>& sigma,
                                const SphereQuadrature& quad, const RadonOptions& options = {});

enum class SigmaDerivative {
    FieldDerivatives,  // d_sigma R[psi] = R[omega . grad psi], d_sigma^2 R[psi] = R[Lap psi]
    CentredDifferences // differences of R on the sigma grid
};

/// T[phi0, phi1] = (1/4pi) d_sigma (-d_sigma R[phi0] + R[phi1]). Its L2 norm equals
/// the energy norm of the data and it is the radiation field lim D_-(r u) of the
/// free wave with that data. By default the sigma derivatives are moved onto the
/// fields (centred differences on the grid), which avoids differencing plane
/// integrals of an interpolant.
TranslationData translation_representation(const PaddedField& phi0, const PaddedField& phi1, const GridSpec& grid,
                                           const std::vector<double>& sigma, const SphereQuadrature& quad,
                                           const RadonOptions& options = {},
                                           SigmaDerivative method = SigmaDerivative::FieldDerivatives);

/// Late-time ray values of one component on the profile grid, as translation data.
/// Entries with t + sigma < 4 dx (including sigma <= -t) are zero.
TranslationData profile_as_translation(const ProfileGridSample& sample, int component,
                                       const std::vector<double>& sigma, const SphereQuadrature& quad);

/// Profile grid whose nodes coincide with the given sigma grid and quadrature.
ProfileGridSpec profile_grid_for(const std::vector<double>& sigma, const SphereQuadrature& quad);

struct RadiationDiscrepancy {
    double discrepancy = 0.0;  // ||V - T|| / ||T||, or ||V|| when T == 0
    double difference_l2 = 0.0;
    double profile_l2 = 0.0;
    double translation_l2 = 0.0;
};

/// Throws UsageError when the two grids differ.
RadiationDiscrepancy radiation_field_check(const TranslationData& late_profile, const TranslationData& trans);

using RelationCoefficients = std::function<std::pair<double, double>(const SphereDirection&)>;

/// (c1, c2)(omega) from the two-component diagonalization of (tensor, weight).
RelationCoefficients relation_coefficients(const CoefficientTensor& tensor, const WeightMatrix& weight);

struct RelationReport {
    bool applicable = false;           // false when c1 == c2 == 0 at every node
    double residual = 0.0;             // ||c1 V1 + c2 V2|| / ||(|c1| + |c2|)(|V1| + |V2|)||
    double numerator = 0.0;
    double denominator = 0.0;
    std::size_t ill_conditioned_nodes = 0;  // |c1| + |c2| below 1e-6 of its maximum
    std::string c1c2_source;
    std::size_t n_sigma = 0;
    std::size_t n_omega = 0;
};

/// Nodes with small |c1| + |c2| carry proportionally small weight in both norms.
RelationReport scattering_relation_check(const TranslationData& V1, const TranslationData& V2,
                                         const RelationCoefficients& c12, const std::string& c1c2_source = "");

}  // namespace nullwave
