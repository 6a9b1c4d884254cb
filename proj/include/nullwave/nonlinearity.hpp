#pragma once

// Quadratic derivative nonlinearities F_j(du) = sum c_j^{kl,ab} (d_a u_k)(d_b u_l),
// their reduced form on the light cone, null forms, and the null-condition test.
//
// Index conventions in the C++ API: components j,k,l are 0-based (0..N-1);
// derivative slots a,b are 0..3 with slot 0 = d/dt. Config files use the
// 1-based component numbering of the mathematical notation.

#include <array>
#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace nullwave {

struct TensorIndex {
    int j = 0;
    int k = 0;
    int l = 0;
    int a = 0;
    int b = 0;

    auto operator<=>(const TensorIndex&) const = default;
};

/// Sparse coefficient set c_j^{kl,ab}. Zero coefficients are never stored and
/// entries are not symmetrized in (k,a) <-> (l,b).
class CoefficientTensor {
public:
    struct Term {
        int j, k, l, a, b;
        double c;
    };

    explicit CoefficientTensor(int n_components);

    int n_components() const noexcept { return n_; }

    /// Adds `value` to c_j^{kl,ab}; an entry that sums to exactly zero is erased.
    void add(int j, int k, int l, int a, int b, double value);
    void add(const TensorIndex& idx, double value) { add(idx.j, idx.k, idx.l, idx.a, idx.b, value); }

    double coefficient(int j, int k, int l, int a, int b) const;
    const std::map<TensorIndex, double>& entries() const noexcept { return entries_; }
    bool empty() const noexcept { return entries_.empty(); }

    /// Flat term list in index order; the solver kernels consume this.
    std::vector<Term> terms() const;

    /// Largest |c| over all entries (0 for the zero tensor).
    double max_abs_coefficient() const;

    /// Same quadratic form with c averaged over (k,a) <-> (l,b).
    CoefficientTensor symmetrized() const;

    CoefficientTensor& operator+=(const CoefficientTensor& other);
    CoefficientTensor scaled(double factor) const;

    bool operator==(const CoefficientTensor&) const = default;

private:
    void check_index(int j, int k, int l, int a, int b) const;

    int n_;
    std::map<TensorIndex, double> entries_;
};

/// Point of S^2. `extended()` carries the light-cone convention omega_0 = -1.
class SphereDirection {
public:
    /// Throws UsageError unless |omega| = 1 within 1e-12.
    explicit SphereDirection(const std::array<double, 3>& omega);
    /// Normalizes an arbitrary nonzero vector.
    static SphereDirection normalized(double x, double y, double z);

    const std::array<double, 3>& omega() const noexcept { return omega_; }
    double operator[](std::size_t i) const { return omega_[i]; }
    std::array<double, 4> extended() const noexcept { return {-1.0, omega_[0], omega_[1], omega_[2]}; }
    SphereDirection antipode() const { return SphereDirection({-omega_[0], -omega_[1], -omega_[2]}); }

private:
    std::array<double, 3> omega_;
};

/// du as an N x 4 array: entry (k, a) = d_a u_k.
class GradientVector {
public:
    explicit GradientVector(int n_components) : values_(static_cast<std::size_t>(n_components)) {
        for (auto& row : values_) row.fill(0.0);
    }

    int n_components() const noexcept { return static_cast<int>(values_.size()); }
    double& operator()(int k, int a) { return values_.at(static_cast<std::size_t>(k)).at(static_cast<std::size_t>(a)); }
    double operator()(int k, int a) const { return values_.at(static_cast<std::size_t>(k)).at(static_cast<std::size_t>(a)); }

    /// The rank-one gradient d_a u_k = omega_a Y_k with omega_0 = -1.
    static GradientVector light_cone(const SphereDirection& dir, std::span<const double> Y);

private:
    std::vector<std::array<double, 4>> values_;
};

std::vector<double> eval_F(const CoefficientTensor& tensor, const GradientVector& grad);

/// F^red_j(omega, Y) = sum c_j^{kl,ab} omega_a omega_b Y_k Y_l, omega_0 = -1.
std::vector<double> eval_Fred(const CoefficientTensor& tensor, const SphereDirection& dir,
                              std::span<const double> Y);

enum class NullFormKind { Q0, Qab };

struct NullForm {
    NullFormKind kind = NullFormKind::Q0;
    int a = 0;  // only for Qab
    int b = 1;

    static NullForm q0() { return {NullFormKind::Q0, 0, 0}; }
    static NullForm qab(int a, int b) { return {NullFormKind::Qab, a, b}; }
};

/// coefficient * Q(u_k, u_l) placed in component `target`.
/// Q0(f,g) = f_t g_t - grad f . grad g;  Qab(f,g) = f_a g_b - f_b g_a.
CoefficientTensor null_form_tensor(NullForm form, int k, int l, int n_components, int target,
                                   double coefficient = 1.0);

using IndexMatrix = std::array<std::array<double, 4>, 4>;

/// c(omega) = sum c_ab omega_a omega_b with omega_0 = -1.
double index_function_c(const IndexMatrix& c_ab, const SphereDirection& dir);

struct NullConditionReport {
    bool holds = true;
    std::array<double, 3> witness_omega{0.0, 0.0, 1.0};
    std::vector<double> witness_Y;
    double max_violation = 0.0;  // max |F^red(omega,Y)| / |Y|^2 over the samples
    std::size_t samples = 0;
};

/// Decides F^red == 0 by deterministic sampling of (omega, Y) pairs.
/// F^red is a polynomial of degree 2 in omega and 2 in Y, so a nonzero one
/// cannot vanish on a well-spread set of >= 1e3 points; `tol` is applied to
/// |F^red| / (|Y|^2 max(1, max|c|)).
NullConditionReport check_null_condition(const CoefficientTensor& tensor, std::size_t samples = 10000,
                                         double tol = 1e-9);

// -- Built-in systems -------------------------------------------------------

enum class ExampleTag {
    FirstExampleA,
    SecondExampleA,
    ThirdExampleA,
    TypicalExample,
    TypicalExampleR,
    Simple,
    NullForms,
};

struct ExampleSystem {
    ExampleTag tag = ExampleTag::TypicalExample;
    double c0 = 1.0;   // TypicalExample
    IndexMatrix c_ab{};  // TypicalExample
    double c1 = 1.0;   // Simple
    double c2 = 1.0;   // Simple

    CoefficientTensor tensor() const;
    std::string name() const;

    /// Accepts "FirstExampleA", "TypicalExample", "Simple", "NullForms", ...
    static std::optional<ExampleTag> parse_tag(const std::string& name);
};

CoefficientTensor first_example_a();
CoefficientTensor second_example_a();
CoefficientTensor third_example_a();
CoefficientTensor typical_example(double c0, const IndexMatrix& c_ab);
CoefficientTensor typical_example_r();
CoefficientTensor simple_system(double c1, double c2);
/// F1 = Q0(u1,u1) + Q01(u1,u2), F2 = Q0(u2,u2) - Q0(u1,u2).
CoefficientTensor null_form_system();

/// c_ab with only c_00 = 1, so that c(omega) == 1.
IndexMatrix c00_only(double value = 1.0);

}  // namespace nullwave
