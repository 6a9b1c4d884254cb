#include "nullwave/nonlinearity.hpp"

#include <algorithm>
#include <cmath>

#include "nullwave/errors.hpp"
#include "nullwave/sampling.hpp"

namespace nullwave {

CoefficientTensor::CoefficientTensor(int n_components) : n_(n_components) {
    if (n_components < 1) throw UsageError("CoefficientTensor: n_components must be >= 1");
}

void CoefficientTensor::check_index(int j, int k, int l, int a, int b) const {
    auto comp_ok = [this](int i) { return i >= 0 && i < n_; };
    auto slot_ok = [](int i) { return i >= 0 && i < 4; };
    if (!comp_ok(j) || !comp_ok(k) || !comp_ok(l) || !slot_ok(a) || !slot_ok(b)) {
        throw UsageError("CoefficientTensor: index out of range");
    }
}

void CoefficientTensor::add(int j, int k, int l, int a, int b, double value) {
    check_index(j, k, l, a, b);
    const TensorIndex idx{j, k, l, a, b};
    const double sum = (entries_.count(idx) ? entries_.at(idx) : 0.0) + value;
    if (sum == 0.0) {
        entries_.erase(idx);
    } else {
        entries_[idx] = sum;
    }
}

double CoefficientTensor::coefficient(int j, int k, int l, int a, int b) const {
    check_index(j, k, l, a, b);
    const auto it = entries_.find({j, k, l, a, b});
    return it == entries_.end() ? 0.0 : it->second;
}

std::vector<CoefficientTensor::Term> CoefficientTensor::terms() const {
    std::vector<Term> out;
    out.reserve(entries_.size());
    for (const auto& [idx, c] : entries_) out.push_back({idx.j, idx.k, idx.l, idx.a, idx.b, c});
    return out;
}

double CoefficientTensor::max_abs_coefficient() const {
    double m = 0.0;
    for (const auto& [idx, c] : entries_) m = std::max(m, std::abs(c));
    return m;
}

CoefficientTensor CoefficientTensor::symmetrized() const {
    CoefficientTensor out(n_);
    for (const auto& [idx, c] : entries_) {
        out.add(idx.j, idx.k, idx.l, idx.a, idx.b, 0.5 * c);
        out.add(idx.j, idx.l, idx.k, idx.b, idx.a, 0.5 * c);
    }
    return out;
}

CoefficientTensor& CoefficientTensor::operator+=(const CoefficientTensor& other) {
    if (other.n_ != n_) throw UsageError("CoefficientTensor: component count mismatch");
    for (const auto& [idx, c] : other.entries_) add(idx, c);
    return *this;
}

CoefficientTensor CoefficientTensor::scaled(double factor) const {
    CoefficientTensor out(n_);
    if (factor == 0.0) return out;
    for (const auto& [idx, c] : entries_) out.add(idx, factor * c);
    return out;
}

SphereDirection::SphereDirection(const std::array<double, 3>& omega) : omega_(omega) {
    const double norm2 = omega[0] * omega[0] + omega[1] * omega[1] + omega[2] * omega[2];
    if (!(std::abs(norm2 - 1.0) <= 1e-12)) throw UsageError("SphereDirection: vector is not unit length");
}

SphereDirection SphereDirection::normalized(double x, double y, double z) {
    const double norm = std::sqrt(x * x + y * y + z * z);
    if (!(norm > 0.0) || !std::isfinite(norm)) throw UsageError("SphereDirection: zero or non-finite vector");
    return SphereDirection({x / norm, y / norm, z / norm});
}

GradientVector GradientVector::light_cone(const SphereDirection& dir, std::span<const double> Y) {
    GradientVector g(static_cast<int>(Y.size()));
    const auto w = dir.extended();
    for (std::size_t k = 0; k < Y.size(); ++k) {
        for (int a = 0; a < 4; ++a) g(static_cast<int>(k), a) = w[static_cast<std::size_t>(a)] * Y[k];
    }
    return g;
}

std::vector<double> eval_F(const CoefficientTensor& tensor, const GradientVector& grad) {
    if (grad.n_components() != tensor.n_components()) throw UsageError("eval_F: dimension mismatch");
    std::vector<double> F(static_cast<std::size_t>(tensor.n_components()), 0.0);
    for (const auto& [idx, c] : tensor.entries()) {
        F[static_cast<std::size_t>(idx.j)] += c * grad(idx.k, idx.a) * grad(idx.l, idx.b);
    }
    return F;
}

std::vector<double> eval_Fred(const CoefficientTensor& tensor, const SphereDirection& dir,
                              std::span<const double> Y) {
    if (static_cast<int>(Y.size()) != tensor.n_components()) throw UsageError("eval_Fred: dimension mismatch");
    const auto w = dir.extended();
    std::vector<double> F(Y.size(), 0.0);
    for (const auto& [idx, c] : tensor.entries()) {
        F[static_cast<std::size_t>(idx.j)] += c * w[static_cast<std::size_t>(idx.a)] *
                                              w[static_cast<std::size_t>(idx.b)] *
                                              Y[static_cast<std::size_t>(idx.k)] * Y[static_cast<std::size_t>(idx.l)];
    }
    return F;
}

CoefficientTensor null_form_tensor(NullForm form, int k, int l, int n_components, int target,
                                   double coefficient) {
    CoefficientTensor t(n_components);
    if (k < 0 || l < 0 || k >= n_components || l >= n_components || target < 0 || target >= n_components) {
        throw UsageError("null_form_tensor: component index out of range");
    }
    if (form.kind == NullFormKind::Q0) {
        t.add(target, k, l, 0, 0, coefficient);
        for (int i = 1; i <= 3; ++i) t.add(target, k, l, i, i, -coefficient);
    } else {
        if (form.a == form.b) throw UsageError("null_form_tensor: Q_ab requires a != b");
        if (form.a < 0 || form.a > 3 || form.b < 0 || form.b > 3) {
            throw UsageError("null_form_tensor: derivative slot out of range");
        }
        t.add(target, k, l, form.a, form.b, coefficient);
        t.add(target, k, l, form.b, form.a, -coefficient);
    }
    return t;
}

double index_function_c(const IndexMatrix& c_ab, const SphereDirection& dir) {
    const auto w = dir.extended();
    double c = 0.0;
    for (std::size_t a = 0; a < 4; ++a) {
        for (std::size_t b = 0; b < 4; ++b) c += c_ab[a][b] * w[a] * w[b];
    }
    return c;
}

NullConditionReport check_null_condition(const CoefficientTensor& tensor, std::size_t samples, double tol) {
    if (samples < 1000) throw UsageError("check_null_condition: need at least 1000 samples");
    const std::size_t n_omega = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(samples))));
    const std::size_t n_y = (samples + n_omega - 1) / n_omega;
    const auto omegas = fibonacci_sphere(n_omega);
    const auto ys = quasi_random_unit_vectors(n_y, static_cast<std::size_t>(tensor.n_components()));
    const double scale = std::max(1.0, tensor.max_abs_coefficient());

    NullConditionReport report;
    report.samples = n_omega * n_y;
    report.witness_Y = ys.front();
    for (const auto& om : omegas) {
        const SphereDirection dir = SphereDirection::normalized(om[0], om[1], om[2]);
        for (const auto& y : ys) {
            const auto F = eval_Fred(tensor, dir, y);
            double norm = 0.0;
            for (double f : F) norm += f * f;
            norm = std::sqrt(norm);  // |Y| = 1
            if (norm > report.max_violation) {
                report.max_violation = norm;
                report.witness_omega = dir.omega();
                report.witness_Y = y;
            }
        }
    }
    report.holds = report.max_violation <= tol * scale;
    return report;
}

// -- Built-in systems -------------------------------------------------------

IndexMatrix c00_only(double value) {
    IndexMatrix m{};
    m[0][0] = value;
    return m;
}

CoefficientTensor first_example_a() {
    // Box u1 = (d_t u2)(d_t u1)
    CoefficientTensor t(2);
    t.add(0, 1, 0, 0, 0, 1.0);
    return t;
}

CoefficientTensor second_example_a() {
    // Box u1 = (d_t u2)^2
    CoefficientTensor t(2);
    t.add(0, 1, 1, 0, 0, 1.0);
    return t;
}

CoefficientTensor third_example_a() {
    // Box u1 = -(d_t u3)(d_t u2), Box u2 = (d_t u3)(d_t u1)
    CoefficientTensor t(3);
    t.add(0, 2, 1, 0, 0, -1.0);
    t.add(1, 2, 0, 0, 0, 1.0);
    return t;
}

CoefficientTensor typical_example(double c0, const IndexMatrix& c_ab) {
    if (!(c0 > 0.0)) throw UsageError("typical_example: c0 must be positive");
    CoefficientTensor t(2);
    for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
            const double c = c_ab[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
            if (c == 0.0) continue;
            t.add(0, 0, 1, a, b, -c0 * c);
            t.add(1, 0, 0, a, b, c);
        }
    }
    return t;
}

CoefficientTensor typical_example_r() {
    CoefficientTensor t(2);
    // F1 = -(u1_t)^2 - 4 u1_t u2_t - 3 (u2_t)^2 + (u1_x + u2_x)^2
    t.add(0, 0, 0, 0, 0, -1.0);
    t.add(0, 0, 1, 0, 0, -4.0);
    t.add(0, 1, 1, 0, 0, -3.0);
    t.add(0, 0, 0, 1, 1, 1.0);
    t.add(0, 0, 1, 1, 1, 2.0);
    t.add(0, 1, 1, 1, 1, 1.0);
    // F2 = 3 (u1_t)^2 + 4 u1_t u2_t + (u2_t)^2 - (u1_x + u2_x)^2
    t.add(1, 0, 0, 0, 0, 3.0);
    t.add(1, 0, 1, 0, 0, 4.0);
    t.add(1, 1, 1, 0, 0, 1.0);
    t.add(1, 0, 0, 1, 1, -1.0);
    t.add(1, 0, 1, 1, 1, -2.0);
    t.add(1, 1, 1, 1, 1, -1.0);
    return t;
}

CoefficientTensor simple_system(double c1, double c2) {
    CoefficientTensor t(2);
    if (c1 != 0.0) t.add(0, 0, 1, 0, 0, -c1);
    if (c2 != 0.0) t.add(1, 0, 0, 0, 0, c2);
    return t;
}

CoefficientTensor null_form_system() {
    CoefficientTensor t = null_form_tensor(NullForm::q0(), 0, 0, 2, 0);
    t += null_form_tensor(NullForm::qab(0, 1), 0, 1, 2, 0);
    t += null_form_tensor(NullForm::q0(), 1, 1, 2, 1);
    t += null_form_tensor(NullForm::q0(), 0, 1, 2, 1, -1.0);
    return t;
}

CoefficientTensor ExampleSystem::tensor() const {
    switch (tag) {
        case ExampleTag::FirstExampleA: return first_example_a();
        case ExampleTag::SecondExampleA: return second_example_a();
        case ExampleTag::ThirdExampleA: return third_example_a();
        case ExampleTag::TypicalExample: return typical_example(c0, c_ab);
        case ExampleTag::TypicalExampleR: return typical_example_r();
        case ExampleTag::Simple: return simple_system(c1, c2);
        case ExampleTag::NullForms: return null_form_system();
    }
    throw UsageError("ExampleSystem: unknown tag");
}

std::string ExampleSystem::name() const {
    switch (tag) {
        case ExampleTag::FirstExampleA: return "FirstExampleA";
        case ExampleTag::SecondExampleA: return "SecondExampleA";
        case ExampleTag::ThirdExampleA: return "ThirdExampleA";
        case ExampleTag::TypicalExample: return "TypicalExample";
        case ExampleTag::TypicalExampleR: return "TypicalExampleR";
        case ExampleTag::Simple: return "Simple";
        case ExampleTag::NullForms: return "NullForms";
    }
    return "unknown";
}

std::optional<ExampleTag> ExampleSystem::parse_tag(const std::string& name) {
    static const std::map<std::string, ExampleTag> table = {
        {"FirstExampleA", ExampleTag::FirstExampleA},   {"SecondExampleA", ExampleTag::SecondExampleA},
        {"ThirdExampleA", ExampleTag::ThirdExampleA},   {"TypicalExample", ExampleTag::TypicalExample},
        {"TypicalExampleR", ExampleTag::TypicalExampleR}, {"Simple", ExampleTag::Simple},
        {"NullForms", ExampleTag::NullForms},           {"Q0", ExampleTag::NullForms},
    };
    const auto it = table.find(name);
    if (it == table.end()) return std::nullopt;
    return it->second;
}

}  // namespace nullwave
