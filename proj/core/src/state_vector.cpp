#include "qbisect/state_vector.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "qbisect/errors.hpp"

namespace qbisect {

namespace {
constexpr double kInvSqrt2 = 0.70710678118654752440;
}

Mat2 dagger(const Mat2& u) {
    return {std::conj(u.m00), std::conj(u.m10), std::conj(u.m01), std::conj(u.m11)};
}

double unitarity_defect(const Mat2& u) {
    const Mat2 d = dagger(u);
    // rows of d times columns of u
    const cd p00 = d.m00 * u.m00 + d.m01 * u.m10;
    const cd p01 = d.m00 * u.m01 + d.m01 * u.m11;
    const cd p10 = d.m10 * u.m00 + d.m11 * u.m10;
    const cd p11 = d.m10 * u.m01 + d.m11 * u.m11;
    double defect = std::abs(p00 - cd{1.0});
    defect = std::max(defect, std::abs(p01));
    defect = std::max(defect, std::abs(p10));
    defect = std::max(defect, std::abs(p11 - cd{1.0}));
    return defect;
}

bool is_unitary(const Mat2& u, double tol) { return unitarity_defect(u) <= tol; }

Mat2 partial_negation_gate(int root_order) {
    if (root_order < 1)
        throw feasibility_error("partial negation root order must be >= 1");
    const cd t = std::polar(1.0, std::numbers::pi / root_order);
    return {0.5 * (1.0 + t), 0.5 * (1.0 - t), 0.5 * (1.0 - t), 0.5 * (1.0 + t)};
}

Mat2 pauli_x_gate() { return {0.0, 1.0, 1.0, 0.0}; }

Mat2 hadamard_gate() { return {kInvSqrt2, kInvSqrt2, kInvSqrt2, -kInvSqrt2}; }

StateVector::StateVector(int num_qubits) : num_qubits_(num_qubits) {
    if (num_qubits < 1 || num_qubits > kMaxQubits)
        throw feasibility_error("qubit count " + std::to_string(num_qubits) +
                                " outside [1, " + std::to_string(kMaxQubits) + "]");
    amps_.assign(dim(), cd{0.0});
    amps_[0] = 1.0;
}

void StateVector::reset() {
    std::fill(amps_.begin(), amps_.end(), cd{0.0});
    amps_[0] = 1.0;
}

void StateVector::apply_1q(int qubit, const Mat2& u) {
    if (qubit < 0 || qubit >= num_qubits_)
        throw feasibility_error("qubit index " + std::to_string(qubit) + " out of range");
    if (!is_unitary(u))
        throw feasibility_error("1-qubit matrix is not unitary within 1e-12");
    const std::uint64_t stride = target_stride(qubit);
    const std::uint64_t n = dim();
    for (std::uint64_t base = 0; base < n; base += 2 * stride) {
        for (std::uint64_t i = base; i < base + stride; ++i) {
            const cd a0 = amps_[i];
            const cd a1 = amps_[i + stride];
            amps_[i] = u.m00 * a0 + u.m01 * a1;
            amps_[i + stride] = u.m10 * a0 + u.m11 * a1;
        }
    }
}

void StateVector::apply_controlled_1q(int control, int target, const Mat2& u,
                                      bool negate_control) {
    if (control == target)
        throw feasibility_error("control and target must be distinct qubits");
    if (control < 0 || control >= num_qubits_ || target < 0 || target >= num_qubits_)
        throw feasibility_error("qubit index out of range");
    if (!is_unitary(u))
        throw feasibility_error("1-qubit matrix is not unitary within 1e-12");
    const std::uint64_t cmask = target_stride(control);
    const std::uint64_t stride = target_stride(target);
    const std::uint64_t want = negate_control ? 0 : cmask;
    const std::uint64_t n = dim();
    for (std::uint64_t base = 0; base < n; base += 2 * stride) {
        for (std::uint64_t i = base; i < base + stride; ++i) {
            if ((i & cmask) != want) continue;
            const cd a0 = amps_[i];
            const cd a1 = amps_[i + stride];
            amps_[i] = u.m00 * a0 + u.m01 * a1;
            amps_[i + stride] = u.m10 * a0 + u.m11 * a1;
        }
    }
}

void StateVector::apply_hadamard(int qubit) { apply_1q(qubit, hadamard_gate()); }

void StateVector::apply_hadamard_all(std::span<const int> qubits) {
    for (size_t i = 0; i < qubits.size(); ++i)
        for (size_t j = i + 1; j < qubits.size(); ++j)
            if (qubits[i] == qubits[j])
                throw feasibility_error("duplicate qubit index in Hadamard list");
    for (int q : qubits) apply_hadamard(q);
}

void StateVector::apply_x(int qubit) {
    if (qubit < 0 || qubit >= num_qubits_)
        throw feasibility_error("qubit index " + std::to_string(qubit) + " out of range");
    const std::uint64_t stride = target_stride(qubit);
    const std::uint64_t n = dim();
    for (std::uint64_t base = 0; base < n; base += 2 * stride)
        for (std::uint64_t i = base; i < base + stride; ++i)
            std::swap(amps_[i], amps_[i + stride]);
}

void StateVector::apply_controlled_x(int control, int target, bool negate_control) {
    apply_controlled_1q(control, target, pauli_x_gate(), negate_control);
}

void StateVector::apply_controlled_v(int control, int target, int root_order,
                                     bool negate_control) {
    apply_controlled_1q(control, target, partial_negation_gate(root_order),
                        negate_control);
}

void StateVector::apply_phase_on_set(const BasisPredicate& marked, double phi) {
    if (!std::isfinite(phi))
        throw feasibility_error("phase must be finite");
    const cd factor = std::polar(1.0, phi);
    const std::uint64_t n = dim();
    for (std::uint64_t i = 0; i < n; ++i)
        if (marked(i)) amps_[i] *= factor;
}

void StateVector::apply_global_phase(double phi) {
    apply_phase_on_set([](std::uint64_t) { return true; }, phi);
}

void StateVector::apply_flip_on_set(int target, const BasisPredicate& marked) {
    if (target < 0 || target >= num_qubits_)
        throw feasibility_error("qubit index " + std::to_string(target) + " out of range");
    const std::uint64_t stride = target_stride(target);
    const std::uint64_t n = dim();
    for (std::uint64_t base = 0; base < n; base += 2 * stride)
        for (std::uint64_t i = base; i < base + stride; ++i)
            if (marked(i)) std::swap(amps_[i], amps_[i + stride]);
}

double StateVector::prob_one(int qubit) const {
    if (qubit < 0 || qubit >= num_qubits_)
        throw feasibility_error("qubit index " + std::to_string(qubit) + " out of range");
    const std::uint64_t mask = target_stride(qubit);
    double p = 0.0;
    for (std::uint64_t i = 0; i < dim(); ++i)
        if (i & mask) p += std::norm(amps_[i]);
    return p;
}

double StateVector::norm_sq() const {
    double s = 0.0;
    for (const cd& a : amps_) s += std::norm(a);
    return s;
}

int StateVector::measure(int qubit, SeededRng& rng) {
    if (norm_sq() < 1e-12)
        throw feasibility_error("cannot measure a degenerate (near-zero norm) state");
    const double p1 = prob_one(qubit);
    const int outcome = rng.bernoulli(p1) ? 1 : 0;
    postselect(qubit, outcome);
    return outcome;
}

double StateVector::postselect(int qubit, int outcome) {
    const double p1 = prob_one(qubit);
    const double p = outcome ? p1 : 1.0 - p1;
    if (p < 1e-12)
        throw feasibility_error("postselected branch has (near) zero probability");
    const std::uint64_t mask = target_stride(qubit);
    const std::uint64_t want = outcome ? mask : 0;
    const double scale = 1.0 / std::sqrt(p);
    for (std::uint64_t i = 0; i < dim(); ++i)
        amps_[i] = ((i & mask) == want) ? amps_[i] * scale : cd{0.0};
    return p;
}

std::uint64_t StateVector::sample_basis(SeededRng& rng) const {
    const double u = rng.uniform() * norm_sq();
    double acc = 0.0;
    const std::uint64_t n = dim();
    for (std::uint64_t i = 0; i < n; ++i) {
        acc += std::norm(amps_[i]);
        if (u < acc) return i;
    }
    return n - 1;
}

void GateSpec::apply_to(StateVector& s) const {
    switch (kind) {
    case Kind::hadamard:
        s.apply_hadamard_all(targets);
        break;
    case Kind::pauli_x:
        if (marked)
            s.apply_flip_on_set(target, marked);
        else
            s.apply_x(target);
        break;
    case Kind::controlled_x:
        s.apply_controlled_x(control, target, negate_control);
        break;
    case Kind::controlled_v: {
        Mat2 v = partial_negation_gate(root_order);
        if (adjoint) v = dagger(v);
        s.apply_controlled_1q(control, target, v, negate_control);
        break;
    }
    case Kind::phase_on_set:
        s.apply_phase_on_set(marked, phase);
        break;
    case Kind::custom_1q:
        s.apply_1q(target, matrix);
        break;
    }
}

GateSpec GateSpec::inverse() const {
    GateSpec inv = *this;
    switch (kind) {
    case Kind::hadamard:
    case Kind::pauli_x:
    case Kind::controlled_x:
        break; // self-inverse
    case Kind::controlled_v:
        inv.adjoint = !adjoint;
        break;
    case Kind::phase_on_set:
        inv.phase = -phase;
        break;
    case Kind::custom_1q:
        inv.matrix = dagger(matrix);
        break;
    }
    return inv;
}

GateSpec GateSpec::hadamards(std::vector<int> qubits) {
    GateSpec g;
    g.kind = Kind::hadamard;
    g.targets = std::move(qubits);
    return g;
}

GateSpec GateSpec::x(int target) {
    GateSpec g;
    g.kind = Kind::pauli_x;
    g.target = target;
    return g;
}

GateSpec GateSpec::oracle_flip(int target, BasisPredicate marked) {
    GateSpec g;
    g.kind = Kind::pauli_x;
    g.target = target;
    g.marked = std::move(marked);
    return g;
}

GateSpec GateSpec::cx(int control, int target, bool negate_control) {
    GateSpec g;
    g.kind = Kind::controlled_x;
    g.control = control;
    g.target = target;
    g.negate_control = negate_control;
    return g;
}

GateSpec GateSpec::cv(int control, int target, int root_order, bool negate_control) {
    GateSpec g;
    g.kind = Kind::controlled_v;
    g.control = control;
    g.target = target;
    g.root_order = root_order;
    g.negate_control = negate_control;
    return g;
}

GateSpec GateSpec::phase_on_set(BasisPredicate marked, double phase) {
    GateSpec g;
    g.kind = Kind::phase_on_set;
    g.marked = std::move(marked);
    g.phase = phase;
    return g;
}

GateSpec GateSpec::custom(int target, const Mat2& matrix) {
    if (!is_unitary(matrix))
        throw feasibility_error("custom gate matrix is not unitary within 1e-12");
    GateSpec g;
    g.kind = Kind::custom_1q;
    g.target = target;
    g.matrix = matrix;
    return g;
}

void apply_program(StateVector& s, std::span<const GateSpec> program) {
    for (const auto& g : program) g.apply_to(s);
}

} // namespace qbisect
