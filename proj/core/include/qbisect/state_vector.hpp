#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "qbisect/rng.hpp"

namespace qbisect {

using cd = std::complex<double>;

// Row-major 2x2 complex matrix.
struct Mat2 {
    cd m00, m01, m10, m11;
};

Mat2 dagger(const Mat2& u);
double unitarity_defect(const Mat2& u); // max-norm of U^dag U - I
bool is_unitary(const Mat2& u, double tol = 1e-12);

// V = root_order-th root of Pauli-X with the principal root t = exp(i pi / root_order):
//   V = 1/2 [[1+t, 1-t], [1-t, 1+t]],  V^root_order = X.
Mat2 partial_negation_gate(int root_order);
Mat2 pauli_x_gate();
Mat2 hadamard_gate();

// Matches basis states by their full index; masks let a predicate look at a
// sub-register only.
using BasisPredicate = std::function<bool(std::uint64_t)>;

// Dense register of 2^num_qubits complex amplitudes. Qubit 0 is the most
// significant position of the basis index, so |q0 q1 ... q_{k-1}> reads
// left-to-right like the index's binary form.
class StateVector {
  public:
    static constexpr int kMaxQubits = 24;

    explicit StateVector(int num_qubits); // starts in |0...0>

    int num_qubits() const { return num_qubits_; }
    std::uint64_t dim() const { return std::uint64_t{1} << num_qubits_; }
    std::span<const cd> amps() const { return amps_; }
    cd amp(std::uint64_t idx) const { return amps_[idx]; }

    int bit(std::uint64_t idx, int qubit) const {
        return static_cast<int>((idx >> (num_qubits_ - 1 - qubit)) & 1u);
    }

    void reset(); // back to |0...0>

    void apply_1q(int qubit, const Mat2& u);
    void apply_controlled_1q(int control, int target, const Mat2& u,
                             bool negate_control = false);

    void apply_hadamard(int qubit);
    void apply_hadamard_all(std::span<const int> qubits);
    void apply_x(int qubit);
    void apply_controlled_x(int control, int target, bool negate_control = false);
    void apply_controlled_v(int control, int target, int root_order,
                            bool negate_control = false);

    // Multiplies the amplitude of every marked basis state by e^{i phi}.
    void apply_phase_on_set(const BasisPredicate& marked, double phi);
    void apply_global_phase(double phi);

    // Flips `target` on every basis state whose other bits satisfy `marked`
    // (the oracle gate; `marked` must not depend on the target bit).
    void apply_flip_on_set(int target, const BasisPredicate& marked);

    double prob_one(int qubit) const;
    double norm_sq() const;

    // Born-rule measurement; collapses and renormalizes. Returns the outcome.
    int measure(int qubit, SeededRng& rng);

    // Deterministic collapse onto `outcome`; returns the probability that
    // branch had. Throws if the branch is (numerically) empty.
    double postselect(int qubit, int outcome);

    // Full-register measurement in one multinomial draw; no collapse.
    std::uint64_t sample_basis(SeededRng& rng) const;

  private:
    std::uint64_t target_stride(int qubit) const {
        return std::uint64_t{1} << (num_qubits_ - 1 - qubit);
    }

    int num_qubits_;
    std::vector<cd> amps_;
};

// One circuit instruction. The kinds mirror what the bisection circuit needs:
// Hadamards, X (optionally predicated on the rest of the register, which is
// how the balance oracle is expressed), controlled-X, controlled-V,
// phase-on-marked-set, and an escape hatch for any unitary 2x2 matrix.
struct GateSpec {
    enum class Kind {
        hadamard,      // targets
        pauli_x,       // target (+ optional marked predicate = oracle flip)
        controlled_x,  // control, target, negate_control
        controlled_v,  // control, target, root_order, negate_control
        phase_on_set,  // marked, phase
        custom_1q,     // target, matrix (validated unitary)
    };

    Kind kind;
    std::vector<int> targets;     // hadamard
    int target = -1;              // single-target kinds
    int control = -1;
    bool negate_control = false;
    int root_order = 1;           // controlled_v
    bool adjoint = false;         // controlled_v: apply V^dag instead of V
    double phase = 0.0;           // phase_on_set
    BasisPredicate marked;        // phase_on_set / predicated pauli_x
    Mat2 matrix{};                // custom_1q

    void apply_to(StateVector& s) const;
    GateSpec inverse() const;

    static GateSpec hadamards(std::vector<int> qubits);
    static GateSpec x(int target);
    static GateSpec oracle_flip(int target, BasisPredicate marked);
    static GateSpec cx(int control, int target, bool negate_control = false);
    static GateSpec cv(int control, int target, int root_order,
                       bool negate_control = false);
    static GateSpec phase_on_set(BasisPredicate marked, double phase);
    static GateSpec custom(int target, const Mat2& matrix);
};

void apply_program(StateVector& s, std::span<const GateSpec> program);

} // namespace qbisect
