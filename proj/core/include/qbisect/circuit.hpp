#pragma once

#include <cstdint>
#include <vector>

#include "qbisect/amplify.hpp"
#include "qbisect/graph.hpp"
#include "qbisect/rng.hpp"
#include "qbisect/state_vector.hpp"

namespace qbisect {

// Register layout of the full circuit, most significant qubit first:
//   [0, n)              vertex qubits
//   n                   balance flag ax1
//   [n+1, n+1+m_ext)    constraint qubits (m real edges then mu dummies)
//   n+m_ext+1           partial-negation target ax2
struct RegisterLayout {
    int n = 0;
    int m = 0;
    int mu = 0;

    int m_ext() const { return m + mu; }
    int total() const { return n + m_ext() + 2; }
    int ax1() const { return n; }
    int constraint(int l) const { return n + 1 + l; }
    int ax2() const { return n + m_ext() + 1; }

    std::uint64_t x_code(std::uint64_t basis) const {
        return basis >> (total() - n);
    }
    std::uint64_t z_code(std::uint64_t basis) const {
        // The m real constraint bits, c_0 most significant.
        return (basis >> (m_ext() + 1 - m)) & ((std::uint64_t{1} << m) - 1);
    }
};

struct CircuitDiagnostics {
    long stage1_restarts = 0;
    long stage3_restarts = 0;
    int iterations = 0;
    // Probabilities read off the statevector on the attempt that completed.
    double stage1_success_prob = 0.0;
    std::vector<double> iteration_success_probs;
};

struct CircuitResult {
    Assignment assignment;
    ConstraintVector z;
    CircuitDiagnostics diagnostics;
};

RegisterLayout dense_layout(const Graph& g, const AmplifyConfig& cfg);

// Constraint evaluation: dummies pinned to their constant, then two
// controlled-X per edge.
std::vector<GateSpec> constraint_program(const Graph& g, const RegisterLayout& lay,
                                         Mode mode);

// One amplification round: controlled-V from every constraint qubit onto
// ax2 (controls negated in min mode).
std::vector<GateSpec> q_operator_program(const RegisterLayout& lay, Mode mode);

// Samples one complete run of the circuit: preparation with measurement
//-conditioned retry, constraint evaluation, `rounds` partial-negation
// rounds each post-checked on ax2 (any failure restarts from scratch),
// then a final register measurement. rounds <= 0 picks the structured
// trace's stopping iteration.
CircuitResult run_full_circuit(const Graph& g, const AmplifyConfig& cfg,
                               SeededRng& rng, int rounds = 0);

// Deterministic variant for cross-backend checks: postselects ax1 = 1 and
// ax2 = 1 every round instead of sampling, recording each branch
// probability and the conditioned joint distribution over (x, z).
struct JointOutcome {
    std::uint64_t x_code = 0;
    std::uint64_t z_code = 0;
    double prob = 0.0;
};

struct ConditionedDenseTrace {
    double stage1_prob = 0.0;
    std::vector<double> pr_ax2;
    std::vector<std::vector<JointOutcome>> joints;
};

ConditionedDenseTrace conditioned_dense_trace(const Graph& g, const AmplifyConfig& cfg,
                                              int rounds);

} // namespace qbisect
