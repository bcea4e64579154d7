#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "qbisect/state_vector.hpp"

namespace qbisect {

// Fixed phase used throughout; approximately 1.9168 pi.
inline constexpr double kDefaultPhi = 6.02193;

// Closed-form description of the balanced-superposition preparation for n
// vertices: q rounds of the fixed-phase amplification operator
// D = W R0(phi) W^dag Rtau(phi) starting from the uniform superposition.
struct PrepPlan {
    int n = 0;
    double big_n = 0.0;        // N = 2^n
    std::uint64_t m_balanced = 0; // M = C(n, n/2)
    double sin_theta = 0.0;    // sqrt(M / N)
    double theta = 0.0;
    double phi = kDefaultPhi;
    int q = 0;                 // floor(phi / sin theta)
    double success_prob = 0.0; // |a_q|^2
};

struct ChebAmplitudes {
    cd a_q; // amplitude of the balanced subspace
    cd b_q; // amplitude of the unbalanced subspace
};

// a_q = sin(theta) (e^{i q phi} U_q(y) + e^{i (q-1) phi} U_{q-1}(y))
// b_q = cos(theta) e^{i (q-1) phi} (U_q(y) + U_{q-1}(y))
// with y = cos(delta) = 2 sin^2(theta) sin^2(phi/2) - 1 and U_k the
// Chebyshev polynomial of the second kind. Near |sin delta| = 0 the sine
// quotient is replaced by the stable three-term recurrence, which continues
// through U_k(+-1) = (k+1)(+-1)^k.
ChebAmplitudes chebyshev_amplitudes(double theta, double phi, int q);

// Closed form only; no statevector is allocated. n even, 2 <= n <= 30.
PrepPlan make_prep_plan(int n, double phi = kDefaultPhi);

// ceil(1.9168 (pi^5 n / 2)^{1/4}), the asymptotic iteration bound.
int prep_iteration_bound(int n);

// 1.9168 pi sqrt(N / M); every plan's q stays at or below this.
double prep_iteration_bound_exact(int n);

// True iff the vertex bits of `index` (the qubits listed MSB-first) hold
// exactly half ones.
BasisPredicate balanced_predicate(int num_qubits, int n_vertices);

// The preparation program over qubits [0, n) with the balance flag on qubit
// n: H^(x)n, then q amplification rounds, then the oracle flip entangling
// balanced states with |1> on the flag. Each round carries a global phase of
// pi so the statevector matches the closed-form amplitudes exactly, not just
// up to sign. total_qubits widens the register (extra qubits untouched) so
// the same program can open the full bisection circuit.
std::vector<GateSpec> preparation_program(int n, double phi, int q,
                                          int total_qubits = -1);

// Runs the program on n+1 fresh qubits and returns the state.
StateVector run_preparation_circuit(int n, double phi, int q);

} // namespace qbisect
