#include "qbisect/prep.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "qbisect/errors.hpp"
#include "qbisect/graph.hpp"

namespace qbisect {

namespace {

// U_k(y) for k = q-1 and q via the three-term recurrence
// U_{k+1} = 2 y U_k - U_{k-1}; exact at y = +-1.
std::pair<double, double> chebyshev_pair_recurrence(double y, int q) {
    double prev = 0.0; // U_{-1}
    double cur = 1.0;  // U_0
    for (int k = 0; k < q; ++k) {
        const double next = 2.0 * y * cur - prev;
        prev = cur;
        cur = next;
    }
    return {prev, cur}; // (U_{q-1}, U_q)
}

} // namespace

ChebAmplitudes chebyshev_amplitudes(double theta, double phi, int q) {
    if (!(theta > 0.0) || theta > std::numbers::pi / 2 + 1e-12)
        throw feasibility_error("theta must lie in (0, pi/2]");
    if (q < 0) throw feasibility_error("iteration count must be >= 0");

    const double s = std::sin(theta);
    const double c = std::cos(theta);
    const double y = 2.0 * s * s * std::sin(phi / 2) * std::sin(phi / 2) - 1.0;
    const double clamped = std::clamp(y, -1.0, 1.0);
    const double delta = std::acos(clamped);
    const double sin_delta = std::sin(delta);

    double u_qm1, u_q;
    if (std::abs(sin_delta) < 1e-6) {
        std::tie(u_qm1, u_q) = chebyshev_pair_recurrence(clamped, q);
    } else {
        u_q = std::sin((q + 1) * delta) / sin_delta;
        u_qm1 = std::sin(q * delta) / sin_delta;
    }

    const cd eiq = std::polar(1.0, q * phi);
    const cd eiqm1 = std::polar(1.0, (q - 1) * phi);
    ChebAmplitudes out;
    out.a_q = s * (eiq * u_q + eiqm1 * u_qm1);
    // The unbalanced-subspace phase carries q full rounds, not q - 1; with
    // q = 0 this reduces to b_0 = cos(theta) as the untouched start state
    // requires. Magnitudes are unaffected either way.
    out.b_q = c * eiq * (u_q + u_qm1);
    return out;
}

PrepPlan make_prep_plan(int n, double phi) {
    if (n < 2 || n % 2 != 0 || n > 30)
        throw feasibility_error("preparation plan needs even n in [2, 30], got " +
                                std::to_string(n));
    PrepPlan plan;
    plan.n = n;
    plan.big_n = std::ldexp(1.0, n);
    plan.m_balanced = binomial(n, n / 2);
    plan.sin_theta = std::sqrt(static_cast<double>(plan.m_balanced) / plan.big_n);
    plan.theta = std::asin(plan.sin_theta);
    plan.phi = phi;
    plan.q = static_cast<int>(std::floor(phi / plan.sin_theta));
    plan.success_prob = std::norm(chebyshev_amplitudes(plan.theta, phi, plan.q).a_q);
    return plan;
}

int prep_iteration_bound(int n) {
    const double pi5 = std::pow(std::numbers::pi, 5);
    return static_cast<int>(std::ceil(1.9168 * std::pow(pi5 * n / 2.0, 0.25)));
}

double prep_iteration_bound_exact(int n) {
    const double big_n = std::ldexp(1.0, n);
    const double m = static_cast<double>(binomial(n, n / 2));
    return 1.9168 * std::numbers::pi * std::sqrt(big_n / m);
}

BasisPredicate balanced_predicate(int num_qubits, int n_vertices) {
    // Vertex qubits occupy the top n_vertices bit positions.
    const int shift = num_qubits - n_vertices;
    const std::uint64_t mask = ((std::uint64_t{1} << n_vertices) - 1) << shift;
    const int half = n_vertices / 2;
    return [mask, half](std::uint64_t idx) {
        return std::popcount(idx & mask) == half;
    };
}

std::vector<GateSpec> preparation_program(int n, double phi, int q, int total_qubits) {
    const int total = total_qubits < 0 ? n + 1 : total_qubits; // >= n + 1
    std::vector<int> vertex(n);
    std::iota(vertex.begin(), vertex.end(), 0);

    const int shift = total - n;
    const std::uint64_t vmask = ((std::uint64_t{1} << n) - 1) << shift;
    auto zero_vertex = [vmask](std::uint64_t idx) { return (idx & vmask) == 0; };
    auto balanced = balanced_predicate(total, n);
    auto all = [](std::uint64_t) { return true; };

    std::vector<GateSpec> program;
    program.push_back(GateSpec::hadamards(vertex));
    for (int it = 0; it < q; ++it) {
        program.push_back(GateSpec::phase_on_set(balanced, phi));    // R_tau
        program.push_back(GateSpec::hadamards(vertex));              // W^dag
        program.push_back(GateSpec::phase_on_set(zero_vertex, phi)); // R_0
        program.push_back(GateSpec::hadamards(vertex));              // W
        program.push_back(GateSpec::phase_on_set(all, std::numbers::pi));
    }
    program.push_back(GateSpec::oracle_flip(n, balanced)); // U_f onto the flag
    return program;
}

StateVector run_preparation_circuit(int n, double phi, int q) {
    if (n < 2 || n % 2 != 0)
        throw feasibility_error("preparation circuit needs a positive even n");
    if (n + 1 > StateVector::kMaxQubits)
        throw feasibility_error("preparation circuit needs " + std::to_string(n + 1) +
                                " qubits, cap is " +
                                std::to_string(StateVector::kMaxQubits));
    StateVector s(n + 1);
    const auto program = preparation_program(n, phi, q);
    apply_program(s, program);
    return s;
}

} // namespace qbisect
