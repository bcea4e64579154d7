#include "qbisect/circuit.hpp"

#include <cmath>
#include <string>

#include "qbisect/errors.hpp"
#include "qbisect/prep.hpp"

namespace qbisect {

RegisterLayout dense_layout(const Graph& g, const AmplifyConfig& cfg) {
    RegisterLayout lay;
    lay.n = g.n;
    lay.m = g.m();
    lay.mu = cfg.mu;
    if (lay.total() > StateVector::kMaxQubits)
        throw feasibility_error("circuit needs " + std::to_string(lay.total()) +
                                " qubits, cap is " +
                                std::to_string(StateVector::kMaxQubits));
    return lay;
}

std::vector<GateSpec> constraint_program(const Graph& g, const RegisterLayout& lay,
                                         Mode mode) {
    std::vector<GateSpec> program;
    if (mode == Mode::max)
        for (int j = 0; j < lay.mu; ++j)
            program.push_back(GateSpec::x(lay.constraint(lay.m + j)));
    // Min-mode dummies stay |0>; the negated controls of the MIN operator
    // make them count.
    for (int l = 0; l < lay.m; ++l) {
        program.push_back(GateSpec::cx(g.edges[l].first, lay.constraint(l)));
        program.push_back(GateSpec::cx(g.edges[l].second, lay.constraint(l)));
    }
    return program;
}

std::vector<GateSpec> q_operator_program(const RegisterLayout& lay, Mode mode) {
    std::vector<GateSpec> program;
    const bool negate = mode == Mode::min;
    for (int l = 0; l < lay.m_ext(); ++l)
        program.push_back(GateSpec::cv(lay.constraint(l), lay.ax2(), lay.m_ext(), negate));
    return program;
}

namespace {

int resolve_rounds(const Graph& g, const AmplifyConfig& cfg, int rounds) {
    if (rounds > 0) return rounds;
    return probability_trace(g, cfg).iterations();
}

} // namespace

CircuitResult run_full_circuit(const Graph& g, const AmplifyConfig& cfg,
                               SeededRng& rng, int rounds) {
    const RegisterLayout lay = dense_layout(g, cfg);
    const int r_total = resolve_rounds(g, cfg, rounds);
    const auto plan = make_prep_plan(g.n, cfg.phi);

    const auto prep = preparation_program(g.n, cfg.phi, plan.q, lay.total());
    const auto constraints = constraint_program(g, lay, cfg.mode);
    const auto q_round = q_operator_program(lay, cfg.mode);

    StateVector s(lay.total());
    CircuitDiagnostics diag;
    diag.iterations = r_total;

    bool done = false;
    while (!done) {
        if (diag.stage1_restarts + diag.stage3_restarts > cfg.restart_cap)
            throw restart_limit_error(
                "restart cap " + std::to_string(cfg.restart_cap) + " exhausted",
                diag.iteration_success_probs);

        s.reset();
        apply_program(s, prep);
        diag.stage1_success_prob = s.prob_one(lay.ax1());
        if (s.measure(lay.ax1(), rng) == 0) {
            ++diag.stage1_restarts;
            continue; // repeat the preparation stage
        }

        apply_program(s, constraints);

        diag.iteration_success_probs.clear();
        done = true;
        for (int r = 0; r < r_total; ++r) {
            apply_program(s, q_round);
            diag.iteration_success_probs.push_back(s.prob_one(lay.ax2()));
            if (s.measure(lay.ax2(), rng) == 0) {
                ++diag.stage3_restarts;
                done = false;
                break; // superposition destroyed; restart from stage 1
            }
            s.apply_x(lay.ax2()); // reset ax2 to |0> for the next round
        }
    }

    const std::uint64_t basis = s.sample_basis(rng);
    CircuitResult res;
    res.assignment = Assignment::from_code(lay.x_code(basis), g.n);
    res.z = evaluate_constraints(g, res.assignment);
    // The sampled constraint bits must agree with the classical evaluation;
    // they are perfectly entangled with the vertex register.
    if (lay.z_code(basis) != res.z.code())
        throw feasibility_error("constraint register out of sync with vertex register");
    res.diagnostics = std::move(diag);
    return res;
}

ConditionedDenseTrace conditioned_dense_trace(const Graph& g, const AmplifyConfig& cfg,
                                              int rounds) {
    const RegisterLayout lay = dense_layout(g, cfg);
    const int r_total = resolve_rounds(g, cfg, rounds);
    const auto plan = make_prep_plan(g.n, cfg.phi);

    StateVector s(lay.total());
    apply_program(s, preparation_program(g.n, cfg.phi, plan.q, lay.total()));

    ConditionedDenseTrace trace;
    trace.stage1_prob = s.postselect(lay.ax1(), 1);

    apply_program(s, constraint_program(g, lay, cfg.mode));
    const auto q_round = q_operator_program(lay, cfg.mode);

    for (int r = 0; r < r_total; ++r) {
        apply_program(s, q_round);
        trace.pr_ax2.push_back(s.postselect(lay.ax2(), 1));
        s.apply_x(lay.ax2());

        std::vector<JointOutcome> joint;
        for (std::uint64_t idx = 0; idx < s.dim(); ++idx) {
            const double p = std::norm(s.amp(idx));
            if (p > 0.0)
                joint.push_back({lay.x_code(idx), lay.z_code(idx), p});
        }
        trace.joints.push_back(std::move(joint));
    }
    return trace;
}

} // namespace qbisect
