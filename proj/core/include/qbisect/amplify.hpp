#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "qbisect/graph.hpp"
#include "qbisect/rng.hpp"
#include "qbisect/state_vector.hpp"

namespace qbisect {

// One balanced assignment with its constraint vector, the distance the
// chosen mode rewards (ones for max, zeros for min, dummy qubits folded in),
// and its complex amplitude.
struct Branch {
    Assignment x;
    ConstraintVector z;
    int d = 0;
    cd amp;
};

struct AmplifyConfig {
    Mode mode = Mode::max;
    int mu = 0;                // dummy-qubit count (already resolved; >= 0)
    double lambda = 4.0;       // epsilon = 10^-lambda stopping precision
    double delta_target = 0.9; // desired first-iteration Pr(ax2 = 1)
    int r_max = 0;             // 0 = auto: ceil(lambda (2 m_ext / pi)^2)
    long restart_cap = 10000;
    double phi = 6.02193;      // stage-1 phase (stage-1 Bernoulli in sampling)
    int enumeration_cap = kEnumerationCap;
};

// Auxiliary-qubit amplitudes ((1 + t^d)/2, (1 - t^d)/2) attached to one branch.
struct AuxPair {
    cd zero_amp;
    cd one_amp;
};

struct TraceRow {
    int r = 0;
    double pr_ax2 = 0.0;    // Pr(ax2 = 1) at this round given all prior successes
    double pr_target = 0.0; // Pr(register holds an optimal branch and ax2 = 1)
};

struct DistanceMass {
    int d = 0;
    double mass = 0.0;
};

struct ProbabilityTrace {
    std::vector<TraceRow> rows;
    // Conditioned per-distance-class distribution after each round's success.
    std::vector<std::vector<DistanceMass>> distributions;
    int m_ext = 0;
    int d_star = 0;       // optimal distance for the mode
    double limit = 0.0;   // sin^2(d_star pi / (2 m_ext)), the r -> inf value
    bool converged = false;

    int iterations() const { return static_cast<int>(rows.size()); }
    double first_pr_ax2() const { return rows.empty() ? 0.0 : rows.front().pr_ax2; }
    double final_pr_ax2() const { return rows.empty() ? 0.0 : rows.back().pr_ax2; }
    double final_pr_target() const { return rows.empty() ? 0.0 : rows.back().pr_target; }
};

struct SampleResult {
    Assignment assignment;
    int cut = 0;
    int iterations_used = 0;
    long stage1_restarts = 0;
    long stage3_restarts = 0;
};

inline int extended_edge_count(const Graph& g, const AmplifyConfig& cfg) {
    return g.m() + cfg.mu;
}

// One branch per balanced assignment, amplitude 1/sqrt(M) each.
std::vector<Branch> build_branches(const Graph& g, const AmplifyConfig& cfg);

// Attaches the auxiliary pair ((1+t^d)/2, (1-t^d)/2), t = exp(i pi / m_ext),
// to every branch; Pr(ax2 = 1 | branch) = sin^2(d pi / (2 m_ext)).
std::vector<AuxPair> apply_q_operator(const std::vector<Branch>& branches, int m_ext);

// Projects onto the requested ax2 outcome and renormalizes; phases are kept.
// Returns the probability of that outcome. Throws when it is (near) zero.
double condition_on_ax2(std::vector<Branch>& branches,
                        const std::vector<AuxPair>& pairs, int outcome);

// Deterministic closed-form trace of the success-conditioned loop. Stops at
// the first round with |pr_ax2 - pr_target| <= 10^-lambda, or at r_max.
ProbabilityTrace probability_trace(const Graph& g, const AmplifyConfig& cfg);

// Smallest r with sin^{2r}((m_ext - 1) pi / (2 m_ext)) <= 10^-lambda.
int required_iterations(int m_ext, double lambda);

// lambda (2 m_ext / pi)^2, the closed-form iteration-count scale.
double iteration_bound(int m_ext, double lambda);

// Dummy-qubit count that lifts the first-round success probability to
// delta_target on the worst-case (complete-graph) distance density.
int compute_mu(Mode mode, int n, double delta_target);

// Seeded stochastic run: stage-1 Bernoulli with the preparation success
// probability, then one Bernoulli per amplification round; any ax2 = 0
// restarts the whole procedure. After every round succeeds, a branch is
// drawn from the conditioned distribution.
SampleResult sample_run(const Graph& g, const AmplifyConfig& cfg, SeededRng& rng);

} // namespace qbisect
