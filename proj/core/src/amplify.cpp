#include "qbisect/amplify.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numbers>
#include <string>

#include "qbisect/errors.hpp"
#include "qbisect/prep.hpp"

namespace qbisect {

namespace {

int branch_distance(const ConstraintVector& z, Mode mode, int mu) {
    return (mode == Mode::max ? z.ones : z.zeros) + mu;
}

// Distance histogram over all balanced assignments: class distance -> count.
// The per-class conditioned mass is all the trace needs; branches inside a
// class stay uniformly weighted forever.
std::map<int, std::uint64_t> distance_histogram(const Graph& g, const AmplifyConfig& cfg) {
    std::map<int, std::uint64_t> hist;
    std::vector<std::uint64_t> masks;
    masks.reserve(g.edges.size());
    for (auto [a, b] : g.edges)
        masks.push_back((std::uint64_t{1} << (g.n - 1 - a)) |
                        (std::uint64_t{1} << (g.n - 1 - b)));

    const std::uint64_t limit = std::uint64_t{1} << g.n;
    std::uint64_t v = (std::uint64_t{1} << (g.n / 2)) - 1;
    while (v < limit) {
        int cut = 0;
        for (auto mask : masks) cut += std::popcount(v & mask) & 1;
        const int ones = cut;
        const int d = (cfg.mode == Mode::max ? ones : g.m() - ones) + cfg.mu;
        ++hist[d];
        std::uint64_t t = v | (v - 1);
        v = (t + 1) | (((~t & (t + 1)) - 1) >> (std::countr_zero(v) + 1));
    }
    return hist;
}

void check_cfg(const Graph& g, const AmplifyConfig& cfg) {
    if (g.n > cfg.enumeration_cap)
        throw feasibility_error("vertex count " + std::to_string(g.n) +
                                " exceeds enumeration cap " +
                                std::to_string(cfg.enumeration_cap));
    if (cfg.mu < 0) throw feasibility_error("dummy-qubit count must be >= 0");
}

} // namespace

std::vector<Branch> build_branches(const Graph& g, const AmplifyConfig& cfg) {
    check_cfg(g, cfg);
    auto assignments = enumerate_balanced(g.n, cfg.enumeration_cap);
    const double amp = 1.0 / std::sqrt(static_cast<double>(assignments.size()));
    std::vector<Branch> branches;
    branches.reserve(assignments.size());
    for (auto& x : assignments) {
        Branch b;
        b.z = evaluate_constraints(g, x);
        b.d = branch_distance(b.z, cfg.mode, cfg.mu);
        b.amp = amp;
        b.x = std::move(x);
        branches.push_back(std::move(b));
    }
    return branches;
}

std::vector<AuxPair> apply_q_operator(const std::vector<Branch>& branches, int m_ext) {
    if (m_ext < 1) throw feasibility_error("extended edge count must be >= 1");
    double norm = 0.0;
    for (const auto& b : branches) norm += std::norm(b.amp);
    if (std::abs(norm - 1.0) > 1e-9)
        throw feasibility_error("branch amplitudes are not normalized");

    // t^d with t = exp(i pi / m_ext), evaluated as one polar form.
    std::vector<AuxPair> pairs;
    pairs.reserve(branches.size());
    for (const auto& b : branches) {
        const cd td = std::polar(1.0, std::numbers::pi * b.d / m_ext);
        pairs.push_back({0.5 * (1.0 + td), 0.5 * (1.0 - td)});
    }
    return pairs;
}

double condition_on_ax2(std::vector<Branch>& branches,
                        const std::vector<AuxPair>& pairs, int outcome) {
    if (pairs.size() != branches.size())
        throw feasibility_error("auxiliary pairs do not match branches");
    double prob = 0.0;
    for (size_t k = 0; k < branches.size(); ++k) {
        const cd sel = outcome ? pairs[k].one_amp : pairs[k].zero_amp;
        prob += std::norm(branches[k].amp * sel);
    }
    // Exact zeros come out as (pi roundoff)^2 ~ 1e-32; any live branch set
    // sits many orders above this.
    if (prob < 1e-24)
        throw feasibility_error("requested ax2 outcome has zero probability");
    const double scale = 1.0 / std::sqrt(prob);
    for (size_t k = 0; k < branches.size(); ++k) {
        const cd sel = outcome ? pairs[k].one_amp : pairs[k].zero_amp;
        branches[k].amp *= sel * scale;
    }
    return prob;
}

ProbabilityTrace probability_trace(const Graph& g, const AmplifyConfig& cfg) {
    check_cfg(g, cfg);
    const int m_ext = extended_edge_count(g, cfg);
    auto hist = distance_histogram(g, cfg);

    ProbabilityTrace trace;
    trace.m_ext = m_ext;
    trace.d_star = hist.rbegin()->first;
    if (trace.d_star == 0)
        throw feasibility_error("no amplifiable branch: every distance is zero");

    const double half_step = std::numbers::pi / (2.0 * m_ext);
    trace.limit = std::pow(std::sin(trace.d_star * half_step), 2);

    struct Class {
        int d;
        double sin_sq; // per-round survival factor sin^2(d pi / (2 m_ext))
        double mass;   // conditioned probability mass of the class
    };
    std::vector<Class> classes;
    const double total = [&] {
        double s = 0.0;
        for (auto& [d, count] : hist) s += static_cast<double>(count);
        return s;
    }();
    for (auto& [d, count] : hist) {
        const double s = std::sin(d * half_step);
        classes.push_back({d, s * s, static_cast<double>(count) / total});
    }

    const double eps = std::pow(10.0, -cfg.lambda);
    const int r_max = cfg.r_max > 0
                          ? cfg.r_max
                          : static_cast<int>(std::ceil(iteration_bound(m_ext, cfg.lambda)));

    for (int r = 1; r <= r_max; ++r) {
        // pr_ax2 split into target and non-target parts; their sum avoids
        // cancellation in the stopping test.
        double pr_target = 0.0;
        double pr_rest = 0.0;
        for (const auto& c : classes)
            (c.d == trace.d_star ? pr_target : pr_rest) += c.mass * c.sin_sq;
        const double pr_ax2 = pr_target + pr_rest;
        trace.rows.push_back({r, pr_ax2, pr_target});

        std::vector<DistanceMass> dist;
        dist.reserve(classes.size());
        for (auto& c : classes) {
            c.mass = c.mass * c.sin_sq / pr_ax2;
            dist.push_back({c.d, c.mass});
        }
        trace.distributions.push_back(std::move(dist));

        if (pr_rest <= eps) {
            trace.converged = true;
            break;
        }
    }
    return trace;
}

int required_iterations(int m_ext, double lambda) {
    if (m_ext < 2) throw feasibility_error("extended edge count must be >= 2");
    if (!(lambda > 0.0)) throw feasibility_error("lambda must be positive");
    const double s = std::sin((m_ext - 1) * std::numbers::pi / (2.0 * m_ext));
    const double log_eps = -lambda * std::numbers::ln10;
    double r_real = log_eps / (2.0 * std::log(s));
    int r = std::max(1, static_cast<int>(std::ceil(r_real)));
    // Guard the ceiling against round-off right at the boundary.
    auto residual_ok = [&](int rr) { return 2.0 * rr * std::log(s) <= log_eps; };
    while (!residual_ok(r)) ++r;
    while (r > 1 && residual_ok(r - 1)) --r;
    return r;
}

double iteration_bound(int m_ext, double lambda) {
    const double scale = 2.0 * m_ext / std::numbers::pi;
    return lambda * scale * scale;
}

int compute_mu(Mode mode, int n, double delta_target) {
    if (n < 2 || n % 2 != 0)
        throw feasibility_error("dummy-qubit sizing needs a positive even n");
    if (!(delta_target > 0.0) || !(delta_target < 1.0))
        throw feasibility_error("delta_target must lie in (0, 1)");
    const double omega = 2.0 / std::numbers::pi * std::asin(std::sqrt(delta_target));
    const double nn = static_cast<double>(n);
    double raw;
    if (mode == Mode::max) {
        raw = (nn * nn / 2.0 * (2.0 * omega - 1.0) - nn / 2.0 * omega) / (1.0 - omega);
    } else {
        raw = nn * nn / 4.0 * (2.0 * omega - 1.0) / (1.0 - omega) + nn / 2.0;
    }
    const double ceiled = std::ceil(raw);
    return ceiled < 0.0 ? 0 : static_cast<int>(ceiled);
}

SampleResult sample_run(const Graph& g, const AmplifyConfig& cfg, SeededRng& rng) {
    check_cfg(g, cfg);
    const auto trace = probability_trace(g, cfg);
    const int rounds = trace.iterations();
    const auto plan = make_prep_plan(g.n, cfg.phi);

    // Per-round success probabilities are deterministic given prior
    // successes, so the Bernoulli draws can come straight off the trace.
    std::vector<double> round_prob;
    round_prob.reserve(rounds);
    for (const auto& row : trace.rows) round_prob.push_back(row.pr_ax2);

    SampleResult res;
    res.iterations_used = rounds;

    while (true) {
        if (res.stage1_restarts + res.stage3_restarts > cfg.restart_cap)
            throw restart_limit_error(
                "restart cap " + std::to_string(cfg.restart_cap) +
                    " exhausted after " + std::to_string(res.stage1_restarts) +
                    " stage-1 and " + std::to_string(res.stage3_restarts) +
                    " stage-3 restarts",
                round_prob);
        if (!rng.bernoulli(plan.success_prob)) {
            ++res.stage1_restarts;
            continue; // repeat the preparation stage only
        }
        bool all_rounds_ok = true;
        for (int r = 0; r < rounds; ++r) {
            if (!rng.bernoulli(round_prob[r])) {
                ++res.stage3_restarts;
                all_rounds_ok = false;
                break; // measurement destroyed the state; back to stage 1
            }
        }
        if (all_rounds_ok) break;
    }

    // Draw the surviving branch: distance class by conditioned mass, then
    // uniformly inside the class.
    const auto& final_dist = trace.distributions.back();
    const double u = rng.uniform();
    double acc = 0.0;
    int chosen_d = final_dist.back().d;
    for (const auto& dm : final_dist) {
        acc += dm.mass;
        if (u < acc) {
            chosen_d = dm.d;
            break;
        }
    }

    auto branches = build_branches(g, cfg);
    std::vector<const Branch*> in_class;
    for (const auto& b : branches)
        if (b.d == chosen_d) in_class.push_back(&b);
    const Branch* picked = in_class[rng.below(in_class.size())];

    res.assignment = picked->x;
    res.cut = picked->z.ones;
    return res;
}

} // namespace qbisect
