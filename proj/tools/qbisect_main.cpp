#include <bit>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "qbisect/amplify.hpp"
#include "qbisect/circuit.hpp"
#include "qbisect/errors.hpp"
#include "qbisect/graph.hpp"
#include "qbisect/prep.hpp"
#include "qbisect/report.hpp"
#include "qbisect/rng.hpp"

using namespace qbisect;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitRestartCap = 4;
constexpr int kDenseVerifyQubitCap = 16;

struct Options {
    std::string input;
    std::string mode = "max";
    std::string kind = "trace";
    std::string backend = "structured";
    std::string mu = "0";
    double delta = 0.9;
    double lambda = 4.0;
    double phi = kDefaultPhi;
    int trials = 1;
    std::uint64_t seed = 0;
    std::string trace_out;
    std::string json_out;
    bool dump_graph = false;
};

std::string prob4(double p) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", p);
    return buf;
}

int resolve_mu(const Options& opt, Mode mode, int n) {
    if (opt.mu == "auto") return compute_mu(mode, n, opt.delta);
    try {
        size_t pos = 0;
        const int value = std::stoi(opt.mu, &pos);
        if (pos != opt.mu.size() || value < 0) throw std::invalid_argument(opt.mu);
        return value;
    } catch (const std::logic_error&) {
        throw CLI::ValidationError("--mu", "expected 'auto' or a non-negative integer");
    }
}

RunResultBundle base_bundle(const Options& opt, const Graph& g, int mu) {
    RunResultBundle b;
    b.input_path = opt.input;
    b.mode = opt.mode;
    b.backend = opt.backend;
    b.kind = opt.kind;
    b.mu_request = opt.mu;
    b.mu_resolved = mu;
    b.delta = opt.delta;
    b.lambda = opt.lambda;
    b.phi = opt.phi;
    b.trials = opt.trials;
    b.seed = opt.seed;
    b.n = g.n;
    b.m = g.m();
    return b;
}

AmplifyConfig make_amplify_config(const Options& opt, Mode mode, int mu) {
    AmplifyConfig cfg;
    cfg.mode = mode;
    cfg.mu = mu;
    cfg.lambda = opt.lambda;
    cfg.delta_target = opt.delta;
    cfg.phi = opt.phi;
    return cfg;
}

void attach_oracle(RunResultBundle& bundle, const Graph& g, Mode mode) {
    if (g.n <= kEnumerationCap) bundle.oracle = brute_force_bisection(g, mode);
}

// pr_target for the dense backend: success probability times the
// conditioned mass of the optimal (x, z) outcomes at that round.
ProbabilityTrace dense_trace(const Graph& g, const AmplifyConfig& cfg) {
    const auto structured = probability_trace(g, cfg);
    const auto dense = conditioned_dense_trace(g, cfg, structured.iterations());

    ProbabilityTrace out = structured; // reuse stop round, limit, classes
    for (size_t r = 0; r < dense.pr_ax2.size(); ++r) {
        double target_mass = 0.0;
        for (const auto& jo : dense.joints[r]) {
            const int ones = std::popcount(jo.z_code);
            const int d = (cfg.mode == Mode::max ? ones : g.m() - ones) + cfg.mu;
            if (d == structured.d_star) target_mass += jo.prob;
        }
        out.rows[r].pr_ax2 = dense.pr_ax2[r];
        out.rows[r].pr_target = dense.pr_ax2[r] * target_mass;
    }
    return out;
}

int run_trace(const Options& opt, const Graph& g, Mode mode, int mu) {
    const AmplifyConfig cfg = make_amplify_config(opt, mode, mu);
    ProbabilityTrace trace;
    if (opt.backend == "dense") {
        if (dense_layout(g, cfg).total() > StateVector::kMaxQubits)
            throw feasibility_error("graph too large for the dense backend");
        trace = dense_trace(g, cfg);
    } else {
        trace = probability_trace(g, cfg);
    }

    RunResultBundle bundle = base_bundle(opt, g, mu);
    attach_oracle(bundle, g, mode);
    bundle.trace = RunResultBundle::TraceSummary{trace.first_pr_ax2(),
                                                 trace.final_pr_ax2(),
                                                 trace.iterations()};

    if (!opt.trace_out.empty()) write_text_file(opt.trace_out, trace_csv(trace));
    if (!opt.json_out.empty()) write_text_file(opt.json_out, result_json(bundle));

    std::cout << "graph: n=" << g.n << " m=" << g.m() << "  mode=" << opt.mode
              << "  mu=" << mu << " (m_ext=" << trace.m_ext << ")\n";
    std::cout << "trace: " << trace.iterations()
              << " iterations, pr_ax2 " << prob4(trace.first_pr_ax2()) << " -> "
              << prob4(trace.final_pr_ax2()) << ", pr_target "
              << prob4(trace.final_pr_target()) << ", limit " << prob4(trace.limit)
              << (trace.converged ? "" : " (iteration cap reached)") << "\n";
    if (bundle.oracle)
        std::cout << "oracle: optimal cut " << bundle.oracle->optimal_value << "\n";
    return 0;
}

int run_sample(const Options& opt, const Graph& g, Mode mode, int mu) {
    const AmplifyConfig cfg = make_amplify_config(opt, mode, mu);
    RunResultBundle bundle = base_bundle(opt, g, mu);
    attach_oracle(bundle, g, mode);

    const auto trace = probability_trace(g, cfg);
    bundle.trace = RunResultBundle::TraceSummary{trace.first_pr_ax2(),
                                                 trace.final_pr_ax2(),
                                                 trace.iterations()};

    std::optional<SampleResult> best;
    int best_hits = 0;
    for (int t = 0; t < opt.trials; ++t) {
        SeededRng rng(opt.seed + static_cast<std::uint64_t>(t));
        SampleResult r;
        if (opt.backend == "dense") {
            const auto run = run_full_circuit(g, cfg, rng, trace.iterations());
            r.assignment = run.assignment;
            r.cut = run.z.ones;
            r.iterations_used = run.diagnostics.iterations;
            r.stage1_restarts = run.diagnostics.stage1_restarts;
            r.stage3_restarts = run.diagnostics.stage3_restarts;
        } else {
            r = sample_run(g, cfg, rng);
        }
        bundle.stage1_restarts += r.stage1_restarts;
        bundle.stage3_restarts += r.stage3_restarts;
        const bool better =
            !best || (mode == Mode::max ? r.cut > best->cut : r.cut < best->cut);
        if (better) {
            best = r;
            best_hits = 1;
        } else if (r.cut == best->cut) {
            ++best_hits;
        }
    }

    RunResultBundle::Outcome outcome;
    outcome.assignment = best->assignment;
    outcome.cut = best->cut;
    if (bundle.oracle) outcome.match = best->cut == bundle.oracle->optimal_value;
    bundle.result = outcome;
    if (opt.trials > 1)
        bundle.trials_summary = RunResultBundle::TrialsSummary{
            opt.trials, static_cast<double>(best_hits) / opt.trials};

    if (!opt.trace_out.empty()) write_text_file(opt.trace_out, trace_csv(trace));
    if (!opt.json_out.empty()) write_text_file(opt.json_out, result_json(bundle));

    std::cout << "graph: n=" << g.n << " m=" << g.m() << "  mode=" << opt.mode
              << "  mu=" << mu << "\n";
    std::cout << "result: cut " << best->cut << ", assignment "
              << bits_to_string(best->assignment);
    if (outcome.match) std::cout << (*outcome.match ? " (matches oracle)" : " (off optimum)");
    std::cout << "\n";
    if (opt.trials > 1)
        std::cout << "trials: " << opt.trials << ", best-cut fraction "
                  << prob4(bundle.trials_summary->best_cut_fraction) << "\n";
    std::cout << "restarts: stage1 " << bundle.stage1_restarts << ", stage3 "
              << bundle.stage3_restarts << "\n";
    return 0;
}

int run_oracle(const Options& opt, const Graph& g, Mode mode, int mu) {
    RunResultBundle bundle = base_bundle(opt, g, mu);
    bundle.oracle = brute_force_bisection(g, mode); // throws past the cap
    if (!opt.json_out.empty()) write_text_file(opt.json_out, result_json(bundle));
    std::cout << "graph: n=" << g.n << " m=" << g.m() << "\n";
    std::cout << "oracle: " << opt.mode << "-bisection value "
              << bundle.oracle->optimal_value << ", assignment "
              << bits_to_string(bundle.oracle->assignment) << "\n";
    return 0;
}

int run_verify(const Options& opt, const Graph& g, Mode mode, int mu) {
    const AmplifyConfig cfg = make_amplify_config(opt, mode, mu);
    const RegisterLayout lay = dense_layout(g, cfg);
    if (lay.total() > kDenseVerifyQubitCap)
        throw feasibility_error("verify needs n + m_ext + 2 <= " +
                                std::to_string(kDenseVerifyQubitCap) + ", got " +
                                std::to_string(lay.total()));

    const auto structured = probability_trace(g, cfg);
    const int rounds = structured.iterations();
    const auto dense = conditioned_dense_trace(g, cfg, rounds);

    auto branches = build_branches(g, cfg);
    double worst_tv = 0.0;
    double worst_prob = 0.0;
    for (int r = 0; r < rounds; ++r) {
        const auto pairs = apply_q_operator(branches, lay.m_ext());
        condition_on_ax2(branches, pairs, 1);
        worst_prob = std::max(worst_prob,
                              std::abs(dense.pr_ax2[r] - structured.rows[r].pr_ax2));

        std::map<std::pair<std::uint64_t, std::uint64_t>, double> sj, dj;
        for (const auto& b : branches) sj[{b.x.code(), b.z.code()}] += std::norm(b.amp);
        for (const auto& jo : dense.joints[r]) dj[{jo.x_code, jo.z_code}] += jo.prob;
        double tv = 0.0;
        for (const auto& [key, p] : sj) {
            const auto it = dj.find(key);
            tv += std::abs(p - (it == dj.end() ? 0.0 : it->second));
            if (it != dj.end()) dj.erase(it);
        }
        for (const auto& [key, p] : dj) tv += p;
        worst_tv = std::max(worst_tv, 0.5 * tv);
    }

    const bool agree = worst_tv <= 1e-9 && worst_prob <= 1e-9;
    RunResultBundle bundle = base_bundle(opt, g, mu);
    attach_oracle(bundle, g, mode);
    bundle.trace = RunResultBundle::TraceSummary{structured.first_pr_ax2(),
                                                 structured.final_pr_ax2(), rounds};
    if (!opt.json_out.empty()) write_text_file(opt.json_out, result_json(bundle));

    std::cout << "verify: " << rounds << " rounds, max joint TV "
              << worst_tv << ", max probability gap " << worst_prob << "\n";
    std::cout << (agree ? "backends agree\n" : "backends DISAGREE\n");
    return agree ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantum-style max/min graph bisection simulator"};
    Options opt;

    app.add_option("--input", opt.input, "graph file (edge-list format)")->required();
    app.add_option("--mode", opt.mode, "max | min")
        ->check(CLI::IsMember({"max", "min"}));
    app.add_option("--kind", opt.kind, "trace | sample | oracle | verify")
        ->check(CLI::IsMember({"trace", "sample", "oracle", "verify"}));
    app.add_option("--backend", opt.backend, "structured | dense")
        ->check(CLI::IsMember({"structured", "dense"}));
    app.add_option("--mu", opt.mu, "dummy-qubit count, or 'auto' (default 0)");
    app.add_option("--delta", opt.delta, "target first-round success probability")
        ->check(CLI::Range(1e-9, 1.0 - 1e-9));
    app.add_option("--lambda", opt.lambda, "precision exponent, epsilon = 10^-lambda")
        ->check(CLI::PositiveNumber);
    app.add_option("--phi", opt.phi, "preparation phase");
    app.add_option("--trials", opt.trials, "number of seeded sample runs")
        ->check(CLI::PositiveNumber);
    app.add_option("--seed", opt.seed, "RNG seed");
    app.add_option("--trace-out", opt.trace_out, "write the per-round trace CSV here");
    app.add_option("--json-out", opt.json_out, "write the result JSON here");
    app.add_flag("--dump-graph", opt.dump_graph,
                 "print the parsed graph in canonical form and exit");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        const Graph g = parse_graph_file(opt.input);
        if (opt.dump_graph) {
            std::cout << format_graph(g);
            return 0;
        }
        const Mode mode = opt.mode == "max" ? Mode::max : Mode::min;
        const int mu = resolve_mu(opt, mode, g.n);

        if (opt.kind == "trace") return run_trace(opt, g, mode, mu);
        if (opt.kind == "sample") return run_sample(opt, g, mode, mu);
        if (opt.kind == "oracle") return run_oracle(opt, g, mode, mu);
        return run_verify(opt, g, mode, mu);
    } catch (const CLI::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const restart_limit_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRestartCap;
    } catch (const parse_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const feasibility_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInfeasible;
    }
}
