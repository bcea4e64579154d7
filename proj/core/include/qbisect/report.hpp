#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "qbisect/amplify.hpp"
#include "qbisect/graph.hpp"

namespace qbisect {

// "r,pr_ax2,pr_target" rows, probabilities at 12 significant digits.
std::string trace_csv(const ProbabilityTrace& trace);

// "r,d,mass" rows: the conditioned distance-class distribution per round.
std::string distribution_csv(const ProbabilityTrace& trace);

// Throws feasibility_error when the file cannot be written.
void write_text_file(const std::string& path, const std::string& content);

std::string bits_to_string(const Assignment& a);

// Everything the machine-readable result carries. Sections that do not
// apply to a run stay disengaged and serialize as null.
struct RunResultBundle {
    // config echo
    std::string input_path;
    std::string mode;
    std::string backend;
    std::string kind;
    std::string mu_request; // "auto" or the explicit value
    int mu_resolved = 0;
    double delta = 0.9;
    double lambda = 4.0;
    double phi = 0.0;
    int trials = 1;
    std::uint64_t seed = 0;

    int n = 0;
    int m = 0;

    std::optional<BisectionResult> oracle;

    struct Outcome {
        Assignment assignment;
        int cut = 0;
        std::optional<bool> match; // only when the oracle ran
    };
    std::optional<Outcome> result;

    struct TraceSummary {
        double first_pr_ax2 = 0.0;
        double final_pr_ax2 = 0.0;
        int iterations = 0;
    };
    std::optional<TraceSummary> trace;

    long stage1_restarts = 0;
    long stage3_restarts = 0;

    struct TrialsSummary {
        int count = 0;
        double best_cut_fraction = 0.0; // fraction of trials hitting the best cut
    };
    std::optional<TrialsSummary> trials_summary;
};

// Stable key order, full double precision.
std::string result_json(const RunResultBundle& bundle);

} // namespace qbisect
