#include "qbisect/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qbisect/errors.hpp"

namespace qbisect {

namespace {

std::string sig12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

} // namespace

std::string trace_csv(const ProbabilityTrace& trace) {
    std::ostringstream out;
    out << "r,pr_ax2,pr_target\n";
    for (const auto& row : trace.rows)
        out << row.r << ',' << sig12(row.pr_ax2) << ',' << sig12(row.pr_target) << '\n';
    return out.str();
}

std::string distribution_csv(const ProbabilityTrace& trace) {
    std::ostringstream out;
    out << "r,d,mass\n";
    for (size_t i = 0; i < trace.distributions.size(); ++i)
        for (const auto& dm : trace.distributions[i])
            out << (i + 1) << ',' << dm.d << ',' << sig12(dm.mass) << '\n';
    return out.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw feasibility_error("cannot open for writing: " + path);
    out << content;
    if (!out) throw feasibility_error("write failed: " + path);
}

std::string bits_to_string(const Assignment& a) {
    std::string s;
    s.reserve(a.bits.size());
    for (auto b : a.bits) s.push_back(b ? '1' : '0');
    return s;
}

std::string result_json(const RunResultBundle& bundle) {
    using json = nlohmann::ordered_json;
    json j;

    j["config"] = {
        {"input", bundle.input_path}, {"mode", bundle.mode},
        {"backend", bundle.backend},  {"kind", bundle.kind},
        {"mu", bundle.mu_request},    {"mu_resolved", bundle.mu_resolved},
        {"delta", bundle.delta},      {"lambda", bundle.lambda},
        {"phi", bundle.phi},          {"trials", bundle.trials},
        {"seed", bundle.seed},
    };
    j["graph"] = {{"n", bundle.n}, {"m", bundle.m}};

    if (bundle.oracle) {
        j["oracle"] = {{"value", bundle.oracle->optimal_value},
                       {"assignment", bits_to_string(bundle.oracle->assignment)}};
    } else {
        j["oracle"] = nullptr;
    }

    if (bundle.result) {
        json r = {{"assignment", bits_to_string(bundle.result->assignment)},
                  {"cut", bundle.result->cut}};
        if (bundle.result->match)
            r["match"] = *bundle.result->match;
        else
            r["match"] = nullptr;
        j["result"] = r;
    } else {
        j["result"] = nullptr;
    }

    if (bundle.trace) {
        j["trace"] = {{"first_pr_ax2", bundle.trace->first_pr_ax2},
                      {"final_pr_ax2", bundle.trace->final_pr_ax2},
                      {"iterations", bundle.trace->iterations}};
    } else {
        j["trace"] = nullptr;
    }

    j["restarts"] = {{"stage1", bundle.stage1_restarts},
                     {"stage3", bundle.stage3_restarts}};
    if (bundle.trials_summary)
        j["trials_summary"] = {{"count", bundle.trials_summary->count},
                               {"best_cut_fraction", bundle.trials_summary->best_cut_fraction}};
    j["seed"] = bundle.seed;

    return j.dump(2) + "\n";
}

} // namespace qbisect
