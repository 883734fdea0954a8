#pragma once

#include <optional>
#include <string>

#include "fw/inexact.hpp"
#include "fw/solver.hpp"
#include "fw/steprules.hpp"

namespace fw {

// Parsed and validated run configuration (JSON, schema version 1).  Unknown
// keys are rejected so typos fail loudly instead of silently defaulting.
struct RunConfig {
    std::string problem_json;  // the "problem" sub-object, serialized
    StepRuleSpec rule;
    bool dynamic = false;
    double dynamic_c0 = 1.0;
    InexactnessSpec inexact;
    RunOptions options;
    std::string trace_path;
    std::string summary_path;
    std::string normalized_json;  // canonical form embedded into traces
};

// Throws std::invalid_argument with a field-path diagnostic on any schema
// violation.
RunConfig parse_run_config(const std::string& json_text);

// Executes a parsed config and returns the trace (with the normalized
// config embedded).  Output files are not written here.
RunTrace execute_run_config(const RunConfig& config);

// Summary JSON for a finished run:
// {status, iterations, final_gap, final_fwgap, best_bound, curvature_used,
//  doublings}.
std::string run_summary_json(const RunTrace& trace, double curvature_used);

}  // namespace fw
