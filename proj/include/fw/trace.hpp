#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fw/linalg.hpp"
#include "fw/steprules.hpp"

namespace fw {

// Running best upper bound on h*.  Nonincreasing by construction.
struct BoundState {
    double best = std::numeric_limits<double>::infinity();
    double last_wolfe = std::numeric_limits<double>::infinity();
    std::optional<double> last_other;

    void update(double wolfe, std::optional<double> other) {
        last_wolfe = wolfe;
        last_other = other;
        best = std::min(best, wolfe);
        if (other) best = std::min(best, *other);
    }
};

enum class RunStatus { MaxIters, GapTolMet, FwGapTolMet, AlreadyOptimal, Aborted };

std::string to_string(RunStatus s);

// One row of a run trace.  Row k describes the state at iterate λ_k: the
// subproblem solved there, the bounds after the update, and the step taken.
struct IterationRecord {
    int k = 0;
    Vector lambda;  // in-memory only; not serialized to CSV
    double h = 0.0;
    double stepsize = 0.0;
    double bw = 0.0;
    std::optional<double> bo;
    double bbest = 0.0;
    std::optional<double> fwgap;   // absent on (δ,L)-oracle runs
    std::optional<double> ck;      // dynamic runs
    std::optional<double> delta;   // inexact runs
    int support_size = 0;
    // Realized LMO suboptimality against the exact oracle, recorded on
    // inexact runs for auditing.  In-memory only.
    std::optional<double> lmo_suboptimality;
};

// Complete record of one run.  Immutable once the run finishes.
struct RunTrace {
    std::string problem_id;
    std::string rule_descriptor;
    std::string inexactness_descriptor;
    std::vector<IterationRecord> records;
    RunStatus status = RunStatus::MaxIters;
    Vector final_lambda;   // λ_{K+1}
    double final_h = 0.0;  // h(λ_{K+1})
    int doublings = 0;
    // Embedded config (JSON text) so a trace file is self-describing.
    std::string config_json;

    bool has_prestart() const { return !records.empty() && records.front().k == 0; }
    int first_k() const { return records.empty() ? 0 : records.front().k; }
    int last_k() const { return records.empty() ? -1 : records.back().k; }

    const IterationRecord& record(int k) const {
        return records.at(static_cast<std::size_t>(k - first_k()));
    }
    bool has_record(int k) const { return k >= first_k() && k <= last_k(); }

    // h(λ_{k+1}): the next row's value, or the terminal evaluation.
    double h_after(int k) const {
        return has_record(k + 1) ? record(k + 1).h : final_h;
    }

    // ᾱ_1..ᾱ_k as a contiguous vector (excludes the pre-start full step).
    std::vector<double> steps_from_1(int k) const;
};

// Trace CSV serialization.  Layout: `# key=value` comment lines carrying the
// run config and terminal data, then the fixed header
// k,stepsize,h_lambda,Bw,Bo,Bbest,G,C_k,delta_k,support and one row per
// record.  Absent optionals serialize as empty fields.  Numbers use
// shortest-round-trip formatting, so re-parsing reproduces values exactly.
std::string trace_to_csv(const RunTrace& trace);
RunTrace trace_from_csv(const std::string& text);

// Shortest decimal representation that round-trips the double.
std::string format_double(double v);

}  // namespace fw
