#include "fw/config.hpp"

#include <stdexcept>

#include "json.hpp"

#include "fw/guarantees.hpp"
#include "fw/problems.hpp"

namespace fw {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw std::invalid_argument("config: field '" + path + "': " + what);
}

void reject_unknown(const json& obj, const std::string& path,
                    std::initializer_list<const char*> allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char* a : allowed)
            if (it.key() == a) ok = true;
        if (!ok) fail(path.empty() ? it.key() : path + "." + it.key(), "unknown key");
    }
}

double require_number(const json& obj, const std::string& path, const char* key) {
    if (!obj.contains(key)) fail(path + "." + key, "missing");
    if (!obj[key].is_number()) fail(path + "." + key, "expected a number");
    return obj[key].get<double>();
}

StepRuleSpec parse_rule(const json& r, bool& dynamic, double& c0) {
    if (!r.is_object()) fail("rule", "expected an object");
    if (!r.contains("kind") || !r["kind"].is_string()) fail("rule.kind", "missing or not a string");
    const std::string kind = r["kind"].get<std::string>();

    if (kind == "dynamic") {
        reject_unknown(r, "rule", {"kind", "c0"});
        dynamic = true;
        c0 = r.contains("c0") ? require_number(r, "rule", "c0") : 1.0;
        if (c0 <= 0.0) fail("rule.c0", "must be positive");
        return {};
    }
    dynamic = false;

    StepRuleSpec spec;
    try {
        spec.kind = step_rule_kind_from_string(kind);
    } catch (const std::exception&) {
        fail("rule.kind", "unknown rule '" + kind + "'");
    }
    switch (spec.kind) {
        case StepRuleKind::Standard:
        case StepRuleKind::Averaging:
            reject_unknown(r, "rule", {"kind"});
            break;
        case StepRuleKind::Constant:
            reject_unknown(r, "rule", {"kind", "alpha"});
            spec.constant_alpha = require_number(r, "rule", "alpha");
            if (!(spec.constant_alpha >= 0.0 && spec.constant_alpha < 1.0))
                fail("rule.alpha", "must lie in [0, 1)");
            break;
        case StepRuleKind::OptimizedConstant:
            reject_unknown(r, "rule", {"kind", "k_total"});
            spec.k_total = static_cast<int>(require_number(r, "rule", "k_total"));
            if (spec.k_total < 1) fail("rule.k_total", "must be >= 1");
            break;
        case StepRuleKind::WarmStartStatic:
            reject_unknown(r, "rule", {"kind", "c1"});
            spec.warm_c1 = require_number(r, "rule", "c1");
            if (spec.warm_c1 <= 0.0) fail("rule.c1", "must be positive");
            break;
        case StepRuleKind::LineSearch: {
            reject_unknown(r, "rule", {"kind", "candidates"});
            if (r.contains("candidates")) {
                const json& c = r["candidates"];
                reject_unknown(c, "rule.candidates", {"type", "lo", "hi", "values"});
                const std::string type = c.value("type", "full");
                if (type == "full") {
                    spec.candidates = CandidateSet::full();
                } else if (type == "interval") {
                    spec.candidates = CandidateSet::interval(
                        require_number(c, "rule.candidates", "lo"),
                        require_number(c, "rule.candidates", "hi"));
                    if (!(spec.candidates.lo >= 0.0 && spec.candidates.hi < 1.0 &&
                          spec.candidates.lo <= spec.candidates.hi))
                        fail("rule.candidates", "interval must satisfy 0 <= lo <= hi < 1");
                } else if (type == "points") {
                    if (!c.contains("values") || !c["values"].is_array())
                        fail("rule.candidates.values", "missing or not an array");
                    std::vector<double> v = c["values"].get<std::vector<double>>();
                    for (double x : v)
                        if (!(x >= 0.0 && x < 1.0))
                            fail("rule.candidates.values", "entries must lie in [0, 1)");
                    spec.candidates = CandidateSet::points(std::move(v));
                } else {
                    fail("rule.candidates.type", "expected full|interval|points");
                }
            }
            break;
        }
        default:
            fail("rule.kind", "rule '" + kind + "' is not configurable here");
    }
    return spec;
}

InexactnessSpec parse_inexactness(const json& x) {
    if (!x.is_object()) fail("inexactness", "expected an object");
    reject_unknown(x, "inexactness", {"model", "delta", "L", "seed"});
    const std::string model = x.value("model", "exact");
    std::uint64_t seed = 0;
    if (x.contains("seed")) {
        if (!x["seed"].is_number_unsigned()) fail("inexactness.seed", "expected unsigned integer");
        seed = x["seed"].get<std::uint64_t>();
    }
    if (model == "exact") {
        reject_unknown(x, "inexactness", {"model", "seed"});
        return InexactnessSpec::exact();
    }
    double delta = require_number(x, "inexactness", "delta");
    if (delta < 0.0) fail("inexactness.delta", "must be nonnegative");
    if (model == "lmo_delta") return InexactnessSpec::constant_lmo_delta(delta, seed);
    if (model == "delta_oracle") return InexactnessSpec::delta_oracle(delta, seed);
    if (model == "dl_oracle") {
        double l = require_number(x, "inexactness", "L");
        if (l <= 0.0) fail("inexactness.L", "must be positive");
        return InexactnessSpec::dl_oracle_spec(delta, l);
    }
    fail("inexactness.model", "expected exact|lmo_delta|delta_oracle|dl_oracle");
}

}  // namespace

RunConfig parse_run_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("config: invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw std::invalid_argument("config: top level must be an object");
    reject_unknown(j, "",
                   {"schema", "problem", "rule", "inexactness", "iters", "tolerances", "prestart",
                    "b_prior", "use_other_bound", "output"});
    if (!j.contains("schema") || j["schema"] != 1) fail("schema", "must be the integer 1");
    if (!j.contains("problem") || !j["problem"].is_object()) fail("problem", "missing object");
    if (!j.contains("rule")) fail("rule", "missing");
    if (!j.contains("iters")) fail("iters", "missing");
    if (!j["iters"].is_number_integer() || j["iters"].get<int>() < 0)
        fail("iters", "expected integer >= 0");

    RunConfig cfg;
    cfg.problem_json = j["problem"].dump();
    cfg.rule = parse_rule(j["rule"], cfg.dynamic, cfg.dynamic_c0);
    if (j.contains("inexactness")) cfg.inexact = parse_inexactness(j["inexactness"]);
    cfg.options.iters = j["iters"].get<int>();
    if (j.contains("tolerances")) {
        const json& t = j["tolerances"];
        reject_unknown(t, "tolerances", {"gap_tol", "fwgap_tol"});
        if (t.contains("gap_tol")) cfg.options.tol.gap_tol = require_number(t, "tolerances", "gap_tol");
        if (t.contains("fwgap_tol"))
            cfg.options.tol.fwgap_tol = require_number(t, "tolerances", "fwgap_tol");
    }
    if (j.contains("prestart")) {
        if (!j["prestart"].is_boolean()) fail("prestart", "expected a boolean");
        cfg.options.prestart = j["prestart"].get<bool>();
    }
    if (j.contains("b_prior")) cfg.options.b_prior = require_number(j, "", "b_prior");
    if (j.contains("use_other_bound")) {
        if (!j["use_other_bound"].is_boolean()) fail("use_other_bound", "expected a boolean");
        cfg.options.use_other_bound = j["use_other_bound"].get<bool>();
    }
    if (j.contains("output")) {
        const json& o = j["output"];
        reject_unknown(o, "output", {"trace", "summary"});
        if (o.contains("trace")) cfg.trace_path = o["trace"].get<std::string>();
        if (o.contains("summary")) cfg.summary_path = o["summary"].get<std::string>();
    }
    if (cfg.dynamic && cfg.inexact.gradient_model != GradientModel::Exact)
        fail("rule.kind", "dynamic rule supports only exact gradients");

    // Validate the problem spec eagerly so config errors exit with code 1.
    try {
        (void)problem_from_json(cfg.problem_json);
    } catch (const std::exception& e) {
        fail("problem", e.what());
    }

    cfg.normalized_json = j.dump();
    return cfg;
}

RunTrace execute_run_config(const RunConfig& config) {
    Problem problem = problem_from_json(config.problem_json);
    RunTrace trace;
    if (config.dynamic) {
        trace = run_dynamic(problem, config.dynamic_c0, config.options);
    } else if (config.inexact.gradient_model != GradientModel::Exact ||
               config.inexact.lmo_delta(0) > 0.0 || config.inexact.lmo_delta(1) > 0.0) {
        trace = run_inexact(problem, config.rule, config.inexact, config.options);
    } else {
        trace = run_basic(problem, config.rule, config.options);
    }
    trace.config_json = config.normalized_json;
    return trace;
}

std::string run_summary_json(const RunTrace& trace, double curvature_used) {
    json j;
    j["status"] = to_string(trace.status);
    j["iterations"] = std::max(0, trace.last_k());
    if (!trace.records.empty()) {
        const auto& last = trace.records.back();
        j["final_gap"] = last.bbest - trace.final_h;
        if (last.fwgap) j["final_fwgap"] = *last.fwgap;
        else j["final_fwgap"] = nullptr;
        j["best_bound"] = last.bbest;
    } else {
        j["final_gap"] = nullptr;
        j["final_fwgap"] = nullptr;
        j["best_bound"] = nullptr;
    }
    j["curvature_used"] = curvature_used;
    j["doublings"] = trace.doublings;
    return j.dump(2);
}

}  // namespace fw
