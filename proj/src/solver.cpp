#include "fw/solver.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace fw {

namespace {

using nlohmann::json;

int support_size(const Vector& x) {
    int s = 0;
    for (double xi : x)
        if (xi != 0.0) ++s;
    return s;
}

std::string rule_descriptor_json(const StepRuleSpec& rule) {
    json j;
    j["kind"] = to_string(rule.kind);
    switch (rule.kind) {
        case StepRuleKind::Constant: j["alpha"] = rule.constant_alpha; break;
        case StepRuleKind::OptimizedConstant: j["k_total"] = rule.k_total; break;
        case StepRuleKind::WarmStartStatic: j["c1"] = rule.warm_c1; break;
        default: break;
    }
    return j.dump();
}

std::string inexact_descriptor_json(const InexactnessSpec& spec) {
    json j;
    bool lmo_schedule_used = false;
    for (int k : {0, 1, 2, 3, 5, 10, 100, 1000})
        if (spec.lmo_delta(k) > 0.0) lmo_schedule_used = true;
    switch (spec.gradient_model) {
        case GradientModel::Exact: j["model"] = lmo_schedule_used ? "lmo_delta" : "exact"; break;
        case GradientModel::DeltaOracle: j["model"] = "delta_oracle"; break;
        case GradientModel::DLOracle: j["model"] = "dl_oracle"; break;
    }
    if (spec.gradient_model != GradientModel::Exact) j["delta"] = spec.gradient_delta;
    if (spec.gradient_lipschitz) j["L"] = *spec.gradient_lipschitz;
    j["seed"] = spec.seed;
    return j.dump();
}

std::function<double(const Vector&)> other_bound_fn(const Problem& problem,
                                                    const RunOptions& options) {
    if (!options.use_other_bound) return nullptr;
    if (problem.minmax_bound) return problem.minmax_bound;
    if (problem.hstar) {
        double hstar = *problem.hstar;
        return [hstar](const Vector&) { return hstar; };
    }
    throw std::invalid_argument("run: use_other_bound set but problem has no bound structure");
}

// Zero-gap detection slack; see AlreadyOptimal handling below.
constexpr double kZeroGapSlack = 1e-14;

struct Engine {
    const Problem& problem;
    StepRuleSpec rule;
    bool dynamic = false;
    double c0 = 1.0;
    InexactnessSpec inexact;
    RunOptions options;
    Vector start;

    RunTrace run() {
        const ObjectiveOracle& objective = *problem.objective;
        const FeasibleRegion& region = *problem.region;
        auto other_bound = other_bound_fn(problem, options);
        const bool grad_delta_mode = inexact.gradient_model == GradientModel::DeltaOracle;
        const bool dl_mode = inexact.gradient_model == GradientModel::DLOracle;
        if (dl_mode && options.prestart)
            throw std::invalid_argument("run_inexact: pre-start is not defined for (δ,L)-oracle runs");
        if (dl_mode && !inexact.gradient_lipschitz)
            throw std::invalid_argument("run_inexact: (δ,L)-oracle requires L");

        Rng rng(inexact.seed);

        RunTrace trace;
        trace.problem_id = problem.id;
        trace.rule_descriptor =
            dynamic ? json{{"kind", "dynamic"}, {"c0", c0}}.dump() : rule_descriptor_json(rule);
        trace.inexactness_descriptor = inexact_descriptor_json(inexact);
        if (dl_mode) {
            // The (δ,L) bound needs Diam_Q; carry it so traces audit
            // self-contained.
            json j = json::parse(trace.inexactness_descriptor);
            j["diam"] = region.diameter();
            trace.inexactness_descriptor = j.dump();
        }
        trace.status = RunStatus::MaxIters;

        if (!region.contains(start, 1e-9))
            throw std::invalid_argument("run: starting point not feasible");

        Vector lambda = start;
        BoundState bounds;
        if (options.b_prior) bounds.best = *options.b_prior;

        auto finish = [&](RunStatus status) {
            trace.status = status;
            trace.final_lambda = lambda;
            trace.final_h = objective.value(lambda);
            return trace;
        };

        // Pre-start step: full step to the subproblem solution.
        if (options.prestart) {
            auto pre = prestart(objective, region, lambda,
                                options.b_prior, inexact.lmo_delta(0), other_bound);
            bounds = pre.bounds;
            trace.records.push_back(pre.record);
            lambda = pre.lambda1;
            if (pre.already_optimal) return finish(RunStatus::AlreadyOptimal);
        }

        double ck = c0;
        std::optional<double> warm_gap1;

        for (int k = 1; k <= options.iters; ++k) {
            double h = objective.value(lambda);

            IterationRecord rec;
            rec.k = k;
            rec.lambda = lambda;
            rec.h = h;
            rec.support_size = support_size(lambda);

            DecisionPoint tilde;
            double bw, delta_eff = 0.0;
            std::optional<double> fwgap;
            if (dl_mode) {
                // Method 5: oracle value and gradient define the Wolfe
                // bound; no FW gap is computed.
                auto [hval, g] = dl_oracle(objective, lambda, inexact.gradient_delta,
                                           *inexact.gradient_lipschitz);
                tilde = region.lmo(g);
                Vector d = sub(tilde.coords, lambda);
                bw = hval + dot(g.coeffs, d);
                delta_eff = inexact.gradient_delta;
            } else if (grad_delta_mode) {
                // δ-oracle gradient run: exact LMO on the inexact gradient
                // is a 2δ-approximate subproblem solution.
                LinearFunctional g = delta_gradient(objective, region, lambda,
                                                    inexact.gradient_delta, rng);
                tilde = region.lmo(g);
                delta_eff = 2.0 * inexact.gradient_delta;
                LinearFunctional true_grad = objective.gradient(lambda);
                Vector d = sub(tilde.coords, lambda);
                double lin = dot(true_grad.coeffs, d);
                bw = h + lin + delta_eff;
                fwgap = lin + delta_eff;
                // Realized suboptimality against the exact oracle.
                DecisionPoint exact_tilde = region.lmo(true_grad);
                rec.lmo_suboptimality =
                    dot(true_grad.coeffs, exact_tilde.coords) - dot(true_grad.coeffs, tilde.coords);
            } else {
                double delta_k = inexact.lmo_delta(k);
                auto sp = subproblem(objective, region, lambda, delta_k);
                tilde = sp.lambda_tilde;
                bw = sp.bw;
                fwgap = sp.fwgap;
                delta_eff = delta_k;
                rec.lmo_suboptimality = sp.lmo_suboptimality;
            }

            std::optional<double> bo;
            if (other_bound) bo = other_bound(lambda);
            bounds.update(bw, bo);

            rec.bw = bw;
            rec.bo = bo;
            rec.bbest = bounds.best;
            rec.fwgap = fwgap;
            if (delta_eff > 0.0) rec.delta = delta_eff;
            if (dynamic) rec.ck = ck;  // updated below once the doubling runs

            double bound_gap = bounds.best - h;

            // Step-size selection.
            double step = 0.0;
            bool stop_optimal = false;
            switch (dynamic ? StepRuleKind::Dynamic : rule.kind) {
                case StepRuleKind::Standard: step = standard_step(k); break;
                case StepRuleKind::Averaging: step = averaging_step(k); break;
                case StepRuleKind::Constant: step = rule.constant_alpha; break;
                case StepRuleKind::OptimizedConstant:
                    step = optimized_constant(rule.k_total);
                    break;
                case StepRuleKind::WarmStartStatic: {
                    if (!warm_gap1) warm_gap1 = bounds.best - h;  // captured at k = 1
                    auto s = warm_start_step(k, rule.warm_c1, *warm_gap1);
                    if (!s) stop_optimal = true;
                    else step = *s;
                    break;
                }
                case StepRuleKind::Dynamic: {
                    if (bound_gap <= 0.0) {
                        stop_optimal = true;
                        break;
                    }
                    // Test-then-double: find C_k ≥ C_{k−1} whose induced
                    // step satisfies the acceptance condition.  The step is
                    // re-evaluated at every candidate C since it depends on
                    // it.
                    Vector d = sub(tilde.coords, lambda);
                    while (true) {
                        double a = *dynamic_step(ck, bound_gap);
                        Vector trial = lambda;
                        for (std::size_t i = 0; i < trial.size(); ++i)
                            trial[i] = (1.0 - a) * lambda[i] + a * tilde.coords[i];
                        double lhs = objective.value(trial);
                        double rhs = h + a * bound_gap - 0.5 * ck * a * a;
                        if (lhs >= rhs - 1e-12 * std::max(1.0, std::fabs(h))) {
                            step = a;
                            break;
                        }
                        ck *= 2.0;
                        ++trace.doublings;
                        if (ck > 1e300) {
                            rec.stepsize = 0.0;
                            trace.records.push_back(std::move(rec));
                            return finish(RunStatus::Aborted);
                        }
                    }
                    rec.ck = ck;
                    break;
                }
                case StepRuleKind::LineSearch:
                    step = line_search(objective, lambda, tilde.coords, rule.candidates);
                    break;
            }

            if (stop_optimal) {
                rec.stepsize = 0.0;
                trace.records.push_back(std::move(rec));
                return finish(RunStatus::AlreadyOptimal);
            }
            if (!(step >= 0.0 && step < 1.0)) {
                std::ostringstream msg;
                msg << "run: step rule produced stepsize " << step << " outside [0,1)";
                throw std::runtime_error(msg.str());
            }
            rec.stepsize = step;
            trace.records.push_back(rec);

            // Stopping tests on the pre-step state.
            if (!dl_mode && fwgap && *fwgap <= kZeroGapSlack * std::max(1.0, std::fabs(h)))
                return finish(RunStatus::AlreadyOptimal);
            if (options.tol.gap_tol > 0.0 && bound_gap <= options.tol.gap_tol)
                return finish(RunStatus::GapTolMet);
            if (options.tol.fwgap_tol > 0.0 && fwgap && *fwgap <= options.tol.fwgap_tol)
                return finish(RunStatus::FwGapTolMet);

            // λ_{k+1} = (1−ᾱ)λ_k + ᾱλ̃_k, as an explicit convex combination
            // so exact zeros stay exact (the sparsity invariant relies on
            // this).
            for (std::size_t i = 0; i < lambda.size(); ++i)
                lambda[i] = (1.0 - step) * lambda[i] + step * tilde.coords[i];
        }

        return finish(RunStatus::MaxIters);
    }
};

}  // namespace

SubproblemResult subproblem(const ObjectiveOracle& objective, const FeasibleRegion& region,
                            const Vector& lambda, double delta) {
    LinearFunctional grad = objective.gradient(lambda);
    auto [tilde, cert] = approx_lmo(region, grad, delta);
    double h = objective.value(lambda);
    Vector d = sub(tilde.coords, lambda);
    double lin = dot(grad.coeffs, d);
    SubproblemResult r;
    r.lambda_tilde = std::move(tilde);
    r.bw = h + lin + delta;
    r.fwgap = lin + delta;
    r.delta_used = delta;
    r.lmo_suboptimality = cert;
    return r;
}

PrestartResult prestart(const ObjectiveOracle& objective, const FeasibleRegion& region,
                        const Vector& lambda0, std::optional<double> b_prior, double delta0,
                        std::function<double(const Vector&)> other_bound) {
    auto sp = subproblem(objective, region, lambda0, delta0);
    double h0 = objective.value(lambda0);

    PrestartResult out;
    out.bounds = BoundState{};
    if (b_prior) out.bounds.best = *b_prior;
    std::optional<double> bo;
    if (other_bound) bo = other_bound(lambda0);
    out.bounds.update(sp.bw, bo);

    IterationRecord rec;
    rec.k = 0;
    rec.lambda = lambda0;
    rec.h = h0;
    rec.stepsize = 1.0;  // full step
    rec.bw = sp.bw;
    rec.bo = bo;
    rec.bbest = out.bounds.best;
    rec.fwgap = sp.fwgap;
    if (delta0 > 0.0) rec.delta = delta0;
    int s = 0;
    for (double x : lambda0)
        if (x != 0.0) ++s;
    rec.support_size = s;
    out.record = std::move(rec);

    out.lambda1 = sp.lambda_tilde.coords;
    out.already_optimal = sp.fwgap <= kZeroGapSlack * std::max(1.0, std::fabs(h0));
    if (out.already_optimal) out.lambda1 = lambda0;
    return out;
}

Vector default_start(const FeasibleRegion& region) {
    LinearFunctional e1;
    e1.coeffs.assign(region.dimension(), 0.0);
    if (!e1.coeffs.empty()) e1.coeffs[0] = 1.0;
    return region.lmo(e1).coords;
}

RunTrace run_basic(const Problem& problem, const StepRuleSpec& rule, const RunOptions& options,
                   std::optional<Vector> start) {
    Engine e{problem, rule, false, 1.0, InexactnessSpec::exact(), options,
             start ? *start : default_start(*problem.region)};
    return e.run();
}

RunTrace run_dynamic(const Problem& problem, double c0, const RunOptions& options,
                     std::optional<Vector> start) {
    if (c0 <= 0.0) throw std::invalid_argument("run_dynamic: C_0 must be positive");
    Engine e{problem, StepRuleSpec{}, true, c0, InexactnessSpec::exact(), options,
             start ? *start : default_start(*problem.region)};
    return e.run();
}

RunTrace run_inexact(const Problem& problem, const StepRuleSpec& rule,
                     const InexactnessSpec& inexactness, const RunOptions& options,
                     std::optional<Vector> start) {
    Engine e{problem, rule, false, 1.0, inexactness, options,
             start ? *start : default_start(*problem.region)};
    return e.run();
}

double minmax_bound(const Problem& problem, const Vector& lambda) {
    if (!problem.minmax_bound)
        throw std::invalid_argument("minmax_bound: problem has no minmax structure");
    return problem.minmax_bound(lambda);
}

}  // namespace fw
