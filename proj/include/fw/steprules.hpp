#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fw/objective.hpp"

namespace fw {

// Auxiliary sequences attached to a step-size sequence {ᾱ_i}:
//   β_k = 1 / Π_{j<k} (1 − ᾱ_j),   α_k = β_k ᾱ_k / (1 − ᾱ_k),   β_1 = 1.
// These convert step sizes into the weights appearing in every convergence
// bound evaluated by the guarantees module.
struct DualAverages {
    std::vector<double> alphas;  // α_1..α_k
    std::vector<double> betas;   // β_1..β_{k+1}

    double beta(int i) const { return betas.at(static_cast<std::size_t>(i) - 1); }
    double alpha(int i) const { return alphas.at(static_cast<std::size_t>(i) - 1); }
};

// Builds the sequences for ᾱ_1..ᾱ_k, all required in [0, 1).
DualAverages dual_averages(const std::vector<double>& stepsizes);

// ᾱ_i = 2/(i+2)
double standard_step(int i);

// ᾱ_i = 1/(i+1); makes λ_{k+1} the simple average of the LMO outputs
// when combined with the pre-start step.
double averaging_step(int i);

// ᾱ* = 1 − (k+1)^{−1/k}, the constant step minimizing the k-iteration
// constant-step bound.
double optimized_constant(int k_total);

// Static warm-start rule: 2/(2C_1/gap_1 + i + 1).  Empty optional signals
// gap_1 ≤ 0, i.e. the iterate is already optimal.
std::optional<double> warm_start_step(int i, double c1, double gap1);

// Dynamic rule: 2/(2C_k/gap_k + 2).  Empty optional when gap_k ≤ 0.
std::optional<double> dynamic_step(double ck, double gapk);

// Step-size candidate set for the line search: a closed interval inside
// [0, 1−1e-12], or an explicit finite set of values.
struct CandidateSet {
    double lo = 0.0;
    double hi = 1.0 - 1e-12;
    std::vector<double> finite;  // when nonempty, overrides the interval

    static CandidateSet full() { return {}; }
    static CandidateSet interval(double lo, double hi) { return {lo, hi, {}}; }
    static CandidateSet points(std::vector<double> v) { return {0.0, 0.0, std::move(v)}; }
};

// argmax over the candidate set of α ↦ h(λ + α(λ̃ − λ)).  Closed form when
// the objective exposes a Hessian product, golden section otherwise.
double line_search(const ObjectiveOracle& objective, const Vector& lambda,
                   const Vector& lambda_tilde, const CandidateSet& candidates);

enum class StepRuleKind {
    Standard,
    Averaging,
    Constant,
    OptimizedConstant,
    WarmStartStatic,
    Dynamic,
    LineSearch,
};

// Declarative rule description used by the solver and the CLI config.
struct StepRuleSpec {
    StepRuleKind kind = StepRuleKind::Standard;
    double constant_alpha = 0.5;   // Constant
    int k_total = 100;             // OptimizedConstant
    double warm_c1 = 1.0;          // WarmStartStatic curvature estimate C_1
    CandidateSet candidates = CandidateSet::full();  // LineSearch

    static StepRuleSpec standard() { return {}; }
    static StepRuleSpec averaging() { return {StepRuleKind::Averaging}; }
    static StepRuleSpec constant(double alpha) {
        StepRuleSpec s{StepRuleKind::Constant};
        s.constant_alpha = alpha;
        return s;
    }
    static StepRuleSpec optimized(int k_total) {
        StepRuleSpec s{StepRuleKind::OptimizedConstant};
        s.k_total = k_total;
        return s;
    }
    static StepRuleSpec warm_start(double c1) {
        StepRuleSpec s{StepRuleKind::WarmStartStatic};
        s.warm_c1 = c1;
        return s;
    }
    static StepRuleSpec line_search_rule(CandidateSet cs = CandidateSet::full()) {
        StepRuleSpec s{StepRuleKind::LineSearch};
        s.candidates = std::move(cs);
        return s;
    }
};

std::string to_string(StepRuleKind kind);
StepRuleKind step_rule_kind_from_string(const std::string& s);

}  // namespace fw
