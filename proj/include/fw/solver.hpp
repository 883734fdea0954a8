#pragma once

#include <optional>

#include "fw/inexact.hpp"
#include "fw/problems.hpp"
#include "fw/steprules.hpp"
#include "fw/trace.hpp"

namespace fw {

struct Tolerances {
    double gap_tol = 0.0;    // stop when B_k − h(λ_k) ≤ gap_tol (if > 0)
    double fwgap_tol = 0.0;  // stop when G_k ≤ fwgap_tol (if > 0)
};

struct RunOptions {
    int iters = 100;
    Tolerances tol;
    bool prestart = true;
    std::optional<double> b_prior;
    // Feed B^o_k from minmax structure or known h* when available.
    bool use_other_bound = false;
};

struct SubproblemResult {
    DecisionPoint lambda_tilde;
    double bw = 0.0;
    double fwgap = 0.0;
    double delta_used = 0.0;
    double lmo_suboptimality = 0.0;  // realized slack of the (approx) LMO
};

// One Frank-Wolfe subproblem at λ: runs the (δ-approximate) LMO on ∇h(λ)
// and forms B^w = h(λ) + ∇h(λ)^T(λ̃ − λ) + δ and G likewise.
SubproblemResult subproblem(const ObjectiveOracle& objective, const FeasibleRegion& region,
                            const Vector& lambda, double delta);

struct PrestartResult {
    Vector lambda1;
    BoundState bounds;
    IterationRecord record;  // k = 0
    bool already_optimal = false;
};

// Pre-start step: full step to λ̃_0 and initial bound
// B_0 = min{B_prior, B^w_0, B^o_0}, guaranteeing B_0 − h(λ_1) ≤ ½C + δ_0.
PrestartResult prestart(const ObjectiveOracle& objective, const FeasibleRegion& region,
                        const Vector& lambda0, std::optional<double> b_prior, double delta0,
                        std::function<double(const Vector&)> other_bound = nullptr);

// Basic run with any declarative step rule (exact oracles).
RunTrace run_basic(const Problem& problem, const StepRuleSpec& rule, const RunOptions& options,
                   std::optional<Vector> start = std::nullopt);

// Dynamic step-size run with test-then-double curvature estimation.
RunTrace run_dynamic(const Problem& problem, double c0, const RunOptions& options,
                     std::optional<Vector> start = std::nullopt);

// Run under an inexactness spec: δ-approximate LMOs and/or inexact
// gradients.  A δ-oracle gradient run is executed as a 2δ-approximate
// subproblem run; a (δ,L)-oracle run omits the FW gap.
RunTrace run_inexact(const Problem& problem, const StepRuleSpec& rule,
                     const InexactnessSpec& inexactness, const RunOptions& options,
                     std::optional<Vector> start = std::nullopt);

// B^m at λ from the problem's minmax structure.  Throws
// std::invalid_argument when the problem has none.
double minmax_bound(const Problem& problem, const Vector& lambda);

// Default starting vertex e_1 (or its analogue) for a region.
Vector default_start(const FeasibleRegion& region);

}  // namespace fw
