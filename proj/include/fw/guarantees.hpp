#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "fw/problems.hpp"
#include "fw/trace.hpp"

namespace fw {

// Curvature knowledge fed to the bound evaluators.  chosen() prefers the
// exact value, then the Lipschitz upper bound; a sampled lower bound alone
// is not valid for upper-bound evaluation.
struct CurvatureInfo {
    std::optional<double> exact;
    std::optional<double> lipschitz_upper;  // L_{h,Q} · Diam_Q²
    std::optional<double> sampled_lower;

    double chosen() const;
};

// Right-hand side of the master optimality-gap bound
//   (B_k − h(λ_1))/β_{k+1} + ½C Σ_{i≤k} (α_i²/β_{i+1}) / β_{k+1}
// for an explicit step sequence ᾱ_1..ᾱ_k.  k = 0 returns B_k − h(λ_1).
double thm21_rhs(const std::vector<double>& steps, double bk, double h_lambda1, double c, int k);
double thm21_rhs(const RunTrace& trace, double c, int k);

// Right-hand side of the master FW-gap bound for the window (ℓ, k].
double thm22_rhs(const std::vector<double>& steps, double bell, double h_lambda1, double c,
                 int ell, int k);
double thm22_rhs(const RunTrace& trace, double c, int ell, int k);

// Extra data for the closed-form bounds that need more than (C, k).
struct BoundExtras {
    std::optional<double> constant_alpha;            // bound33
    std::optional<double> warm_c1;                   // bound41
    std::optional<double> warm_gap1;                 // bound41: B_1 − h(λ_1)
    std::vector<double> dynamic_ck;                  // bound42: C_ℓ, ℓ = 1..k
    std::vector<double> dynamic_gap;                 // bound42: B_ℓ − h(λ_ℓ)
};

// Named closed-form bound values at iteration k for a given rule.  Keys:
// bound31_gap, bound31_fwgap, bound32_gap, bound32_fwgap, bound33_gap,
// bound34_gap, bound34_fwgap, bound41_gap, bound42_gap — whichever apply.
std::map<std::string, double> closed_form_bounds(StepRuleKind rule, double c, int k,
                                                 const BoundExtras& extras);

enum class Thm5Variant { Thm51, Thm52, Thm53 };

// Inexact-oracle master bounds.  Thm51/Thm53 are optimality-gap bounds at k
// (ell ignored); Thm52 is the FW-gap bound over (ℓ, k].  Thm53 uses
// ½Diam² Σ L_i α_i²/β_{i+1} in place of the curvature term and the
// accumulating error term Σ β_{i+1} δ_i / β_{k+1}.
double thm5x_rhs(const RunTrace& trace, double c, Thm5Variant variant, int ell, int k,
                 double diam = 0.0, double lipschitz = 0.0);

// Just the δ error term of the chosen variant (convex-combination term for
// Thm51/52, accumulating term for Thm53).
double thm5x_error_term(const RunTrace& trace, Thm5Variant variant, int k);

// Exact curvature of a quadratic over a polytope with enumerable vertices:
// max over vertex pairs (v, w) of (w − v)^T Q (w − v).
double curvature_exact_quadratic(const Matrix& q, const FeasibleRegion& region);

// Monte-Carlo lower bound on the curvature constant: max over sampled
// (λ, λ̄, α) of 2[h(λ) + α∇h(λ)^T(λ̄−λ) − h(λ+α(λ̄−λ))]/α².
double curvature_sampled_lower_bound(const ObjectiveOracle& objective,
                                     const FeasibleRegion& region, int samples,
                                     std::uint64_t seed);

CurvatureInfo curvature_info_for(const Problem& problem, int samples = 200,
                                 std::uint64_t seed = 12345);

struct GuaranteeRow {
    int k = 0;
    std::string bound;
    double empirical = 0.0;
    double rhs = 0.0;
    double margin = 0.0;  // rhs − empirical
    bool pass = true;
};

struct GuaranteeReport {
    std::vector<GuaranteeRow> rows;
    double min_margin = std::numeric_limits<double>::infinity();
    std::optional<GuaranteeRow> first_violation;
    bool all_pass = true;
    double curvature_used = 0.0;

    std::string to_json() const;
};

// Pass tolerance: margin ≥ −1e-9 · max(1, |rhs|).
bool guarantee_pass(double empirical, double rhs);

// Evaluates every bound applicable to the trace's rule and oracle
// configuration (or only those in `selector`, when nonempty) at every
// iteration, plus sampled FW-gap windows.  Read-only over the trace.
GuaranteeReport audit(const RunTrace& trace, const CurvatureInfo& curvature,
                      const std::set<std::string>& selector = {});

// Which bound names apply to a trace; used for selector validation.
std::set<std::string> applicable_bounds(const RunTrace& trace);

}  // namespace fw
