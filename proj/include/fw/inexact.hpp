#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>

#include "fw/objective.hpp"
#include "fw/region.hpp"
#include "fw/rng.hpp"

namespace fw {

enum class GradientModel { Exact, DeltaOracle, DLOracle };

// Per-run inexactness configuration: an LMO accuracy schedule δ_k plus the
// gradient model of the first-order oracle.
struct InexactnessSpec {
    // δ_k for the LMO, evaluated at iteration index k (k = 0 is the
    // pre-start step).  Defaults to exact.
    std::function<double(int)> lmo_delta = [](int) { return 0.0; };
    GradientModel gradient_model = GradientModel::Exact;
    double gradient_delta = 0.0;             // δ of the δ- or (δ,L)-oracle
    std::optional<double> gradient_lipschitz; // L of the (δ,L)-oracle
    std::uint64_t seed = 0;

    static InexactnessSpec exact() { return {}; }
    static InexactnessSpec constant_lmo_delta(double delta, std::uint64_t seed = 0);
    static InexactnessSpec delta_oracle(double delta, std::uint64_t seed = 0);
    static InexactnessSpec dl_oracle_spec(double delta, double lipschitz);
};

// δ-approximate LMO.  Among the region's vertices satisfying
// c^T v ≥ max c^T λ − δ, returns the worst admissible one (lowest value,
// ties by lowest index), so that downstream bounds are stressed at their
// binding edge.  Second component is the realized suboptimality, always in
// [0, δ].
std::pair<DecisionPoint, double> approx_lmo(const FeasibleRegion& region,
                                            const LinearFunctional& c, double delta);

// δ-oracle gradient: ∇h(λ) + e with ‖e‖_* · Diam_Q ≤ δ, which is sufficient
// for the defining inequality |(∇h − g)^T(λ − λ̄)| ≤ δ.  The perturbation is
// a seeded random direction scaled to exactly δ/Diam_Q in the dual norm.
LinearFunctional delta_gradient(const ObjectiveOracle& objective, const FeasibleRegion& region,
                                const Vector& lambda, double delta, Rng& rng);

// (δ,L)-oracle via the adversarial offset construction: value h(λ) + δ,
// gradient ∇h(λ).  Both defining inequalities hold (concavity above,
// L-smoothness minus δ below) whenever L ≥ L_{h,Q}.
std::pair<double, LinearFunctional> dl_oracle(const ObjectiveOracle& objective,
                                              const Vector& lambda, double delta, double lipschitz);

}  // namespace fw
