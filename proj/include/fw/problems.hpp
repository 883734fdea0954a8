#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "fw/objective.hpp"
#include "fw/region.hpp"

namespace fw {

// A solvable instance: objective + region plus whatever analytic knowledge
// the construction provides (exact curvature, optimum, minmax bound).
struct Problem {
    std::string id;
    std::shared_ptr<const ObjectiveOracle> objective;
    std::shared_ptr<const FeasibleRegion> region;
    std::optional<double> hstar;
    std::optional<double> exact_curvature;
    std::optional<Matrix> quadratic_q;  // dense Q when the objective is quadratic
    // B^m(λ) evaluator when the problem carries minmax structure.
    std::function<double(const Vector&)> minmax_bound;
    // JSON text of the generating spec (kind, parameters, seed).
    std::string spec_json;
};

struct SpectrumSpec {
    enum class Kind { Identity, Diagonal, RandomRotation };
    Kind kind = Kind::Identity;
    double scale = 1.0;          // Identity: Q = scale·I
    Vector eigenvalues;          // Diagonal / RandomRotation; empty => random in (0.5, scale]
};

// h(λ) = c^T λ − ½ λ^T Q λ on the unit simplex.  Exact curvature is the
// vertex-pair value max_{i≠j}(Q_ii − 2Q_ij + Q_jj); h* is attached when a
// closed form exists (c = 0 with diagonal Q).
Problem make_quadratic_simplex(int n, const SpectrumSpec& spectrum, std::uint64_t seed);

// Minmax instance φ(x,λ) = ½‖x‖² + λ^T(b − Ax) over x ∈ R^m, λ ∈ Δ_n, with
// induced h(λ) = b^T λ − ½‖A^T λ‖², optimal response x(λ) = A^T λ, and
// B^m(λ) = ½‖x(λ)‖² + max_i (b − A x(λ))_i.
Problem make_minmax(int m, int n, std::uint64_t seed);

// h(λ) = −½‖y − Xλ‖² over the τ-scaled L1 ball, with synthetic sparse
// ground truth.  With noise = 0 and the truth inside the ball, h* = 0.
Problem make_l1_regression(int rows, int cols, double tau, double noise, std::uint64_t seed);

// Rebuild a problem from its spec JSON (as produced in Problem::spec_json
// or supplied in a run config).  Throws std::invalid_argument on unknown
// kinds or missing fields.
Problem problem_from_json(const std::string& spec_json);

}  // namespace fw
