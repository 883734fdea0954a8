#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fw/linalg.hpp"

namespace fw {

// Feasible iterate.  Coordinates live in the ambient space of the owning
// region (for the spectrahedron, a row-major flattened symmetric matrix).
struct DecisionPoint {
    Vector coords;
};

// Coefficients of a linear functional on the ambient space.
struct LinearFunctional {
    Vector coeffs;
};

enum class NormKind { L1, L2 };

// Compact convex feasible region with its linear maximization oracle.
// Immutable after construction and shareable across concurrent runs.
class FeasibleRegion {
public:
    virtual ~FeasibleRegion() = default;

    virtual std::size_t dimension() const = 0;

    // argmax over the region of the linear functional c.
    virtual DecisionPoint lmo(const LinearFunctional& c) const = 0;

    virtual bool contains(const Vector& x, double tol = 1e-9) const = 0;

    // Diameter under norm_kind().
    virtual double diameter() const = 0;

    virtual NormKind norm_kind() const = 0;

    // Extreme points, when finitely enumerable.  Empty optional otherwise.
    virtual std::optional<std::vector<DecisionPoint>> vertices() const { return std::nullopt; }

    virtual std::string name() const = 0;
};

// Standalone oracle entry points (the region classes route through these).
DecisionPoint lmo_simplex(const LinearFunctional& c);
DecisionPoint lmo_l1ball(const LinearFunctional& c, double tau);
DecisionPoint lmo_spectrahedron(const Matrix& c, double tol);

// Unit simplex {λ ≥ 0, Σλ = 1}; vertices are the coordinate basis vectors.
class SimplexRegion final : public FeasibleRegion {
public:
    explicit SimplexRegion(std::size_t n);
    std::size_t dimension() const override { return n_; }
    DecisionPoint lmo(const LinearFunctional& c) const override;
    bool contains(const Vector& x, double tol = 1e-9) const override;
    double diameter() const override { return n_ > 1 ? 2.0 : 0.0; }
    NormKind norm_kind() const override { return NormKind::L1; }
    std::optional<std::vector<DecisionPoint>> vertices() const override;
    std::string name() const override { return "simplex"; }

private:
    std::size_t n_;
};

// Scaled L1 ball {‖λ‖₁ ≤ τ}; vertices are ±τ·e_i.
class L1BallRegion final : public FeasibleRegion {
public:
    L1BallRegion(std::size_t n, double tau);
    std::size_t dimension() const override { return n_; }
    DecisionPoint lmo(const LinearFunctional& c) const override;
    bool contains(const Vector& x, double tol = 1e-9) const override;
    double diameter() const override { return 2.0 * tau_; }
    NormKind norm_kind() const override { return NormKind::L1; }
    std::optional<std::vector<DecisionPoint>> vertices() const override;
    std::string name() const override { return "l1ball"; }
    double tau() const { return tau_; }

private:
    std::size_t n_;
    double tau_;
};

// Spectrahedron {Λ ⪰ 0, tr Λ = 1} of symmetric order-n matrices, flattened
// row-major into n² ambient coordinates.  The LMO is a power-iteration
// leading-eigenvector computation; its residual tolerance is configured at
// construction.  Note the residual-based accuracy is a trust parameter, not
// a certified bound on the eigenvalue gap.
class SpectrahedronRegion final : public FeasibleRegion {
public:
    explicit SpectrahedronRegion(std::size_t order, double lmo_tol = 1e-12);
    std::size_t dimension() const override { return order_ * order_; }
    std::size_t order() const { return order_; }
    DecisionPoint lmo(const LinearFunctional& c) const override;
    bool contains(const Vector& x, double tol = 1e-9) const override;
    double diameter() const override { return order_ > 1 ? std::sqrt(2.0) : 0.0; }
    NormKind norm_kind() const override { return NormKind::L2; }
    std::string name() const override { return "spectrahedron"; }

private:
    std::size_t order_;
    double lmo_tol_;
};

}  // namespace fw
