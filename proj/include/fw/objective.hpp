#pragma once

#include <memory>
#include <optional>

#include "fw/linalg.hpp"
#include "fw/region.hpp"

namespace fw {

// Concave differentiable objective with optional structural knowledge
// (Lipschitz constant of the gradient, exact curvature constant).
class ObjectiveOracle {
public:
    virtual ~ObjectiveOracle() = default;

    virtual double value(const Vector& lambda) const = 0;
    virtual LinearFunctional gradient(const Vector& lambda) const = 0;

    virtual std::optional<double> lipschitz() const { return std::nullopt; }
    virtual std::optional<double> curvature() const { return std::nullopt; }

    // Hessian-vector product, when the objective has one in closed form.
    // Enables the analytic line search and exact curvature computation.
    virtual std::optional<Vector> hessian_apply(const Vector& /*d*/) const { return std::nullopt; }
};

// h(λ) = c0 + c^T λ − ½ λ^T Q λ with Q positive semidefinite.
class QuadraticObjective final : public ObjectiveOracle {
public:
    QuadraticObjective(Matrix q, Vector c, double c0 = 0.0);

    double value(const Vector& lambda) const override;
    LinearFunctional gradient(const Vector& lambda) const override;
    std::optional<Vector> hessian_apply(const Vector& d) const override;
    std::optional<double> lipschitz() const override;

    const Matrix& q() const { return q_; }
    const Vector& c() const { return c_; }

private:
    Matrix q_;
    Vector c_;
    double c0_ = 0.0;
    mutable std::optional<double> lipschitz_cache_;
};

}  // namespace fw
