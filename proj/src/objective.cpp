#include "fw/objective.hpp"

namespace fw {

QuadraticObjective::QuadraticObjective(Matrix q, Vector c, double c0)
    : q_(std::move(q)), c_(std::move(c)), c0_(c0) {
    if (q_.rows() != q_.cols()) throw std::invalid_argument("QuadraticObjective: Q not square");
    if (q_.rows() != c_.size()) throw std::invalid_argument("QuadraticObjective: Q/c size mismatch");
    if (q_.max_abs_asymmetry() > 1e-12)
        throw std::invalid_argument("QuadraticObjective: Q not symmetric");
}

double QuadraticObjective::value(const Vector& lambda) const {
    Vector qx = q_.apply(lambda);
    return c0_ + dot(c_, lambda) - 0.5 * dot(lambda, qx);
}

LinearFunctional QuadraticObjective::gradient(const Vector& lambda) const {
    Vector g = q_.apply(lambda);
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = c_[i] - g[i];
    return {std::move(g)};
}

std::optional<Vector> QuadraticObjective::hessian_apply(const Vector& d) const {
    Vector qd = q_.apply(d);
    for (auto& x : qd) x = -x;
    return qd;
}

std::optional<double> QuadraticObjective::lipschitz() const {
    if (!lipschitz_cache_) {
        auto ev = jacobi_eigenvalues(q_);
        lipschitz_cache_ = std::max(std::fabs(ev.front()), std::fabs(ev.back()));
    }
    return lipschitz_cache_;
}

}  // namespace fw
