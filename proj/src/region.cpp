#include "fw/region.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace fw {

namespace {

Matrix unflatten_symmetric(const Vector& x, std::size_t n) {
    if (x.size() != n * n) throw std::invalid_argument("expected flattened n×n matrix");
    Matrix m(n, n);
    m.data() = x;
    return m;
}

}  // namespace

DecisionPoint lmo_simplex(const LinearFunctional& c) {
    const std::size_t n = c.coeffs.size();
    if (n == 0) throw std::invalid_argument("lmo_simplex: zero-dimensional functional");
    std::size_t best = 0;
    for (std::size_t i = 1; i < n; ++i)
        if (c.coeffs[i] > c.coeffs[best]) best = i;
    Vector v(n, 0.0);
    v[best] = 1.0;
    return {std::move(v)};
}

DecisionPoint lmo_l1ball(const LinearFunctional& c, double tau) {
    const std::size_t n = c.coeffs.size();
    if (n == 0) throw std::invalid_argument("lmo_l1ball: zero-dimensional functional");
    if (tau <= 0.0) throw std::invalid_argument("lmo_l1ball: tau must be positive");
    std::size_t best = 0;
    for (std::size_t i = 1; i < n; ++i)
        if (std::fabs(c.coeffs[i]) > std::fabs(c.coeffs[best])) best = i;
    Vector v(n, 0.0);
    v[best] = c.coeffs[best] < 0.0 ? -tau : tau;  // sign(0) := +1
    return {std::move(v)};
}

DecisionPoint lmo_spectrahedron(const Matrix& c, double tol) {
    if (c.rows() != c.cols()) throw std::invalid_argument("lmo_spectrahedron: matrix not square");
    if (c.max_abs_asymmetry() > 1e-12)
        throw std::invalid_argument("lmo_spectrahedron: matrix not symmetric");
    const std::size_t n = c.rows();
    const double cnorm = c.frobenius_norm();

    // Deterministic start with a mild index tilt so we never begin exactly
    // orthogonal to the leading eigenspace of a structured matrix.
    Vector v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = 1.0 + 1e-3 * static_cast<double>(i + 1);
    double vn = norm2(v);
    for (auto& x : v) x /= vn;

    if (cnorm == 0.0) {
        Vector flat(n * n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) flat[i * n + j] = v[i] * v[j];
        return {std::move(flat)};
    }

    // Shift so the iteration matrix is PSD with the same leading eigenvector.
    double shift = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < n; ++j) row += std::fabs(c(i, j));
        shift = std::max(shift, row);
    }

    const int max_iters = 100000;
    double best_residual = std::numeric_limits<double>::infinity();
    for (int it = 0; it < max_iters; ++it) {
        Vector w = c.apply(v);
        double rayleigh = dot(v, w);
        Vector resid = w;
        axpy(-rayleigh, v, resid);
        double r = norm2(resid);
        best_residual = std::min(best_residual, r);
        if (r <= tol * cnorm) {
            Vector flat(n * n, 0.0);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) flat[i * n + j] = v[i] * v[j];
            return {std::move(flat)};
        }
        axpy(shift, v, w);  // (C + shift·I) v
        double wn = norm2(w);
        if (wn == 0.0) throw std::runtime_error("lmo_spectrahedron: power iteration degenerated");
        for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / wn;
    }
    std::ostringstream msg;
    msg << "lmo_spectrahedron: no convergence in " << max_iters
        << " iterations, best residual " << best_residual;
    throw std::runtime_error(msg.str());
}

SimplexRegion::SimplexRegion(std::size_t n) : n_(n) {
    if (n == 0) throw std::invalid_argument("SimplexRegion: dimension must be positive");
}

DecisionPoint SimplexRegion::lmo(const LinearFunctional& c) const {
    if (c.coeffs.size() != n_) throw std::invalid_argument("SimplexRegion::lmo: size mismatch");
    return lmo_simplex(c);
}

bool SimplexRegion::contains(const Vector& x, double tol) const {
    if (x.size() != n_) return false;
    double sum = 0.0;
    for (double xi : x) {
        if (!std::isfinite(xi) || xi < -tol) return false;
        sum += xi;
    }
    return std::fabs(sum - 1.0) <= tol;
}

std::optional<std::vector<DecisionPoint>> SimplexRegion::vertices() const {
    std::vector<DecisionPoint> vs;
    vs.reserve(n_);
    for (std::size_t i = 0; i < n_; ++i) {
        Vector v(n_, 0.0);
        v[i] = 1.0;
        vs.push_back({std::move(v)});
    }
    return vs;
}

L1BallRegion::L1BallRegion(std::size_t n, double tau) : n_(n), tau_(tau) {
    if (n == 0) throw std::invalid_argument("L1BallRegion: dimension must be positive");
    if (tau <= 0.0) throw std::invalid_argument("L1BallRegion: tau must be positive");
}

DecisionPoint L1BallRegion::lmo(const LinearFunctional& c) const {
    if (c.coeffs.size() != n_) throw std::invalid_argument("L1BallRegion::lmo: size mismatch");
    return lmo_l1ball(c, tau_);
}

bool L1BallRegion::contains(const Vector& x, double tol) const {
    if (x.size() != n_ || !all_finite(x)) return false;
    return norm1(x) <= tau_ + tol;
}

std::optional<std::vector<DecisionPoint>> L1BallRegion::vertices() const {
    std::vector<DecisionPoint> vs;
    vs.reserve(2 * n_);
    for (std::size_t i = 0; i < n_; ++i) {
        for (double sign : {+1.0, -1.0}) {
            Vector v(n_, 0.0);
            v[i] = sign * tau_;
            vs.push_back({std::move(v)});
        }
    }
    return vs;
}

SpectrahedronRegion::SpectrahedronRegion(std::size_t order, double lmo_tol)
    : order_(order), lmo_tol_(lmo_tol) {
    if (order == 0) throw std::invalid_argument("SpectrahedronRegion: order must be positive");
}

DecisionPoint SpectrahedronRegion::lmo(const LinearFunctional& c) const {
    return lmo_spectrahedron(unflatten_symmetric(c.coeffs, order_), lmo_tol_);
}

bool SpectrahedronRegion::contains(const Vector& x, double tol) const {
    if (x.size() != order_ * order_ || !all_finite(x)) return false;
    Matrix m = unflatten_symmetric(x, order_);
    if (m.max_abs_asymmetry() > tol) return false;
    double trace = 0.0;
    for (std::size_t i = 0; i < order_; ++i) trace += m(i, i);
    if (std::fabs(trace - 1.0) > tol) return false;
    auto ev = jacobi_eigenvalues(m);
    return ev.front() >= -tol;
}

}  // namespace fw
