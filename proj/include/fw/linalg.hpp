#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

namespace fw {

using Vector = std::vector<double>;

inline double dot(const Vector& a, const Vector& b) {
    if (a.size() != b.size()) throw std::invalid_argument("dot: size mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm2(const Vector& a) {
    return std::sqrt(dot(a, a));
}

inline double norm1(const Vector& a) {
    double s = 0.0;
    for (double x : a) s += std::fabs(x);
    return s;
}

inline double norm_inf(const Vector& a) {
    double s = 0.0;
    for (double x : a) s = std::max(s, std::fabs(x));
    return s;
}

// y += t * x
inline void axpy(double t, const Vector& x, Vector& y) {
    if (x.size() != y.size()) throw std::invalid_argument("axpy: size mismatch");
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += t * x[i];
}

inline Vector sub(const Vector& a, const Vector& b) {
    if (a.size() != b.size()) throw std::invalid_argument("sub: size mismatch");
    Vector r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

inline bool all_finite(const Vector& a) {
    for (double x : a)
        if (!std::isfinite(x)) return false;
    return true;
}

// Dense row-major matrix, adequate for the desk-scale instances used here.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    static Matrix diagonal(const Vector& d) {
        Matrix m(d.size(), d.size());
        for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
        return m;
    }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

    Vector apply(const Vector& x) const {
        if (x.size() != cols_) throw std::invalid_argument("Matrix::apply: size mismatch");
        Vector y(rows_, 0.0);
        for (std::size_t i = 0; i < rows_; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < cols_; ++j) s += (*this)(i, j) * x[j];
            y[i] = s;
        }
        return y;
    }

    Vector apply_transpose(const Vector& x) const {
        if (x.size() != rows_) throw std::invalid_argument("Matrix::apply_transpose: size mismatch");
        Vector y(cols_, 0.0);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) y[j] += (*this)(i, j) * x[i];
        return y;
    }

    // A^T A, used to build quadratic forms from design matrices.
    Matrix gram() const {
        Matrix g(cols_, cols_);
        for (std::size_t j = 0; j < cols_; ++j)
            for (std::size_t l = j; l < cols_; ++l) {
                double s = 0.0;
                for (std::size_t i = 0; i < rows_; ++i) s += (*this)(i, j) * (*this)(i, l);
                g(j, l) = s;
                g(l, j) = s;
            }
        return g;
    }

    double max_abs_asymmetry() const {
        if (rows_ != cols_) return std::numeric_limits<double>::infinity();
        double m = 0.0;
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = i + 1; j < cols_; ++j)
                m = std::max(m, std::fabs((*this)(i, j) - (*this)(j, i)));
        return m;
    }

    double frobenius_norm() const {
        double s = 0.0;
        for (double x : data_) s += x * x;
        return std::sqrt(s);
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

// Eigenvalues of a symmetric matrix via cyclic Jacobi sweeps.  Intended as an
// independent cross-check for small n; returns eigenvalues in ascending order.
std::vector<double> jacobi_eigenvalues(Matrix a, int max_sweeps = 64, double tol = 1e-13);

}  // namespace fw
