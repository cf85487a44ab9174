#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "corona/common.hpp"

namespace corona {

using BigInt = boost::multiprecision::cpp_int;

/// Row-major dense matrix.
template <typename T>
class DenseMatrix {
  public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols, T fill = T{})
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static DenseMatrix square(std::size_t n, T fill = T{}) { return DenseMatrix(n, n, fill); }

    [[nodiscard]] std::size_t rows() const { return rows_; }
    [[nodiscard]] std::size_t cols() const { return cols_; }

    T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<T> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    std::span<const T> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

    void swap_rows(std::size_t a, std::size_t b) {
        if (a == b) return;
        std::swap_ranges(data_.begin() + static_cast<std::ptrdiff_t>(a * cols_),
                         data_.begin() + static_cast<std::ptrdiff_t>((a + 1) * cols_),
                         data_.begin() + static_cast<std::ptrdiff_t>(b * cols_));
    }

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

using Matrix = DenseMatrix<double>;

inline double off_diagonal_norm(const Matrix& a) {
    double s = 0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (i != j) s += a(i, j) * a(i, j);
    return std::sqrt(s);
}

/// All eigenvalues of a real symmetric matrix by cyclic Jacobi rotations,
/// ascending. Sweeps continue until the off-diagonal Frobenius norm drops
/// below `tolerance`; exceeding `max_sweeps` throws numeric_error.
inline std::vector<double> dense_eigenvalues(Matrix a, double tolerance = 1e-12, int max_sweeps = 100) {
    const std::size_t n = a.rows();
    if (a.cols() != n) throw precondition_error("dense_eigenvalues: matrix must be square");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::abs(a(i, j) - a(j, i)) > 1e-12 * (1 + std::abs(a(i, j))))
                throw precondition_error("dense_eigenvalues: matrix must be symmetric");

    int sweep = 0;
    while (off_diagonal_norm(a) >= tolerance) {
        if (++sweep > max_sweeps) throw numeric_error("Jacobi eigensolver did not converge");
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2 * apq);
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1));
                const double c = 1 / std::sqrt(t * t + 1);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, p);
                    const double akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a(p, k);
                    const double aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
            }
        }
    }
    std::vector<double> eig(n);
    for (std::size_t i = 0; i < n; ++i) eig[i] = a(i, i);
    std::sort(eig.begin(), eig.end());
    return eig;
}

/// LU factorization with partial pivoting, reusable across right-hand sides.
class LuDecomposition {
  public:
    explicit LuDecomposition(Matrix a) : lu_(std::move(a)), perm_(lu_.rows()) {
        const std::size_t n = lu_.rows();
        if (lu_.cols() != n) throw precondition_error("LU: matrix must be square");
        for (std::size_t i = 0; i < n; ++i) perm_[i] = i;
        for (std::size_t k = 0; k < n; ++k) {
            std::size_t piv = k;
            for (std::size_t i = k + 1; i < n; ++i)
                if (std::abs(lu_(i, k)) > std::abs(lu_(piv, k))) piv = i;
            if (lu_(piv, k) == 0.0) throw numeric_error("LU: singular matrix");
            lu_.swap_rows(k, piv);
            std::swap(perm_[k], perm_[piv]);
            const double inv = 1.0 / lu_(k, k);
            for (std::size_t i = k + 1; i < n; ++i) {
                const double f = lu_(i, k) *= inv;
                if (f == 0.0) continue;
                auto ri = lu_.row(i);
                const auto rk = lu_.row(k);
                for (std::size_t j = k + 1; j < n; ++j) ri[j] -= f * rk[j];
            }
        }
    }

    [[nodiscard]] std::vector<double> solve(std::span<const double> b) const {
        const std::size_t n = lu_.rows();
        std::vector<double> x(n);
        for (std::size_t i = 0; i < n; ++i) {
            double s = b[perm_[i]];
            for (std::size_t j = 0; j < i; ++j) s -= lu_(i, j) * x[j];
            x[i] = s;
        }
        for (std::size_t i = n; i-- > 0;) {
            double s = x[i];
            for (std::size_t j = i + 1; j < n; ++j) s -= lu_(i, j) * x[j];
            x[i] = s / lu_(i, i);
        }
        return x;
    }

  private:
    Matrix lu_;
    std::vector<std::size_t> perm_;
};

/// Exact determinant by fraction-free (Bareiss) elimination. Every division
/// in the recurrence is exact, so intermediate values stay integers.
inline BigInt bareiss_determinant(DenseMatrix<BigInt> m) {
    const std::size_t n = m.rows();
    if (m.cols() != n) throw precondition_error("determinant: matrix must be square");
    if (n == 0) return 1;
    BigInt prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m(k, k) == 0) {
            std::size_t swap_with = k + 1;
            while (swap_with < n && m(swap_with, k) == 0) ++swap_with;
            if (swap_with == n) return 0;
            m.swap_rows(k, swap_with);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
            m(i, k) = 0;
        }
        prev = m(k, k);
    }
    return sign * m(n - 1, n - 1);
}

}  // namespace corona
