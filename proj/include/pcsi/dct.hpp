#pragma once

// Orthonormal 2D DCT (type II forward, type III inverse) realized as two
// dense basis-matrix products.  Image dimensions here top out around 4k
// per side, where GEMM is fast, exactly invertible in pairs, and free of
// FFT library quirks.  Orthonormality gives D D^T = I, so the transform
// preserves the sum of squares to rounding error.

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace pcsi {

using Matrix = Eigen::MatrixXd;

namespace detail {

inline Matrix dct_basis(int n) {
    Matrix d(n, n);
    const double norm0 = std::sqrt(1.0 / n);
    const double norm = std::sqrt(2.0 / n);
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            d(k, i) = (k == 0 ? norm0 : norm) *
                      std::cos(std::numbers::pi * (2.0 * i + 1.0) * k / (2.0 * n));
    return d;
}

} // namespace detail

class DctPlan {
public:
    DctPlan(int rows, int cols)
        : rows_(rows), cols_(cols) {
        if (rows < 1 || cols < 1) throw std::invalid_argument("empty transform");
        row_basis_ = detail::dct_basis(rows);
        col_basis_ = detail::dct_basis(cols);
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    Matrix forward(const Matrix& x) const {
        check(x);
        return row_basis_ * x * col_basis_.transpose();
    }

    Matrix inverse(const Matrix& coeffs) const {
        check(coeffs);
        return row_basis_.transpose() * coeffs * col_basis_;
    }

private:
    void check(const Matrix& m) const {
        if (m.rows() != rows_ || m.cols() != cols_)
            throw std::invalid_argument("matrix does not match transform size");
    }

    int rows_;
    int cols_;
    Matrix row_basis_;
    Matrix col_basis_;
};

inline Matrix dct2(const Matrix& x) { return DctPlan(static_cast<int>(x.rows()), static_cast<int>(x.cols())).forward(x); }
inline Matrix idct2(const Matrix& x) { return DctPlan(static_cast<int>(x.rows()), static_cast<int>(x.cols())).inverse(x); }

} // namespace pcsi
