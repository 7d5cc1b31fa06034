#pragma once

#include <complex>
#include <vector>

namespace ncorlicz {

using cd = std::complex<double>;

// Dense row-major complex matrix. Sized for the d <= 128 algebras this
// library works in; no attempt at BLAS-level performance.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, cd(0.0, 0.0)) {}

    static Matrix identity(std::size_t n);
    static Matrix diag(const std::vector<double>& entries);
    static Matrix diag_complex(const std::vector<cd>& entries);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    cd& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const cd& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    const std::vector<cd>& data() const { return data_; }
    std::vector<cd>& data() { return data_; }

    Matrix& operator+=(const Matrix& o);
    Matrix& operator-=(const Matrix& o);
    Matrix& operator*=(cd s);

    Matrix adjoint() const;
    Matrix transpose() const;
    Matrix conj() const;

    cd trace() const;
    double frobenius_norm() const;
    double max_abs() const;

    bool same_shape(const Matrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<cd> data_;
};

Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator*(cd s, Matrix a);
Matrix operator*(Matrix a, cd s);
Matrix operator*(double s, Matrix a);
Matrix operator*(Matrix a, double s);

struct EigResult {
    std::vector<double> eigenvalues;  // ascending
    Matrix vectors;                   // unitary, columns are eigenvectors
};

// Cyclic Jacobi for Hermitian matrices. The input is hermitized as
// (A + A*)/2 before iterating; converges when the off-diagonal Frobenius
// mass drops below 1e-14 of the total.
EigResult eig_hermitian(const Matrix& a);

}  // namespace ncorlicz
