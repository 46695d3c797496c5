#pragma once

#include <cstddef>
#include <filesystem>
#include <initializer_list>
#include <span>
#include <vector>

#include "proxnas/errors.hpp"

namespace proxnas {

using Vector = std::vector<double>;

// Dense row-major matrix of 64-bit reals.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);
    static Matrix identity(std::size_t n);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return data_.size(); }

    double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

    double* row_ptr(std::size_t i) noexcept { return data_.data() + i * cols_; }
    const double* row_ptr(std::size_t i) const noexcept { return data_.data() + i * cols_; }
    std::span<double> row(std::size_t i) noexcept { return {row_ptr(i), cols_}; }
    std::span<const double> row(std::size_t i) const noexcept { return {row_ptr(i), cols_}; }

    std::span<double> data() noexcept { return data_; }
    std::span<const double> data() const noexcept { return data_; }

    void fill(double v) { data_.assign(data_.size(), v); }
    // Reshape without preserving contents; reuses capacity where possible.
    void resize(std::size_t rows, std::size_t cols) {
        rows_ = rows;
        cols_ = cols;
        data_.resize(rows * cols);
    }

    bool all_finite() const noexcept;

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

// ---------------------------------------------------------------------------
// Kernels. The *_into forms write into a preallocated destination (resized as
// needed) so hot loops can avoid allocation. Accumulation over the shared
// dimension is always in ascending index order, so results do not depend on
// block width.
// ---------------------------------------------------------------------------

// C = A (m x n) * B (n x p)
void matmul_into(Matrix& c, const Matrix& a, const Matrix& b);
Matrix matmul(const Matrix& a, const Matrix& b);

// C = A^T (n x m) * B (m x p), with A stored untransposed (m x n)
void matmul_transa_into(Matrix& c, const Matrix& a, const Matrix& b);
Matrix matmul_transa(const Matrix& a, const Matrix& b);

// result_i = sum_j A[i,j] * v[j]
Vector matvec(const Matrix& a, std::span<const double> v);
// result_j = sum_i A[i,j] * u[i]
Vector matvec_transposed(const Matrix& a, std::span<const double> u);

// sum of squared entries
double frobenius_sq(const Matrix& a);

// Numerically stable softmax (max subtraction); entries in (0,1], sum 1.
void softmax_into(std::span<const double> v, std::span<double> out);
Vector softmax(std::span<const double> v);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> v);
double norm1(std::span<const double> v);
double norm_inf(std::span<const double> v);

Vector get_column(const Matrix& m, std::size_t j);
void set_column(Matrix& m, std::size_t j, std::span<const double> v);
// Columns of m selected by idx, in idx order.
Matrix gather_columns(const Matrix& m, std::span<const std::size_t> idx);
double max_abs_diff(const Matrix& a, const Matrix& b);

// ---------------------------------------------------------------------------
// Matrix text format: first line "rows cols", then one line per row with
// cols values separated by single spaces, 17 significant digits (full
// round-trip precision for binary64).
// ---------------------------------------------------------------------------
void save_matrix(const Matrix& m, const std::filesystem::path& path);
Matrix load_matrix(const std::filesystem::path& path);

}  // namespace proxnas
