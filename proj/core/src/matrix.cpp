#include "proxnas/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "proxnas/textio.hpp"

namespace proxnas {

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    Matrix m(rows.size(), rows.size() ? rows.begin()->size() : 0);
    std::size_t i = 0;
    for (const auto& r : rows) {
        if (r.size() != m.cols_) throw ContractViolation("from_rows: ragged rows");
        std::copy(r.begin(), r.end(), m.row_ptr(i));
        ++i;
    }
    return m;
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

bool Matrix::all_finite() const noexcept {
    for (double v : data_)
        if (!std::isfinite(v)) return false;
    return true;
}

void matmul_into(Matrix& c, const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows())
        throw ContractViolation("matmul: inner dimensions differ (" +
                                std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + ")");
    const std::size_t m = a.rows(), n = a.cols(), p = b.cols();
    c.resize(m, p);
    c.fill(0.0);
    for (std::size_t i = 0; i < m; ++i) {
        const double* arow = a.row_ptr(i);
        double* crow = c.row_ptr(i);
        for (std::size_t k = 0; k < n; ++k) {
            const double aik = arow[k];
            const double* brow = b.row_ptr(k);
            for (std::size_t j = 0; j < p; ++j) crow[j] += aik * brow[j];
        }
    }
}

void matmul_transa_into(Matrix& c, const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows())
        throw ContractViolation("matmul_transa: row counts differ (" +
                                std::to_string(a.rows()) + " vs " + std::to_string(b.rows()) + ")");
    const std::size_t m = a.rows(), n = a.cols(), p = b.cols();
    c.resize(n, p);
    c.fill(0.0);
    for (std::size_t i = 0; i < m; ++i) {
        const double* arow = a.row_ptr(i);
        const double* brow = b.row_ptr(i);
        for (std::size_t j = 0; j < n; ++j) {
            const double aij = arow[j];
            double* crow = c.row_ptr(j);
            for (std::size_t k = 0; k < p; ++k) crow[k] += aij * brow[k];
        }
    }
}

Matrix matmul(const Matrix& a, const Matrix& b) {
    Matrix c;
    matmul_into(c, a, b);
    return c;
}

Matrix matmul_transa(const Matrix& a, const Matrix& b) {
    Matrix c;
    matmul_transa_into(c, a, b);
    return c;
}

Vector matvec(const Matrix& a, std::span<const double> v) {
    if (v.size() != a.cols())
        throw ContractViolation("matvec: vector length " + std::to_string(v.size()) +
                                " does not match cols " + std::to_string(a.cols()));
    Vector out(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const double* arow = a.row_ptr(i);
        double acc = 0.0;
        for (std::size_t j = 0; j < a.cols(); ++j) acc += arow[j] * v[j];
        out[i] = acc;
    }
    return out;
}

Vector matvec_transposed(const Matrix& a, std::span<const double> u) {
    if (u.size() != a.rows())
        throw ContractViolation("matvec_transposed: vector length " + std::to_string(u.size()) +
                                " does not match rows " + std::to_string(a.rows()));
    Vector out(a.cols(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const double ui = u[i];
        const double* arow = a.row_ptr(i);
        for (std::size_t j = 0; j < a.cols(); ++j) out[j] += arow[j] * ui;
    }
    return out;
}

double frobenius_sq(const Matrix& a) {
    double acc = 0.0;
    for (double v : a.data()) acc += v * v;
    return acc;
}

void softmax_into(std::span<const double> v, std::span<double> out) {
    if (v.empty()) throw ContractViolation("softmax: empty input");
    if (out.size() != v.size()) throw ContractViolation("softmax: output size mismatch");
    double mx = v[0];
    for (double x : v) mx = std::max(mx, x);
    double sum = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        out[i] = std::exp(v[i] - mx);
        sum += out[i];
    }
    for (auto& x : out) x /= sum;
}

Vector softmax(std::span<const double> v) {
    Vector out(v.size());
    softmax_into(v, out);
    return out;
}

double dot(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw ContractViolation("dot: length mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

double norm2(std::span<const double> v) { return std::sqrt(dot(v, v)); }

double norm1(std::span<const double> v) {
    double acc = 0.0;
    for (double x : v) acc += std::abs(x);
    return acc;
}

double norm_inf(std::span<const double> v) {
    double acc = 0.0;
    for (double x : v) acc = std::max(acc, std::abs(x));
    return acc;
}

Vector get_column(const Matrix& m, std::size_t j) {
    Vector out(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) out[i] = m(i, j);
    return out;
}

void set_column(Matrix& m, std::size_t j, std::span<const double> v) {
    if (v.size() != m.rows()) throw ContractViolation("set_column: length mismatch");
    for (std::size_t i = 0; i < m.rows(); ++i) m(i, j) = v[i];
}

Matrix gather_columns(const Matrix& m, std::span<const std::size_t> idx) {
    Matrix out(m.rows(), idx.size());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        const double* src = m.row_ptr(i);
        double* dst = out.row_ptr(i);
        for (std::size_t k = 0; k < idx.size(); ++k) dst[k] = src[idx[k]];
    }
    return out;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw ContractViolation("max_abs_diff: shape mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < a.data().size(); ++i)
        acc = std::max(acc, std::abs(a.data()[i] - b.data()[i]));
    return acc;
}

void save_matrix(const Matrix& m, const std::filesystem::path& path) {
    std::ostringstream os;
    os << m.rows() << " " << m.cols() << "\n";
    for (std::size_t i = 0; i < m.rows(); ++i) {
        const double* row = m.row_ptr(i);
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j) os << ' ';
            os << fmt_double17(row[j]);
        }
        os << '\n';
    }
    write_text_file(path, os.str());
}

Matrix load_matrix(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string() + " for reading");
    std::size_t rows = 0, cols = 0;
    if (!(in >> rows >> cols)) throw IoError(path.string() + ": bad header line");
    Matrix m(rows, cols);
    for (std::size_t i = 0; i < rows * cols; ++i) {
        if (!(in >> m.data()[i]))
            throw IoError(path.string() + ": expected " + std::to_string(rows * cols) +
                          " values, got " + std::to_string(i));
    }
    double extra;
    if (in >> extra) throw IoError(path.string() + ": trailing values after matrix body");
    if (!m.all_finite()) throw IoError(path.string() + ": non-finite entry");
    return m;
}

}  // namespace proxnas
