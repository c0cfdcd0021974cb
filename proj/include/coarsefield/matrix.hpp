#pragma once

/**
 * @file matrix.hpp
 * @brief Small dense row-major matrices over an arbitrary scalar.
 *
 * Used with `Rational` (distance tables), `ComplexRational` (exact field
 * values) and `std::complex<double>` (grid fields). Sizes are desk scale,
 * so the naive triple loop is the multiplication kernel.
 */

#include "coarsefield/error.hpp"
#include "coarsefield/rational.hpp"

#include <cstddef>
#include <initializer_list>
#include <vector>

namespace coarsefield {

template <class T>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, const T& fill = T{})
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
    Matrix(std::initializer_list<std::initializer_list<T>> rows) {
        rows_ = rows.size();
        cols_ = rows_ == 0 ? 0 : rows.begin()->size();
        data_.reserve(rows_ * cols_);
        for (const auto& r : rows) {
            if (r.size() != cols_) fail(ErrorKind::Structural, "ragged matrix literal");
            data_.insert(data_.end(), r.begin(), r.end());
        }
    }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return data_.empty(); }

    T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    const std::vector<T>& data() const { return data_; }

    Matrix adjoint() const {
        Matrix r(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) r(j, i) = conjugate((*this)(i, j));
        return r;
    }

    Matrix transpose() const {
        Matrix r(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
        return r;
    }

    bool is_zero() const {
        for (const auto& v : data_)
            if (!is_exact_zero(v)) return false;
        return true;
    }

    Matrix& operator+=(const Matrix& o) {
        require_same_shape(o);
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
        return *this;
    }
    Matrix& operator-=(const Matrix& o) {
        require_same_shape(o);
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
        return *this;
    }

    friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }

    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.cols_ != b.rows_)
            fail(ErrorKind::Structural, "matrix product shape mismatch");
        Matrix r(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const T& aik = a(i, k);
                if (is_exact_zero(aik)) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) r(i, j) += aik * b(k, j);
            }
        return r;
    }

    friend Matrix operator*(const T& s, Matrix m) {
        for (auto& v : m.data_) v = s * v;
        return m;
    }

    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

private:
    void require_same_shape(const Matrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            fail(ErrorKind::Structural, "matrix shape mismatch");
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

using RationalMatrix = Matrix<Rational>;
using ExactMatrix = Matrix<ComplexRational>;
using ComplexMatrix = Matrix<std::complex<double>>;

ComplexMatrix to_complex(const ExactMatrix& m);

/// Exact rank by Gaussian elimination over the complex rationals.
std::size_t exact_rank(const std::vector<ExactMatrix>& vectors);

/// True iff `target` lies in the linear span of `spanning` (all same shape).
bool in_span(const std::vector<ExactMatrix>& spanning, const ExactMatrix& target);

/// A maximal linearly independent subfamily, chosen greedily in input order.
std::vector<ExactMatrix> independent_subset(const std::vector<ExactMatrix>& vectors);

}  // namespace coarsefield
