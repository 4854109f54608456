#pragma once

// Small dense matrices over an exact field (Rat or QFElem) or over Int.
// Gaussian-elimination routines require field semantics for T.

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <vector>

#include "quatsplit/errors.hpp"

namespace quatsplit {

template <class T>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, const T& fill = T(0))
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
    Matrix(std::initializer_list<std::initializer_list<T>> init) {
        rows_ = init.size();
        cols_ = rows_ ? init.begin()->size() : 0;
        for (const auto& row : init) {
            if (row.size() != cols_) throw DimensionMismatch("ragged matrix literal");
            data_.insert(data_.end(), row.begin(), row.end());
        }
    }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::vector<T> column(std::size_t c) const {
        std::vector<T> out(rows_);
        for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
        return out;
    }
    void set_column(std::size_t c, const std::vector<T>& v) {
        if (v.size() != rows_) throw DimensionMismatch("column length");
        for (std::size_t r = 0; r < rows_; ++r) (*this)(r, c) = v[r];
    }

    Matrix transpose() const {
        Matrix t(cols_, rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
        return t;
    }

    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.cols_ != b.rows_) throw DimensionMismatch("matrix product shape");
        Matrix p(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                if (a(i, k) == 0) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) p(i, j) += a(i, k) * b(k, j);
            }
        return p;
    }
    friend std::vector<T> operator*(const Matrix& a, const std::vector<T>& v) {
        if (a.cols_ != v.size()) throw DimensionMismatch("matrix-vector shape");
        std::vector<T> out(a.rows_, T(0));
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) out[i] += a(i, k) * v[k];
        return out;
    }
    friend Matrix operator+(const Matrix& a, const Matrix& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw DimensionMismatch("matrix sum shape");
        Matrix s = a;
        for (std::size_t i = 0; i < s.data_.size(); ++i) s.data_[i] += b.data_[i];
        return s;
    }
    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<T> data_;
};

/// Reduced row echelon form in place; returns the pivot columns.
template <class T>
std::vector<std::size_t> rref(Matrix<T>& m) {
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
        std::size_t sel = row;
        while (sel < m.rows() && m(sel, col) == 0) ++sel;
        if (sel == m.rows()) continue;
        if (sel != row)
            for (std::size_t c = 0; c < m.cols(); ++c) std::swap(m(sel, c), m(row, c));
        const T inv = T(1) / m(row, col);
        for (std::size_t c = col; c < m.cols(); ++c) m(row, c) = m(row, c) * inv;
        for (std::size_t r = 0; r < m.rows(); ++r) {
            if (r == row || m(r, col) == 0) continue;
            const T f = m(r, col);
            for (std::size_t c = col; c < m.cols(); ++c) m(r, c) = m(r, c) - f * m(row, c);
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

template <class T>
std::size_t rank(Matrix<T> m) {
    return rref(m).size();
}

/// Basis of {x : m x = 0}, one vector per free column (free entry set to 1).
template <class T>
std::vector<std::vector<T>> nullspace(Matrix<T> m) {
    const auto pivots = rref(m);
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto p : pivots) is_pivot[p] = true;
    std::vector<std::vector<T>> basis;
    for (std::size_t free = 0; free < m.cols(); ++free) {
        if (is_pivot[free]) continue;
        std::vector<T> v(m.cols(), T(0));
        v[free] = T(1);
        for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = T(0) - m(i, free);
        basis.push_back(std::move(v));
    }
    return basis;
}

/// The unique x with m x = b, or nullopt when there is none; throws when
/// the solution is not unique.
template <class T>
std::optional<std::vector<T>> solve_linear(const Matrix<T>& m, const std::vector<T>& b) {
    if (b.size() != m.rows()) throw DimensionMismatch("solve_linear rhs length");
    Matrix<T> aug(m.rows(), m.cols() + 1);
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) aug(r, c) = m(r, c);
        aug(r, m.cols()) = b[r];
    }
    const auto pivots = rref(aug);
    if (!pivots.empty() && pivots.back() == m.cols()) return std::nullopt;
    if (pivots.size() != m.cols()) throw InvalidArgument("solve_linear: solution not unique");
    std::vector<T> x(m.cols());
    for (std::size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = aug(i, m.cols());
    return x;
}

template <class T>
T determinant(Matrix<T> m) {
    if (m.rows() != m.cols()) throw DimensionMismatch("determinant of non-square matrix");
    T det(1);
    const std::size_t n = m.rows();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t sel = col;
        while (sel < n && m(sel, col) == 0) ++sel;
        if (sel == n) return T(0);
        if (sel != col) {
            for (std::size_t c = 0; c < n; ++c) std::swap(m(sel, c), m(col, c));
            det = T(0) - det;
        }
        det = det * m(col, col);
        const T inv = T(1) / m(col, col);
        for (std::size_t r = col + 1; r < n; ++r) {
            if (m(r, col) == 0) continue;
            const T f = m(r, col) * inv;
            for (std::size_t c = col; c < n; ++c) m(r, c) = m(r, c) - f * m(col, c);
        }
    }
    return det;
}

template <class T>
std::optional<Matrix<T>> inverse(const Matrix<T>& m) {
    if (m.rows() != m.cols()) throw DimensionMismatch("inverse of non-square matrix");
    const std::size_t n = m.rows();
    Matrix<T> aug(n, 2 * n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) aug(r, c) = m(r, c);
        aug(r, n + r) = T(1);
    }
    const auto pivots = rref(aug);
    if (pivots.size() < n || pivots[n - 1] != n - 1) return std::nullopt;
    Matrix<T> inv(n, n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) inv(r, c) = aug(r, n + c);
    return inv;
}

}  // namespace quatsplit
