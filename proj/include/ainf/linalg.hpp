#pragma once

#include <optional>
#include <vector>

#include "field.hpp"

namespace ainf {

/// Dense exact matrix over a Field.  Row reduction picks, at each step, the
/// first remaining row whose leftmost nonzero entry is furthest left; ties go
/// to the lower row index.  This makes every derived basis deterministic.
class ExactMatrix {
public:
    ExactMatrix(Field f, std::size_t rows, std::size_t cols)
        : field_(f), rows_(rows), cols_(cols), a_(rows, std::vector<Scalar>(cols, Scalar::zero(f))) {}

    static ExactMatrix identity(Field f, std::size_t n) {
        ExactMatrix m(f, n, n);
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = Scalar::one(f);
        return m;
    }

    Field field() const { return field_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Scalar& at(std::size_t i, std::size_t j) { return a_[i][j]; }
    const Scalar& at(std::size_t i, std::size_t j) const { return a_[i][j]; }

    friend ExactMatrix operator*(const ExactMatrix& x, const ExactMatrix& y) {
        ExactMatrix r(x.field_, x.rows_, y.cols_);
        for (std::size_t i = 0; i < x.rows_; ++i)
            for (std::size_t k = 0; k < x.cols_; ++k) {
                if (x.a_[i][k].is_zero()) continue;
                for (std::size_t j = 0; j < y.cols_; ++j)
                    if (!y.a_[k][j].is_zero()) r.a_[i][j] += x.a_[i][k] * y.a_[k][j];
            }
        return r;
    }

    /// Reduced row echelon form, returned together with the pivot columns.
    std::pair<ExactMatrix, std::vector<std::size_t>> rref() const {
        ExactMatrix m = *this;
        std::vector<std::size_t> pivots;
        std::size_t row = 0;
        for (std::size_t col = 0; col < cols_ && row < rows_; ++col) {
            std::size_t sel = rows_;
            for (std::size_t i = row; i < rows_; ++i)
                if (!m.a_[i][col].is_zero()) { sel = i; break; }
            if (sel == rows_) continue;
            std::swap(m.a_[row], m.a_[sel]);
            Scalar inv = m.a_[row][col].inverse();
            for (std::size_t j = col; j < cols_; ++j) m.a_[row][j] *= inv;
            for (std::size_t i = 0; i < rows_; ++i) {
                if (i == row || m.a_[i][col].is_zero()) continue;
                Scalar c = m.a_[i][col];
                for (std::size_t j = col; j < cols_; ++j) m.a_[i][j] -= c * m.a_[row][j];
            }
            pivots.push_back(col);
            ++row;
        }
        return {m, pivots};
    }

    std::size_t rank() const { return rref().second.size(); }

    /// Basis of the right kernel: one vector per free column, with 1 in the
    /// free column, in increasing column order.
    std::vector<std::vector<Scalar>> kernel_basis() const {
        auto [m, pivots] = rref();
        std::vector<bool> is_pivot(cols_, false);
        for (auto c : pivots) is_pivot[c] = true;
        std::vector<std::vector<Scalar>> out;
        for (std::size_t free = 0; free < cols_; ++free) {
            if (is_pivot[free]) continue;
            std::vector<Scalar> v(cols_, Scalar::zero(field_));
            v[free] = Scalar::one(field_);
            for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m.a_[r][free];
            out.push_back(std::move(v));
        }
        return out;
    }

    /// One solution of A x = b, or nullopt.  Free variables are set to zero.
    std::optional<std::vector<Scalar>> solve(const std::vector<Scalar>& b) const {
        ExactMatrix aug(field_, rows_, cols_ + 1);
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = 0; j < cols_; ++j) aug.a_[i][j] = a_[i][j];
            aug.a_[i][cols_] = b[i];
        }
        auto [m, pivots] = aug.rref();
        for (auto c : pivots)
            if (c == cols_) return std::nullopt;
        std::vector<Scalar> x(cols_, Scalar::zero(field_));
        for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = m.a_[r][cols_];
        return x;
    }

    std::optional<ExactMatrix> inverse() const {
        if (rows_ != cols_) return std::nullopt;
        ExactMatrix aug(field_, rows_, 2 * cols_);
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = 0; j < cols_; ++j) aug.a_[i][j] = a_[i][j];
            aug.a_[i][cols_ + i] = Scalar::one(field_);
        }
        auto [m, pivots] = aug.rref();
        if (pivots.size() != rows_ || pivots.back() != rows_ - 1) return std::nullopt;
        ExactMatrix inv(field_, rows_, cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) inv.a_[i][j] = m.a_[i][cols_ + j];
        return inv;
    }

    std::vector<Scalar> apply(const std::vector<Scalar>& x) const {
        std::vector<Scalar> y(rows_, Scalar::zero(field_));
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                if (!a_[i][j].is_zero() && !x[j].is_zero()) y[i] += a_[i][j] * x[j];
        return y;
    }

    bool is_zero() const {
        for (auto& r : a_)
            for (auto& s : r)
                if (!s.is_zero()) return false;
        return true;
    }

private:
    Field field_;
    std::size_t rows_, cols_;
    std::vector<std::vector<Scalar>> a_;
};

}  // namespace ainf
