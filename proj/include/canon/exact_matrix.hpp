#ifndef CANON_EXACT_MATRIX_HPP
#define CANON_EXACT_MATRIX_HPP

#include <canon/errors.hpp>
#include <canon/rational.hpp>

#include <cassert>
#include <cstddef>
#include <utility>
#include <vector>

namespace canon {

/// Dense row-major matrix over an exact ring.
template <typename T>
class Matrix {
public:
    using Scalar = T;

    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, T(0)) {}

    static Matrix identity(std::size_t n)
    {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    T& operator()(std::size_t i, std::size_t j)
    {
        assert(i < rows_ && j < cols_);
        return data_[i * cols_ + j];
    }
    const T& operator()(std::size_t i, std::size_t j) const
    {
        assert(i < rows_ && j < cols_);
        return data_[i * cols_ + j];
    }

    void swap_rows(std::size_t a, std::size_t b)
    {
        if (a == b) return;
        for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
    }

    Matrix transpose() const
    {
        Matrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    bool is_symmetric() const
    {
        if (rows_ != cols_) return false;
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = i + 1; j < cols_; ++j)
                if ((*this)(i, j) != (*this)(j, i)) return false;
        return true;
    }

    friend bool operator==(const Matrix& a, const Matrix& b)
    {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

    friend Matrix operator+(const Matrix& a, const Matrix& b)
    {
        assert(a.rows_ == b.rows_ && a.cols_ == b.cols_);
        Matrix c(a.rows_, a.cols_);
        for (std::size_t k = 0; k < a.data_.size(); ++k) c.data_[k] = a.data_[k] + b.data_[k];
        return c;
    }

    friend Matrix operator*(const Matrix& a, const Matrix& b)
    {
        assert(a.cols_ == b.rows_);
        Matrix c(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                if (a(i, k) == 0) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += a(i, k) * b(k, j);
            }
        return c;
    }

    friend Matrix operator*(const T& s, const Matrix& a)
    {
        Matrix c = a;
        for (auto& x : c.data_) x *= s;
        return c;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

using IntegerMatrix = Matrix<Integer>;
using RationalMatrix = Matrix<Rational>;

/// Result of fraction-free Gauss-Jordan elimination on a square integer
/// matrix: `adjugate * a == determinant * I`.
struct BareissResult {
    Integer determinant;
    IntegerMatrix adjugate;
};

/// Fraction-free Gauss-Jordan elimination (Bareiss pivots, Montante
/// back-elimination). Every intermediate entry is a minor of [A | I], so
/// all divisions are exact. A singular input yields determinant 0 and an
/// empty adjugate.
inline BareissResult bareiss_adjugate(IntegerMatrix a)
{
    const std::size_t n = a.rows();
    assert(a.cols() == n);
    IntegerMatrix m(n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) m(i, j) = a(i, j);
        m(i, n + i) = 1;
    }

    Integer previous = 1;
    int sign = 1;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t pivot_row = k;
        while (pivot_row < n && m(pivot_row, k) == 0) ++pivot_row;
        if (pivot_row == n) return {Integer(0), IntegerMatrix()};
        if (pivot_row != k) {
            m.swap_rows(pivot_row, k);
            sign = -sign;
        }
        const Integer pivot = m(k, k);
        for (std::size_t i = 0; i < n; ++i) {
            if (i == k) continue;
            const Integer factor = m(i, k);
            for (std::size_t j = 0; j < 2 * n; ++j) {
                if (j == k) continue;
                Integer v = pivot * m(i, j) - factor * m(k, j);
                mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), previous.get_mpz_t());
                m(i, j) = std::move(v);
            }
            m(i, k) = 0;
        }
        previous = pivot;
    }

    // Left block is now d*I with d = sign * det(A); right block is d * A^{-1}.
    BareissResult result;
    result.determinant = sign * previous;
    result.adjugate = IntegerMatrix(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) result.adjugate(i, j) = sign * m(i, n + j);
    if (n == 0) result.determinant = 1;
    return result;
}

inline Integer determinant(const IntegerMatrix& a)
{
    return bareiss_adjugate(a).determinant;
}

namespace detail {

/// Clears denominators: returns integer matrix B and positive scale s with A = B / s.
inline std::pair<IntegerMatrix, Integer> clear_denominators(const RationalMatrix& a)
{
    Integer common = 1;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            mpz_lcm(common.get_mpz_t(), common.get_mpz_t(), a(i, j).get_den_mpz_t());
        }
    IntegerMatrix b(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            Integer scale = common / a(i, j).get_den();
            b(i, j) = a(i, j).get_num() * scale;
        }
    return {std::move(b), std::move(common)};
}

} // namespace detail

inline Rational determinant(const RationalMatrix& a)
{
    auto [b, s] = detail::clear_denominators(a);
    Rational det(determinant(b));
    Rational scale(s);
    det /= pow(scale, static_cast<long>(a.rows()));
    det.canonicalize();
    return det;
}

/// Exact inverse through fraction-free elimination on the integer matrix
/// obtained by clearing denominators. Throws SingularMatrixError.
inline RationalMatrix inverse(const RationalMatrix& a)
{
    const std::size_t n = a.rows();
    if (a.cols() != n) throw PreconditionError("inverse of a non-square matrix");
    auto [b, s] = detail::clear_denominators(a);
    BareissResult r = bareiss_adjugate(std::move(b));
    if (r.determinant == 0) throw SingularMatrixError("matrix is singular");
    // A = B/s  =>  A^{-1} = s * adj(B) / det(B)
    RationalMatrix inv(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            Rational v(r.adjugate(i, j) * s, r.determinant);
            v.canonicalize();
            inv(i, j) = std::move(v);
        }
    return inv;
}

/// Reduced row echelon form in place; returns the pivot columns.
inline std::vector<std::size_t> row_reduce(RationalMatrix& m)
{
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
        std::size_t p = row;
        while (p < m.rows() && m(p, col) == 0) ++p;
        if (p == m.rows()) continue;
        m.swap_rows(p, row);
        const Rational inv_pivot = 1 / m(row, col);
        for (std::size_t j = col; j < m.cols(); ++j) m(row, j) *= inv_pivot;
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == row || m(i, col) == 0) continue;
            const Rational factor = m(i, col);
            for (std::size_t j = col; j < m.cols(); ++j) m(i, j) -= factor * m(row, j);
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

inline std::size_t rank(RationalMatrix m)
{
    return row_reduce(m).size();
}

/// Basis of the right kernel, one column per free variable.
inline RationalMatrix nullspace(const RationalMatrix& a)
{
    RationalMatrix r = a;
    const auto pivots = row_reduce(r);
    std::vector<bool> is_pivot(a.cols(), false);
    for (auto p : pivots) is_pivot[p] = true;

    std::vector<std::size_t> free_cols;
    for (std::size_t j = 0; j < a.cols(); ++j)
        if (!is_pivot[j]) free_cols.push_back(j);

    RationalMatrix basis(a.cols(), free_cols.size());
    for (std::size_t k = 0; k < free_cols.size(); ++k) {
        const std::size_t f = free_cols[k];
        basis(f, k) = 1;
        for (std::size_t i = 0; i < pivots.size(); ++i) basis(pivots[i], k) = -r(i, f);
    }
    return basis;
}

/// Solves A X = B for square nonsingular A by Gaussian elimination over Q.
inline RationalMatrix solve(const RationalMatrix& a, const RationalMatrix& b)
{
    const std::size_t n = a.rows();
    if (a.cols() != n || b.rows() != n) throw PreconditionError("solve: dimension mismatch");
    RationalMatrix aug(n, n + b.cols());
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) aug(i, j) = a(i, j);
        for (std::size_t j = 0; j < b.cols(); ++j) aug(i, n + j) = b(i, j);
    }
    const auto pivots = row_reduce(aug);
    if (pivots.size() < n || (n > 0 && pivots.back() >= n)) {
        throw SingularMatrixError("solve: matrix is singular");
    }
    RationalMatrix x(n, b.cols());
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) x(i, j) = aug(i, n + j);
    return x;
}

/// Exact positive-definiteness test for a symmetric matrix via the pivots
/// of an LDL^T factorization without pivoting.
inline bool is_positive_definite(const RationalMatrix& a)
{
    if (!a.is_symmetric()) return false;
    RationalMatrix m = a;
    const std::size_t n = m.rows();
    for (std::size_t k = 0; k < n; ++k) {
        if (m(k, k) <= 0) return false;
        for (std::size_t i = k + 1; i < n; ++i) {
            if (m(i, k) == 0) continue;
            const Rational factor = m(i, k) / m(k, k);
            for (std::size_t j = k; j < n; ++j) m(i, j) -= factor * m(k, j);
        }
    }
    return true;
}

} // namespace canon

#endif // CANON_EXACT_MATRIX_HPP
