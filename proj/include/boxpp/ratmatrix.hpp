#pragma once

#include <cstddef>
#include <initializer_list>
#include <utility>
#include <vector>

#include "boxpp/rational.hpp"

namespace boxpp {

// Dense matrix over Q, row-major. Shape is fixed at construction; all
// derivation arithmetic in the library runs through this type.
class RatMatrix {
public:
    RatMatrix() = default;
    RatMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), a_(rows * cols, Rational(0)) {}

    // rows given as integer literals, e.g. RatMatrix::from_int({{1,0,1},{0,1,1}})
    static RatMatrix from_int(std::initializer_list<std::initializer_list<long long>> rows) {
        RatMatrix m(rows.size(), rows.size() ? rows.begin()->size() : 0);
        std::size_t i = 0;
        for (const auto& row : rows) {
            std::size_t j = 0;
            for (long long v : row) m.at(i, j++) = v;
            ++i;
        }
        return m;
    }

    static RatMatrix identity(std::size_t n) {
        RatMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Rational& at(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const Rational& at(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    VecQ col(std::size_t j) const {
        VecQ v(rows_);
        for (std::size_t i = 0; i < rows_; ++i) v[i] = at(i, j);
        return v;
    }

    VecQ row(std::size_t i) const {
        VecQ v(cols_);
        for (std::size_t j = 0; j < cols_; ++j) v[j] = at(i, j);
        return v;
    }

    RatMatrix select_columns(const std::vector<std::size_t>& idx) const {
        RatMatrix m(rows_, idx.size());
        for (std::size_t j = 0; j < idx.size(); ++j)
            for (std::size_t i = 0; i < rows_; ++i) m.at(i, j) = at(i, idx[j]);
        return m;
    }

    RatMatrix drop_column(std::size_t j) const {
        std::vector<std::size_t> keep;
        for (std::size_t c = 0; c < cols_; ++c)
            if (c != j) keep.push_back(c);
        return select_columns(keep);
    }

    VecQ mul(const VecQ& x) const {
        VecQ r(rows_, Rational(0));
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) r[i] += at(i, j) * x[j];
        return r;
    }

    RatMatrix mul(const RatMatrix& b) const {
        RatMatrix r(rows_, b.cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                if (at(i, k) == 0) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) r.at(i, j) += at(i, k) * b.at(k, j);
            }
        return r;
    }

    bool operator==(const RatMatrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
    }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<Rational> a_;
};

namespace detail {

// Clear denominators row by row so fraction-free elimination runs over Z.
// Returns the integer matrix and the product of the row scale factors.
inline std::pair<std::vector<std::vector<Int>>, Rational> integerize(const RatMatrix& m) {
    std::vector<std::vector<Int>> z(m.rows(), std::vector<Int>(m.cols()));
    Rational scale = 1;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Int l = 1;
        for (std::size_t j = 0; j < m.cols(); ++j) l = lcm(l, den(m.at(i, j)));
        for (std::size_t j = 0; j < m.cols(); ++j)
            z[i][j] = num(m.at(i, j)) * (l / den(m.at(i, j)));
        scale *= Rational(l);
    }
    return {std::move(z), scale};
}

// Bareiss elimination. Returns (rank, det-of-leading-block) where the second
// value is the exact determinant when the matrix is square and full rank.
inline std::pair<std::size_t, Int> bareiss(std::vector<std::vector<Int>> z) {
    if (z.empty() || z[0].empty()) return {0, Int(1)};
    const std::size_t r = z.size(), c = z[0].size();
    Int prev = 1;
    std::size_t row = 0;
    int sign = 1;
    for (std::size_t col = 0; col < c && row < r; ++col) {
        std::size_t p = row;
        while (p < r && z[p][col] == 0) ++p;
        if (p == r) continue;
        if (p != row) {
            std::swap(z[p], z[row]);
            sign = -sign;
        }
        for (std::size_t i = row + 1; i < r; ++i) {
            for (std::size_t j = col + 1; j < c; ++j)
                z[i][j] = (z[row][col] * z[i][j] - z[i][col] * z[row][j]) / prev;
            z[i][col] = 0;
        }
        prev = z[row][col];
        ++row;
    }
    return {row, sign < 0 ? Int(-prev) : prev};
}

}  // namespace detail

inline std::size_t rank(const RatMatrix& m) {
    auto [z, scale] = detail::integerize(m);
    return detail::bareiss(std::move(z)).first;
}

inline Rational det(const RatMatrix& m) {
    if (m.rows() != m.cols()) throw Error("det: matrix not square");
    if (m.rows() == 0) return 1;
    auto [z, scale] = detail::integerize(m);
    auto [rk, d] = detail::bareiss(std::move(z));
    if (rk < m.rows()) return 0;
    return Rational(d) / scale;
}

inline RatMatrix inverse(const RatMatrix& m) {
    if (m.rows() != m.cols()) throw Error("inverse: matrix not square");
    const std::size_t n = m.rows();
    RatMatrix a = m, inv = RatMatrix::identity(n);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t p = col;
        while (p < n && a.at(p, col) == 0) ++p;
        if (p == n) throw SingularMatrix("inverse: singular matrix");
        if (p != col)
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(a.at(p, j), a.at(col, j));
                std::swap(inv.at(p, j), inv.at(col, j));
            }
        Rational piv = a.at(col, col);
        for (std::size_t j = 0; j < n; ++j) {
            a.at(col, j) /= piv;
            inv.at(col, j) /= piv;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == col || a.at(i, col) == 0) continue;
            Rational f = a.at(i, col);
            for (std::size_t j = 0; j < n; ++j) {
                a.at(i, j) -= f * a.at(col, j);
                inv.at(i, j) -= f * inv.at(col, j);
            }
        }
    }
    return inv;
}

// Scale a vector to primitive integer form: cleared denominators, gcd of the
// entries 1, first nonzero entry positive. Zero vectors pass through.
inline VecQ primitivize(const VecQ& v) {
    Int l = 1;
    for (const auto& x : v) l = lcm(l, den(x));
    std::vector<Int> z(v.size());
    Int g = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        z[i] = num(v[i]) * (l / den(v[i]));
        g = gcd(g, abs(z[i]));
    }
    if (g == 0) return VecQ(v.size(), Rational(0));
    int sign = 1;
    for (const auto& x : z)
        if (x != 0) {
            sign = x < 0 ? -1 : 1;
            break;
        }
    VecQ r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) r[i] = Rational(sign * z[i] / g);
    return r;
}

// Null-space basis of m, returned as an n x (n - rank) matrix in column
// echelon form: the row index of each column's first nonzero entry strictly
// increases with the column, and every column is a primitive integer vector
// with positive leading entry. Works for any matrix, including rank-deficient
// ones; a square invertible input yields an n x 0 matrix.
inline RatMatrix kernel_column_echelon(const RatMatrix& m) {
    const std::size_t rows = m.rows(), n = m.cols();

    // reduced row echelon form
    RatMatrix a = m;
    std::vector<std::size_t> pivot_col;
    std::size_t prow = 0;
    for (std::size_t col = 0; col < n && prow < rows; ++col) {
        std::size_t p = prow;
        while (p < rows && a.at(p, col) == 0) ++p;
        if (p == rows) continue;
        if (p != prow)
            for (std::size_t j = 0; j < n; ++j) std::swap(a.at(p, j), a.at(prow, j));
        Rational piv = a.at(prow, col);
        for (std::size_t j = 0; j < n; ++j) a.at(prow, j) /= piv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == prow || a.at(i, col) == 0) continue;
            Rational f = a.at(i, col);
            for (std::size_t j = 0; j < n; ++j) a.at(i, j) -= f * a.at(prow, j);
        }
        pivot_col.push_back(col);
        ++prow;
    }

    std::vector<bool> is_pivot(n, false);
    for (auto c : pivot_col) is_pivot[c] = true;
    std::vector<std::size_t> free_cols;
    for (std::size_t c = 0; c < n; ++c)
        if (!is_pivot[c]) free_cols.push_back(c);

    RatMatrix k(n, free_cols.size());
    for (std::size_t j = 0; j < free_cols.size(); ++j) {
        k.at(free_cols[j], j) = 1;
        for (std::size_t i = 0; i < pivot_col.size(); ++i)
            k.at(pivot_col[i], j) = -a.at(i, free_cols[j]);
    }

    // forward column reduction so leading-row indices strictly increase
    std::size_t lead = 0;
    for (std::size_t row = 0; row < n && lead < k.cols(); ++row) {
        std::size_t p = lead;
        while (p < k.cols() && k.at(row, p) == 0) ++p;
        if (p == k.cols()) continue;
        if (p != lead)
            for (std::size_t i = 0; i < n; ++i) std::swap(k.at(i, p), k.at(i, lead));
        for (std::size_t j = lead + 1; j < k.cols(); ++j) {
            if (k.at(row, j) == 0) continue;
            Rational f = k.at(row, j) / k.at(row, lead);
            for (std::size_t i = 0; i < n; ++i) k.at(i, j) -= f * k.at(i, lead);
        }
        ++lead;
    }

    for (std::size_t j = 0; j < k.cols(); ++j) {
        VecQ c = primitivize(k.col(j));
        for (std::size_t i = 0; i < n; ++i) k.at(i, j) = c[i];
    }

    // Hermite-style reduction: at each later pivot row, bring the entries of
    // earlier columns into [0, pivot). Keeps the basis integral and canonical.
    std::vector<std::size_t> lead_row(k.cols());
    for (std::size_t j = 0; j < k.cols(); ++j) {
        std::size_t r = 0;
        while (r < n && k.at(r, j) == 0) ++r;
        lead_row[j] = r;
    }
    for (std::size_t j = k.cols(); j-- > 1;) {
        Rational piv = k.at(lead_row[j], j);
        for (std::size_t i = 0; i < j; ++i) {
            Rational f{floor_rational(k.at(lead_row[j], i) / piv)};
            if (f == 0) continue;
            for (std::size_t r = 0; r < n; ++r) k.at(r, i) -= f * k.at(r, j);
        }
    }
    for (std::size_t j = 0; j < k.cols(); ++j) {
        VecQ c = primitivize(k.col(j));
        for (std::size_t i = 0; i < n; ++i) k.at(i, j) = c[i];
    }
    return k;
}

}  // namespace boxpp
