#pragma once

#include "k3pic/numeric.hpp"

#include <cassert>
#include <optional>
#include <utility>
#include <vector>

namespace k3pic {

template <typename T>
class Mat {
public:
    Mat() : rows_(0), cols_(0) {}
    Mat(std::size_t rows, std::size_t cols, T fill = T(0))
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Mat identity(std::size_t n) {
        Mat m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    bool operator==(const Mat& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }

    Mat operator*(const Mat& o) const {
        assert(cols_ == o.rows_);
        Mat r(rows_, o.cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                const T& a = (*this)(i, k);
                if (a == 0) continue;
                for (std::size_t j = 0; j < o.cols_; ++j) r(i, j) += a * o(k, j);
            }
        return r;
    }

    Mat transposed() const {
        Mat r(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
        return r;
    }

    void swap_rows(std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
    }
    void swap_cols(std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
    }
    /// row a += f * row b
    void add_row(std::size_t a, std::size_t b, const T& f) {
        for (std::size_t j = 0; j < cols_; ++j) (*this)(a, j) += f * (*this)(b, j);
    }
    /// col a += f * col b
    void add_col(std::size_t a, std::size_t b, const T& f) {
        for (std::size_t i = 0; i < rows_; ++i) (*this)(i, a) += f * (*this)(i, b);
    }
    void scale_row(std::size_t a, const T& f) {
        for (std::size_t j = 0; j < cols_; ++j) (*this)(a, j) *= f;
    }

    bool is_symmetric() const {
        if (rows_ != cols_) return false;
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = i + 1; j < cols_; ++j)
                if ((*this)(i, j) != (*this)(j, i)) return false;
        return true;
    }

private:
    std::size_t rows_, cols_;
    std::vector<T> data_;
};

using IMat = Mat<Int>;
using RMat = Mat<Rat>;

inline RMat to_rational(const IMat& m) {
    RMat r(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = Rat(m(i, j));
    return r;
}

/// Exact determinant by fraction-free (Bareiss) elimination.
inline Int det(const IMat& a) {
    assert(a.rows() == a.cols());
    std::size_t n = a.rows();
    if (n == 0) return 1;
    IMat m = a;
    Int prev(1);
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m(k, k) == 0) {
            std::size_t p = k + 1;
            while (p < n && m(p, k) == 0) ++p;
            if (p == n) return 0;
            m.swap_rows(k, p);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) {
                Int v = m(i, j) * m(k, k) - m(i, k) * m(k, j);
                m(i, j) = v / prev; // exact by Bareiss
            }
        prev = m(k, k);
    }
    return sign > 0 ? m(n - 1, n - 1) : -m(n - 1, n - 1);
}

/// Rank over the rationals (exact Gaussian elimination).
inline int rank(const IMat& a) {
    RMat m = to_rational(a);
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
        std::size_t p = r;
        while (p < m.rows() && m(p, c) == 0) ++p;
        if (p == m.rows()) continue;
        m.swap_rows(r, p);
        for (std::size_t i = r + 1; i < m.rows(); ++i) {
            if (m(i, c) == 0) continue;
            Rat f = m(i, c) / m(r, c);
            for (std::size_t j = c; j < m.cols(); ++j) m(i, j) -= f * m(r, j);
        }
        ++r;
    }
    return static_cast<int>(r);
}

/// Signature (n_plus, n_minus) of a symmetric matrix by exact congruence
/// diagonalization; zero eigenvalue directions are not counted.
/// Pivot ties break to the leftmost index.
inline std::pair<int, int> signature(const IMat& a) {
    assert(a.is_symmetric());
    RMat m = to_rational(a);
    std::size_t n = m.rows();
    int np = 0, nm = 0;
    for (std::size_t k = 0; k < n; ++k) {
        if (m(k, k) == 0) {
            std::size_t p = k;
            while (p < n && m(p, p) == 0) ++p;
            if (p < n) {
                m.swap_rows(k, p);
                m.swap_cols(k, p);
            } else {
                // all remaining diagonal zero; create a nonzero diagonal
                // entry from an off-diagonal one (symmetric row+col add)
                bool found = false;
                for (std::size_t i = k; i < n && !found; ++i)
                    for (std::size_t j = i + 1; j < n && !found; ++j)
                        if (m(i, j) != 0) {
                            m.add_row(i, j, Rat(1));
                            m.add_col(i, j, Rat(1));
                            m.swap_rows(k, i);
                            m.swap_cols(k, i);
                            found = true;
                        }
                if (!found) break; // rest is the radical
            }
        }
        Rat piv = m(k, k);
        if (piv > 0) ++np; else ++nm;
        for (std::size_t i = k + 1; i < n; ++i) {
            if (m(i, k) == 0) continue;
            Rat f = m(i, k) / piv;
            for (std::size_t j = k; j < n; ++j) m(i, j) -= f * m(k, j);
            for (std::size_t j = k; j < n; ++j) m(j, i) -= f * m(j, k);
        }
    }
    return {np, nm};
}

struct SmithResult {
    IMat s; ///< diagonal, s = u * a * v
    IMat u; ///< unimodular row transform
    IMat v; ///< unimodular column transform
    int rank = 0;
};

/// Smith normal form with transforms: s = u * a * v, diagonal entries
/// non-negative with d1 | d2 | ... .
inline SmithResult smith_normal_form(const IMat& a) {
    SmithResult res;
    res.s = a;
    res.u = IMat::identity(a.rows());
    res.v = IMat::identity(a.cols());
    IMat& s = res.s;
    std::size_t m = a.rows(), n = a.cols();
    std::size_t t = 0;
    for (; t < m && t < n; ++t) {
        // find smallest nonzero |entry| in the remaining block
        std::size_t pi = t, pj = t;
        bool found = false;
        for (std::size_t i = t; i < m; ++i)
            for (std::size_t j = t; j < n; ++j)
                if (s(i, j) != 0 && (!found || abs(s(i, j)) < abs(s(pi, pj)))) {
                    pi = i; pj = j; found = true;
                }
        if (!found) break;
        s.swap_rows(t, pi); res.u.swap_rows(t, pi);
        s.swap_cols(t, pj); res.v.swap_cols(t, pj);
        bool clean = false;
        while (!clean) {
            clean = true;
            for (std::size_t i = t + 1; i < m; ++i) {
                if (s(i, t) == 0) continue;
                Int q = floor_div(s(i, t), s(t, t));
                s.add_row(i, t, -q); res.u.add_row(i, t, -q);
                if (s(i, t) != 0) { // remainder smaller than pivot: swap up
                    s.swap_rows(t, i); res.u.swap_rows(t, i);
                    clean = false;
                }
            }
            for (std::size_t j = t + 1; j < n; ++j) {
                if (s(t, j) == 0) continue;
                Int q = floor_div(s(t, j), s(t, t));
                s.add_col(j, t, -q); res.v.add_col(j, t, -q);
                if (s(t, j) != 0) {
                    s.swap_cols(t, j); res.v.swap_cols(t, j);
                    clean = false;
                }
            }
            if (clean) {
                // enforce divisibility of the remaining block by the pivot
                for (std::size_t i = t + 1; i < m && clean; ++i)
                    for (std::size_t j = t + 1; j < n && clean; ++j)
                        if (s(i, j) % s(t, t) != 0) {
                            s.add_row(t, i, Int(1)); res.u.add_row(t, i, Int(1));
                            clean = false;
                        }
            }
        }
        if (s(t, t) < 0) {
            s.scale_row(t, Int(-1));
            res.u.scale_row(t, Int(-1));
        }
    }
    res.rank = static_cast<int>(t);
    return res;
}

/// Row-style Hermite normal form: returns a matrix whose nonzero rows are a
/// basis (in echelon form) of the integer row lattice of a.
inline IMat hermite_normal_form(const IMat& a) {
    IMat h = a;
    std::size_t m = h.rows(), n = h.cols();
    std::size_t r = 0;
    for (std::size_t c = 0; c < n && r < m; ++c) {
        // reduce column c below row r with euclidean steps
        while (true) {
            std::size_t p = m;
            for (std::size_t i = r; i < m; ++i)
                if (h(i, c) != 0 && (p == m || abs(h(i, c)) < abs(h(p, c)))) p = i;
            if (p == m) break;
            h.swap_rows(r, p);
            bool any = false;
            for (std::size_t i = r + 1; i < m; ++i) {
                if (h(i, c) == 0) continue;
                Int q = floor_div(h(i, c), h(r, c));
                h.add_row(i, r, -q);
                if (h(i, c) != 0) any = true;
            }
            if (!any) break;
        }
        if (h(r, c) == 0) continue;
        if (h(r, c) < 0) h.scale_row(r, Int(-1));
        for (std::size_t i = 0; i < r; ++i) {
            Int q = floor_div(h(i, c), h(r, c));
            if (q != 0) h.add_row(i, r, -q);
        }
        ++r;
    }
    return h;
}

/// Basis of the saturated integer kernel {x : a x = 0}, as matrix columns.
inline IMat integer_kernel(const IMat& a) {
    SmithResult snf = smith_normal_form(a);
    std::size_t n = a.cols();
    std::size_t k = n - static_cast<std::size_t>(snf.rank);
    IMat basis(n, k);
    for (std::size_t j = 0; j < k; ++j)
        for (std::size_t i = 0; i < n; ++i)
            basis(i, j) = snf.v(i, static_cast<std::size_t>(snf.rank) + j);
    return basis;
}

/// Solve a x = b exactly over the rationals; nullopt if inconsistent.
/// If the system is underdetermined, returns one particular solution.
inline std::optional<std::vector<Rat>> solve(const RMat& a, const std::vector<Rat>& b) {
    std::size_t m = a.rows(), n = a.cols();
    RMat w(m, n + 1);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) w(i, j) = a(i, j);
        w(i, n) = b[i];
    }
    std::vector<std::size_t> pivot_col;
    std::size_t r = 0;
    for (std::size_t c = 0; c < n && r < m; ++c) {
        std::size_t p = r;
        while (p < m && w(p, c) == 0) ++p;
        if (p == m) continue;
        w.swap_rows(r, p);
        Rat piv = w(r, c);
        for (std::size_t j = c; j <= n; ++j) w(r, j) /= piv;
        for (std::size_t i = 0; i < m; ++i) {
            if (i == r || w(i, c) == 0) continue;
            Rat f = w(i, c);
            for (std::size_t j = c; j <= n; ++j) w(i, j) -= f * w(r, j);
        }
        pivot_col.push_back(c);
        ++r;
    }
    for (std::size_t i = r; i < m; ++i)
        if (w(i, n) != 0) return std::nullopt;
    std::vector<Rat> x(n, Rat(0));
    for (std::size_t i = 0; i < pivot_col.size(); ++i) x[pivot_col[i]] = w(i, n);
    return x;
}

/// Exact inverse of a square rational matrix; nullopt if singular.
inline std::optional<RMat> inverse(const RMat& a) {
    assert(a.rows() == a.cols());
    std::size_t n = a.rows();
    RMat w(n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) w(i, j) = a(i, j);
        w(i, n + i) = Rat(1);
    }
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && w(p, c) == 0) ++p;
        if (p == n) return std::nullopt;
        w.swap_rows(c, p);
        Rat piv = w(c, c);
        for (std::size_t j = 0; j < 2 * n; ++j) w(c, j) /= piv;
        for (std::size_t i = 0; i < n; ++i) {
            if (i == c || w(i, c) == 0) continue;
            Rat f = w(i, c);
            for (std::size_t j = 0; j < 2 * n; ++j) w(i, j) -= f * w(c, j);
        }
    }
    RMat inv(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) inv(i, j) = w(i, n + j);
    return inv;
}

/// Rational kernel basis (columns) of a rational matrix.
inline RMat rational_kernel(const RMat& a) {
    std::size_t m = a.rows(), n = a.cols();
    RMat w = a;
    std::vector<std::size_t> pivot_of_col(n, SIZE_MAX);
    std::size_t r = 0;
    for (std::size_t c = 0; c < n && r < m; ++c) {
        std::size_t p = r;
        while (p < m && w(p, c) == 0) ++p;
        if (p == m) continue;
        w.swap_rows(r, p);
        Rat piv = w(r, c);
        for (std::size_t j = c; j < n; ++j) w(r, j) /= piv;
        for (std::size_t i = 0; i < m; ++i) {
            if (i == r || w(i, c) == 0) continue;
            Rat f = w(i, c);
            for (std::size_t j = c; j < n; ++j) w(i, j) -= f * w(r, j);
        }
        pivot_of_col[c] = r;
        ++r;
    }
    std::vector<std::size_t> free_cols;
    for (std::size_t c = 0; c < n; ++c)
        if (pivot_of_col[c] == SIZE_MAX) free_cols.push_back(c);
    RMat basis(n, free_cols.size());
    for (std::size_t k = 0; k < free_cols.size(); ++k) {
        std::size_t fc = free_cols[k];
        basis(fc, k) = Rat(1);
        for (std::size_t c = 0; c < n; ++c) {
            std::size_t pr = pivot_of_col[c];
            if (pr != SIZE_MAX) basis(c, k) = -w(pr, fc);
        }
    }
    return basis;
}

/// Divide an integer vector by the gcd of its entries (primitive vector,
/// keeping orientation). Zero vectors are returned unchanged.
inline std::vector<Int> make_primitive(std::vector<Int> v) {
    Int g(0);
    for (const Int& x : v) g = gcd(g, x);
    if (g > 1)
        for (Int& x : v) x /= g;
    return v;
}

} // namespace k3pic
