#pragma once

#include "k3pic/lattice_expr.hpp"
#include "k3pic/matrix.hpp"

#include <string>
#include <vector>

namespace k3pic {

/// Even nondegenerate integer symmetric bilinear form with cached invariants.
/// Root lattices use the negative-definite (-2)-curve convention.
struct GramLattice {
    IMat gram;
    int rank = 0;
    std::pair<int, int> sig{0, 0}; ///< (n_plus, n_minus)
    Int det = 0;

    static GramLattice from(IMat m, const std::string& what = "lattice") {
        if (!m.is_symmetric()) throw ValidationError(what + ": matrix not symmetric");
        for (std::size_t i = 0; i < m.rows(); ++i)
            if (m(i, i) % 2 != 0)
                throw ValidationError(what + ": diagonal not even");
        GramLattice l;
        l.det = k3pic::det(m);
        if (l.det == 0) throw DegenerateLattice(what + ": degenerate (determinant 0)");
        l.sig = signature(m);
        l.rank = static_cast<int>(m.rows());
        l.gram = std::move(m);
        return l;
    }

    std::size_t dim() const { return gram.rows(); }
};

inline Int disc(const GramLattice& l) { return l.det; }

inline GramLattice direct_sum(const GramLattice& a, const GramLattice& b) {
    IMat m(a.dim() + b.dim(), a.dim() + b.dim());
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < a.dim(); ++j) m(i, j) = a.gram(i, j);
    for (std::size_t i = 0; i < b.dim(); ++i)
        for (std::size_t j = 0; j < b.dim(); ++j) m(a.dim() + i, a.dim() + j) = b.gram(i, j);
    return GramLattice::from(std::move(m));
}

namespace detail {

inline IMat chain_gram(std::size_t n) { // negative definite A_n
    IMat m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = -2;
        if (i + 1 < n) { m(i, i + 1) = 1; m(i + 1, i) = 1; }
    }
    return m;
}

inline IMat gram_of_expr(const LatticeExprPtr& e) {
    using K = LatticeExpr::Kind;
    switch (e->kind) {
        case K::A: return chain_gram(e->n);
        case K::D: {
            std::size_t n = e->n;
            IMat m = chain_gram(n - 1);
            IMat d(n, n);
            for (std::size_t i = 0; i + 1 < n; ++i)
                for (std::size_t j = 0; j + 1 < n; ++j) d(i, j) = m(i, j);
            d(n - 1, n - 1) = -2;
            d(n - 1, n - 3) = 1; // fork attached to the (n-2)-nd chain node
            d(n - 3, n - 1) = 1;
            return d;
        }
        case K::E: {
            std::size_t n = e->n;
            IMat m = chain_gram(n - 1); // nodes 0..n-2 form the long chain
            IMat d(n, n);
            for (std::size_t i = 0; i + 1 < n; ++i)
                for (std::size_t j = 0; j + 1 < n; ++j) d(i, j) = m(i, j);
            d(n - 1, n - 1) = -2;
            d(n - 1, 2) = 1; // branch node on the third chain node
            d(2, n - 1) = 1;
            return d;
        }
        case K::U: {
            IMat m(2, 2);
            m(0, 1) = e->n;
            m(1, 0) = e->n;
            return m;
        }
        case K::Gen: {
            IMat m(1, 1);
            m(0, 0) = e->n;
            return m;
        }
        case K::T: {
            // central vertex 0, legs of lengths p-1, q-1, r-1
            std::size_t n = e->rank();
            IMat m(n, n);
            for (std::size_t i = 0; i < n; ++i) m(i, i) = -2;
            std::size_t next = 1;
            for (long long leg : e->tpr) {
                std::size_t prev = 0;
                for (long long j = 0; j + 1 < leg; ++j) {
                    m(prev, next) = 1;
                    m(next, prev) = 1;
                    prev = next++;
                }
            }
            return m;
        }
        case K::M: {
            std::size_t n = e->rank();
            IMat m(n, n);
            m(0, 0) = e->m_k; // central vertex
            std::size_t base = 1;
            for (std::size_t leg = 0; leg < e->m_p.size(); ++leg) {
                long long p = e->m_p[leg];
                for (long long j = 0; j < p; ++j) {
                    std::size_t v = base + j;
                    m(v, v) = -2;
                    if (j + 1 < p) { m(v, v + 1) = 1; m(v + 1, v) = 1; }
                }
                std::size_t attach = base + e->m_i[leg] - 1;
                m(0, attach) = 1;
                m(attach, 0) = 1;
                base += p;
            }
            return m;
        }
        case K::Sum: {
            std::size_t n = e->rank();
            IMat m(n, n);
            std::size_t off = 0;
            for (const auto& c : e->children) {
                IMat cm = gram_of_expr(c);
                for (std::size_t i = 0; i < cm.rows(); ++i)
                    for (std::size_t j = 0; j < cm.cols(); ++j)
                        m(off + i, off + j) = cm(i, j);
                off += cm.rows();
            }
            return m;
        }
        case K::Pow: {
            IMat cm = gram_of_expr(e->children[0]);
            std::size_t k = cm.rows();
            IMat m(k * e->power, k * e->power);
            for (long long t = 0; t < e->power; ++t)
                for (std::size_t i = 0; i < k; ++i)
                    for (std::size_t j = 0; j < k; ++j)
                        m(t * k + i, t * k + j) = cm(i, j);
            return m;
        }
    }
    throw Error("unreachable lattice expression kind");
}

} // namespace detail

inline GramLattice to_gram(const LatticeExprPtr& e) {
    return GramLattice::from(detail::gram_of_expr(e), print_expr(e));
}

inline GramLattice to_gram(const std::string& expr) {
    return to_gram(parse_lattice_expr(expr));
}

/// Closed form for the T(p,q,r) discriminant; zero flags a degenerate lattice.
inline Int t_disc(long long p, long long q, long long r) {
    Int P(p), Q(q), R(r);
    return P * Q * R - P * Q - P * R - Q * R;
}

/// Closed form for the M-lattice discriminant. Always an integer for valid
/// parameters; a non-integer value signals invalid input.
inline Int m_disc(const std::vector<long long>& p, const std::vector<long long>& i,
                  long long k) {
    LatticeExpr::atom_m(p, i, k); // parameter validation
    Rat sum(k);
    Int prefactor(1);
    long long total = 0;
    for (std::size_t j = 0; j < p.size(); ++j) {
        sum += Rat(Int(i[j]) * (p[j] + 1 - i[j]), Int(p[j] + 1));
        prefactor *= Int(p[j] + 1);
        total += p[j];
    }
    Rat value = Rat(prefactor) * sum;
    if (total % 2 == 0) value = -value; // -(-1)^{sum p_j}
    if (!is_integer(value))
        throw NonIntegerDiscriminant("M discriminant formula yields " + to_string(value));
    return num(value);
}

} // namespace k3pic
