#pragma once

#include "k3pic/gram.hpp"
#include "k3pic/matrix.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace k3pic {

using Coords = std::vector<long long>;

/// Finite quadratic form on the discriminant group G = sum Z_{n_i}:
/// q: G -> Q/2Z and the associated bilinear b: G x G -> Q/Z. Generators are
/// kept in prime-power normal form (orders ascending by prime, then power).
struct FiniteQuadraticForm {
    std::vector<long long> factors;  ///< generator orders, each a prime power > 1
    std::vector<Rat> q;              ///< q on generators, canonical in [0,2)
    RMat b;                          ///< b on generator pairs, canonical in [0,1)
    std::optional<std::string> label;
    /// Rational lifts of the generators into the source lattice (columns),
    /// present only when derived from a GramLattice.
    std::optional<RMat> lifts;

    std::size_t gens() const { return factors.size(); }

    Int order() const {
        Int n(1);
        for (long long f : factors) n *= f;
        return n;
    }

    Coords reduce(Coords x) const {
        for (std::size_t i = 0; i < x.size(); ++i) {
            long long m = factors[i];
            x[i] = ((x[i] % m) + m) % m;
        }
        return x;
    }

    Rat q_of(const Coords& x0) const {
        Coords x = reduce(x0);
        Rat v(0);
        for (std::size_t i = 0; i < gens(); ++i) {
            if (x[i] == 0) continue;
            v += Rat(Int(x[i]) * x[i]) * q[i];
            for (std::size_t j = i + 1; j < gens(); ++j)
                if (x[j] != 0) v += Rat(2 * Int(x[i]) * x[j]) * b(i, j);
        }
        return rat_mod(v, 2);
    }

    Rat b_of(const Coords& x0, const Coords& y0) const {
        Coords x = reduce(x0), y = reduce(y0);
        Rat v(0);
        for (std::size_t i = 0; i < gens(); ++i)
            for (std::size_t j = 0; j < gens(); ++j)
                if (x[i] != 0 && y[j] != 0) v += Rat(Int(x[i]) * y[j]) * b(i, j);
        return rat_mod(v, 1);
    }

    long long element_order(const Coords& x0) const {
        Coords x = reduce(x0);
        long long o = 1;
        for (std::size_t i = 0; i < gens(); ++i)
            o = std::lcm(o, factors[i] / std::gcd(factors[i], x[i]));
        return o;
    }

    Coords add(const Coords& x, const Coords& y) const {
        Coords z(gens());
        for (std::size_t i = 0; i < gens(); ++i) z[i] = x[i] + y[i];
        return reduce(z);
    }

    /// Invariant factor view d_1 | d_2 | ... of the group.
    std::vector<Int> invariant_factors() const {
        std::map<long long, std::vector<long long>> by_prime;
        for (long long f : factors) {
            long long p = 2;
            while (f % p != 0) ++p;
            by_prime[p].push_back(f);
        }
        std::size_t slots = 0;
        for (auto& [p, v] : by_prime) {
            std::sort(v.rbegin(), v.rend());
            slots = std::max(slots, v.size());
        }
        std::vector<Int> inv(slots, Int(1));
        for (auto& [p, v] : by_prime)
            for (std::size_t i = 0; i < v.size(); ++i) inv[i] *= v[i];
        std::sort(inv.begin(), inv.end());
        return inv;
    }
};

namespace detail {

inline long long smallest_prime_factor(long long n) {
    for (long long p = 2; p * p <= n; ++p)
        if (n % p == 0) return p;
    return n;
}

/// Rebuild a form on arbitrary cyclic generators into prime-power normal form.
inline FiniteQuadraticForm normalize_form(const std::vector<long long>& orders,
                                          const std::vector<Rat>& qv, const RMat& bm,
                                          const std::optional<RMat>& lifts) {
    struct Gen {
        long long p, order;
        std::size_t src;
        long long mult;
    };
    std::vector<Gen> gens;
    for (std::size_t i = 0; i < orders.size(); ++i) {
        long long n = orders[i];
        while (n > 1) {
            long long p = smallest_prime_factor(n);
            long long pk = 1;
            while (n % p == 0) { pk *= p; n /= p; }
            gens.push_back({p, pk, i, orders[i] / pk});
        }
    }
    std::stable_sort(gens.begin(), gens.end(), [](const Gen& a, const Gen& b) {
        return std::pair(a.p, a.order) < std::pair(b.p, b.order);
    });
    FiniteQuadraticForm f;
    f.factors.reserve(gens.size());
    for (const auto& g : gens) f.factors.push_back(g.order);
    f.b = RMat(gens.size(), gens.size());
    for (std::size_t i = 0; i < gens.size(); ++i) {
        Rat qi = rat_mod(Rat(Int(gens[i].mult) * gens[i].mult) * qv[gens[i].src], 2);
        f.q.push_back(qi);
        for (std::size_t j = 0; j < gens.size(); ++j) {
            Rat bij = rat_mod(
                Rat(Int(gens[i].mult) * gens[j].mult) * bm(gens[i].src, gens[j].src), 1);
            if (i != j && gens[i].p != gens[j].p && bij != 0)
                throw Error("cross-prime pairing must vanish");
            f.b(i, j) = bij;
        }
    }
    if (lifts) {
        RMat lm(lifts->rows(), gens.size());
        for (std::size_t j = 0; j < gens.size(); ++j)
            for (std::size_t r = 0; r < lifts->rows(); ++r)
                lm(r, j) = Rat(gens[j].mult) * (*lifts)(r, gens[j].src);
        f.lifts = lm;
    }
    return f;
}

} // namespace detail

/// Discriminant form of an even nondegenerate lattice via Smith normal form:
/// generators are images of dual basis vectors, q(x) = <x,x> mod 2 evaluated
/// exactly on rational lifts.
inline FiniteQuadraticForm discriminant_form(const GramLattice& l) {
    SmithResult snf = smith_normal_form(l.gram);
    std::size_t n = l.dim();
    std::vector<long long> orders;
    std::vector<std::size_t> idx;
    for (std::size_t t = 0; t < n; ++t)
        if (snf.s(t, t) > 1) {
            orders.push_back(to_ll(snf.s(t, t)));
            idx.push_back(t);
        }
    std::size_t m = orders.size();
    // generator i lifts to v_i / s_i where v_i is a column of V
    RMat lifts(n, m);
    for (std::size_t j = 0; j < m; ++j)
        for (std::size_t r = 0; r < n; ++r)
            lifts(r, j) = Rat(snf.v(r, idx[j]), Int(orders[j]));
    std::vector<Rat> qv(m);
    RMat bm(m, m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            Int vgv(0);
            for (std::size_t r = 0; r < n; ++r)
                for (std::size_t c = 0; c < n; ++c)
                    vgv += snf.v(r, idx[i]) * l.gram(r, c) * snf.v(c, idx[j]);
            Rat val(vgv, Int(orders[i]) * orders[j]);
            if (i == j) qv[i] = rat_mod(val, 2);
            bm(i, j) = rat_mod(val, 1);
        }
    return detail::normalize_form(orders, qv, bm, lifts);
}

/// Nikulin's irreducible form atoms.
inline FiniteQuadraticForm atom_w(long long p, long long k, long long eps) {
    if (p < 2 || k < 1) throw InvalidFormParams("w(p,k,eps) requires p prime, k >= 1");
    for (long long d = 2; d * d <= p; ++d)
        if (p % d == 0) throw InvalidFormParams("w: p must be prime");
    long long pk = 1;
    for (long long i = 0; i < k; ++i) {
        if (pk > (1LL << 40)) throw InvalidFormParams("w: p^k too large");
        pk *= p;
    }
    Rat qval;
    if (p == 2) {
        bool ok = (k == 1) ? (eps == 1 || eps == -1)
                           : (eps == 1 || eps == -1 || eps == 5 || eps == -5);
        if (!ok) throw InvalidFormParams("w(2,k,eps): eps must be +-1 (k=1) or +-1,+-5");
        qval = rat_mod(Rat(eps, pk), 2);
    } else {
        if (eps != 1 && eps != -1)
            throw InvalidFormParams("w(p,k,eps): eps must be +-1 for odd p");
        std::set<long long> residues;
        for (long long t = 1; t < pk; ++t)
            if (std::gcd(t, p) == 1) residues.insert((t * t) % pk);
        long long a = 0;
        for (long long cand = 2; cand < 2 * pk; cand += 2) {
            if (std::gcd(cand % p == 0 ? p : cand, p) == p && cand % p == 0) continue;
            bool is_res = residues.count(cand % pk) > 0;
            if ((eps == 1) == is_res) { a = cand; break; }
        }
        if (a == 0) throw InvalidFormParams("w: no admissible generator value");
        qval = rat_mod(Rat(a, pk), 2);
    }
    FiniteQuadraticForm f;
    f.factors = {pk};
    f.q = {qval};
    f.b = RMat(1, 1);
    f.b(0, 0) = rat_mod(qval, 1);
    return f;
}

inline FiniteQuadraticForm atom_u(long long k) {
    if (k < 1) throw InvalidFormParams("u(k) requires k >= 1");
    long long pk = 1LL << k;
    FiniteQuadraticForm f;
    f.factors = {pk, pk};
    f.q = {Rat(0), Rat(0)};
    f.b = RMat(2, 2);
    f.b(0, 1) = Rat(1, pk);
    f.b(1, 0) = Rat(1, pk);
    return f;
}

inline FiniteQuadraticForm atom_v(long long k) {
    if (k < 1) throw InvalidFormParams("v(k) requires k >= 1");
    long long pk = 1LL << k;
    FiniteQuadraticForm f;
    f.factors = {pk, pk};
    f.q = {rat_mod(Rat(2, pk), 2), rat_mod(Rat(2, pk), 2)};
    f.b = RMat(2, 2);
    f.b(0, 0) = rat_mod(Rat(2, pk), 1);
    f.b(1, 1) = f.b(0, 0);
    f.b(0, 1) = Rat(1, pk);
    f.b(1, 0) = Rat(1, pk);
    return f;
}

inline FiniteQuadraticForm direct_sum(const FiniteQuadraticForm& a,
                                      const FiniteQuadraticForm& b) {
    std::vector<long long> orders = a.factors;
    orders.insert(orders.end(), b.factors.begin(), b.factors.end());
    std::vector<Rat> qv = a.q;
    qv.insert(qv.end(), b.q.begin(), b.q.end());
    RMat bm(orders.size(), orders.size());
    for (std::size_t i = 0; i < a.gens(); ++i)
        for (std::size_t j = 0; j < a.gens(); ++j) bm(i, j) = a.b(i, j);
    for (std::size_t i = 0; i < b.gens(); ++i)
        for (std::size_t j = 0; j < b.gens(); ++j)
            bm(a.gens() + i, a.gens() + j) = b.b(i, j);
    return detail::normalize_form(orders, qv, bm, std::nullopt);
}

inline FiniteQuadraticForm negate(const FiniteQuadraticForm& f) {
    FiniteQuadraticForm g;
    g.factors = f.factors;
    g.b = RMat(f.gens(), f.gens());
    for (std::size_t i = 0; i < f.gens(); ++i) {
        g.q.push_back(rat_mod(-f.q[i], 2));
        for (std::size_t j = 0; j < f.gens(); ++j) g.b(i, j) = rat_mod(-f.b(i, j), 1);
    }
    return g;
}

inline FiniteQuadraticForm trivial_form() { return FiniteQuadraticForm{}; }

namespace detail {

/// All elements of the form's group as coordinate vectors (mixed radix).
inline std::vector<Coords> all_elements(const FiniteQuadraticForm& f, Int cap) {
    if (f.order() > cap)
        throw CapExceeded("group of order " + to_string(f.order()) +
                          " exceeds cap " + to_string(cap));
    long long total = to_ll(f.order());
    std::vector<Coords> out;
    out.reserve(total);
    Coords x(f.gens(), 0);
    for (long long idx = 0; idx < total; ++idx) {
        out.push_back(x);
        for (std::size_t i = 0; i < f.gens(); ++i) {
            if (++x[i] < f.factors[i]) break;
            x[i] = 0;
        }
    }
    return out;
}

struct PrimaryBlock {
    long long p = 0;
    std::vector<std::size_t> gen_idx; ///< indices into the parent form
    FiniteQuadraticForm form;         ///< the restricted sub-form
};

inline std::vector<PrimaryBlock> primary_blocks(const FiniteQuadraticForm& f) {
    std::map<long long, PrimaryBlock> blocks;
    for (std::size_t i = 0; i < f.gens(); ++i) {
        long long p = smallest_prime_factor(f.factors[i]);
        auto& bl = blocks[p];
        bl.p = p;
        bl.gen_idx.push_back(i);
    }
    std::vector<PrimaryBlock> out;
    for (auto& [p, bl] : blocks) {
        auto& g = bl.form;
        g.b = RMat(bl.gen_idx.size(), bl.gen_idx.size());
        for (std::size_t a = 0; a < bl.gen_idx.size(); ++a) {
            g.factors.push_back(f.factors[bl.gen_idx[a]]);
            g.q.push_back(f.q[bl.gen_idx[a]]);
            for (std::size_t c = 0; c < bl.gen_idx.size(); ++c)
                g.b(a, c) = f.b(bl.gen_idx[a], bl.gen_idx[c]);
        }
        out.push_back(std::move(bl));
    }
    return out;
}

/// Do the images generate the whole group? Images are columns over the
/// target's generator coordinates.
inline bool images_generate(const FiniteQuadraticForm& target,
                            const std::vector<Coords>& images) {
    std::size_t m = target.gens();
    IMat a(m, images.size() + m);
    for (std::size_t j = 0; j < images.size(); ++j)
        for (std::size_t i = 0; i < m; ++i) a(i, j) = images[j][i];
    for (std::size_t i = 0; i < m; ++i) a(i, images.size() + i) = target.factors[i];
    SmithResult snf = smith_normal_form(a);
    for (std::size_t i = 0; i < m; ++i)
        if (snf.s(i, i) != 1) return false;
    return true;
}

/// Backtracking block isomorphism; optional constraint hook is evaluated on
/// the full generator assignment.
template <typename Accept>
bool match_block(const FiniteQuadraticForm& f1, const FiniteQuadraticForm& f2,
                 const std::vector<Coords>& elements2, Accept&& accept,
                 std::vector<Coords>& images, std::size_t at, long long& budget) {
    if (at == f1.gens())
        return images_generate(f2, images) && accept(images);
    for (const Coords& cand : elements2) {
        if (--budget < 0) throw CapExceeded("isomorphism search budget exhausted");
        if (f2.element_order(cand) != f1.factors[at]) continue;
        if (f2.q_of(cand) != f1.q[at]) continue;
        bool ok = true;
        for (std::size_t j = 0; j < at && ok; ++j) {
            Coords ej(f1.gens(), 0);
            ej[j] = 1;
            Coords eat(f1.gens(), 0);
            eat[at] = 1;
            if (f2.b_of(images[j], cand) != f1.b_of(ej, eat)) ok = false;
        }
        if (!ok) continue;
        images.push_back(cand);
        if (match_block(f1, f2, elements2, accept, images, at + 1, budget)) return true;
        images.pop_back();
    }
    return false;
}

} // namespace detail

/// Witness of a form isomorphism: images of the source generators expressed
/// in the target's generator coordinates, in source generator order.
using IsoWitness = std::vector<Coords>;

/// Exact isomorphism test for finite quadratic forms (group isomorphism
/// preserving q), by p-primary decomposition and pruned backtracking.
inline std::optional<IsoWitness> find_isomorphism(const FiniteQuadraticForm& f1,
                                                  const FiniteQuadraticForm& f2,
                                                  Int cap = Int(1) << 16) {
    if (f1.order() != f2.order()) return std::nullopt;
    {
        auto a = f1.factors, b = f2.factors;
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        if (a != b) return std::nullopt;
    }
    if (f1.order() > cap)
        throw CapExceeded("isomorphism test above cap " + to_string(cap));
    auto blocks1 = detail::primary_blocks(f1);
    auto blocks2 = detail::primary_blocks(f2);
    IsoWitness witness(f1.gens());
    for (std::size_t bi = 0; bi < blocks1.size(); ++bi) {
        const auto& b1 = blocks1[bi];
        const auto& b2 = blocks2[bi];
        auto elems2 = detail::all_elements(b2.form, cap);
        // histogram pruning on (order, q)
        auto histogram = [](const FiniteQuadraticForm& f, const std::vector<Coords>& els) {
            std::map<std::pair<long long, Rat>, int> h;
            for (const auto& e : els) ++h[{f.element_order(e), f.q_of(e)}];
            return h;
        };
        auto els1 = detail::all_elements(b1.form, cap);
        if (histogram(b1.form, els1) != histogram(b2.form, elems2)) return std::nullopt;
        std::vector<Coords> images;
        long long budget = 50'000'000;
        bool ok = detail::match_block(
            b1.form, b2.form, elems2, [](const std::vector<Coords>&) { return true; },
            images, 0, budget);
        if (!ok) return std::nullopt;
        for (std::size_t a = 0; a < b1.gen_idx.size(); ++a) {
            Coords full(f2.gens(), 0);
            for (std::size_t c = 0; c < b2.gen_idx.size(); ++c)
                full[b2.gen_idx[c]] = images[a][c];
            witness[b1.gen_idx[a]] = full;
        }
    }
    return witness;
}

inline bool is_isomorphic(const FiniteQuadraticForm& f1, const FiniteQuadraticForm& f2,
                          Int cap = Int(1) << 16) {
    return find_isomorphism(f1, f2, cap).has_value();
}

struct IsotropicSubgroup {
    std::vector<Coords> generators;
    Int order = 1;
    std::vector<Coords> elements; ///< full closure, sorted
};

namespace detail {

inline IsotropicSubgroup closure(const FiniteQuadraticForm& f,
                                 const std::vector<Coords>& gens) {
    std::set<Coords> seen{Coords(f.gens(), 0)};
    std::vector<Coords> frontier{Coords(f.gens(), 0)};
    for (const auto& g : gens) {
        std::vector<Coords> base(seen.begin(), seen.end());
        long long og = f.element_order(g);
        for (const auto& e : base) {
            Coords cur = e;
            for (long long k = 1; k < og; ++k) {
                cur = f.add(cur, g);
                seen.insert(cur);
            }
        }
    }
    IsotropicSubgroup h;
    h.generators = gens;
    h.elements.assign(seen.begin(), seen.end());
    h.order = Int(static_cast<long long>(h.elements.size()));
    return h;
}

} // namespace detail

/// All q-isotropic subgroups H (q|H = 0, b|HxH = 0, |H|^2 dividing |G|),
/// optionally deduplicated into orbits of the q-preserving automorphisms.
inline std::vector<IsotropicSubgroup> enumerate_isotropic(const FiniteQuadraticForm& f,
                                                          bool dedup = false,
                                                          Int cap = Int(1) << 16,
                                                          long long budget = 1'000'000) {
    auto elements = detail::all_elements(f, cap);
    Int n = f.order();
    std::vector<Coords> isotropic;
    for (const auto& e : elements)
        if (f.q_of(e) == 0) isotropic.push_back(e);
    auto square_divides = [&](Int h) { return (n % (h * h)) == 0; };

    std::map<std::vector<Coords>, IsotropicSubgroup> found;
    IsotropicSubgroup zero = detail::closure(f, {});
    found[zero.elements] = zero;
    std::vector<IsotropicSubgroup> frontier{zero};
    while (!frontier.empty()) {
        std::vector<IsotropicSubgroup> next;
        for (const auto& h : frontier) {
            for (const auto& x : isotropic) {
                if (--budget < 0) throw CapExceeded("isotropic enumeration budget");
                if (std::binary_search(h.elements.begin(), h.elements.end(), x)) continue;
                bool ok = true;
                for (const auto& g : h.generators)
                    if (f.b_of(x, g) != 0) { ok = false; break; }
                if (!ok) continue;
                auto gens = h.generators;
                gens.push_back(x);
                IsotropicSubgroup h2 = detail::closure(f, gens);
                if (!square_divides(h2.order)) continue;
                if (found.count(h2.elements)) continue;
                found[h2.elements] = h2;
                next.push_back(h2);
            }
        }
        frontier = std::move(next);
    }
    std::vector<IsotropicSubgroup> all;
    for (auto& [k, v] : found) all.push_back(v);
    std::sort(all.begin(), all.end(), [](const IsotropicSubgroup& a, const IsotropicSubgroup& b) {
        if (a.order != b.order) return a.order < b.order;
        return a.elements < b.elements;
    });
    if (!dedup) return all;

    // orbit representatives under Aut(q): pairwise conjugacy search
    std::vector<IsotropicSubgroup> reps;
    for (const auto& h : all) {
        bool dup = false;
        for (const auto& r : reps) {
            if (r.order != h.order) continue;
            // does some q-automorphism map r's element set onto h's?
            auto blocks = detail::primary_blocks(f);
            std::vector<Coords> images;
            long long sbudget = 10'000'000;
            std::set<Coords> hset(h.elements.begin(), h.elements.end());
            if (blocks.size() == 1) {
                auto els = detail::all_elements(f, cap);
                auto accept = [&](const std::vector<Coords>& img) {
                    for (const auto& e : r.elements) {
                        Coords mapped(f.gens(), 0);
                        for (std::size_t i = 0; i < f.gens(); ++i)
                            for (long long t = 0; t < e[i]; ++t)
                                mapped = f.add(mapped, img[i]);
                        if (!hset.count(mapped)) return false;
                    }
                    return true;
                };
                try {
                    dup = detail::match_block(f, f, els, accept, images, 0, sbudget);
                } catch (const CapExceeded&) {
                    dup = false;
                }
            } else {
                // multi-prime: conjugacy factors through the primary blocks;
                // compare blockwise projections
                dup = true;
                for (auto& bl : blocks) {
                    auto project = [&](const IsotropicSubgroup& s) {
                        std::set<Coords> proj;
                        for (const auto& e : s.elements) {
                            Coords pe;
                            for (auto gi : bl.gen_idx) pe.push_back(e[gi]);
                            proj.insert(pe);
                        }
                        return proj;
                    };
                    auto pr = project(r), ph = project(h);
                    if (pr.size() != ph.size()) { dup = false; break; }
                    std::vector<Coords> rel(pr.begin(), pr.end()),
                        hel(ph.begin(), ph.end());
                    auto els = detail::all_elements(bl.form, cap);
                    std::set<Coords> hs(hel.begin(), hel.end());
                    std::vector<Coords> img2;
                    auto accept = [&](const std::vector<Coords>& img) {
                        for (const auto& e : rel) {
                            Coords mapped(bl.form.gens(), 0);
                            for (std::size_t i = 0; i < bl.form.gens(); ++i)
                                for (long long t = 0; t < e[i]; ++t)
                                    mapped = bl.form.add(mapped, img[i]);
                            if (!hs.count(mapped)) return false;
                        }
                        return true;
                    };
                    long long bbudget = 10'000'000;
                    bool blockdup = false;
                    try {
                        blockdup = detail::match_block(bl.form, bl.form, els, accept,
                                                       img2, 0, bbudget);
                    } catch (const CapExceeded&) {
                        blockdup = false;
                    }
                    if (!blockdup) { dup = false; break; }
                }
            }
            if (dup) break;
        }
        if (!dup) reps.push_back(h);
    }
    return reps;
}

/// Nikulin quotient: q_M = (q_L | H-perp) / H for an isotropic subgroup H.
inline FiniteQuadraticForm quotient_form(const FiniteQuadraticForm& f,
                                         const IsotropicSubgroup& h,
                                         Int cap = Int(1) << 16) {
    for (const auto& g : h.generators) {
        if (f.q_of(g) != 0) throw NotIsotropic("generator has nonzero q");
        for (const auto& g2 : h.generators)
            if (f.b_of(g, g2) != 0) throw NotIsotropic("b does not vanish on H");
    }
    std::size_t m = f.gens();
    if (m == 0) return f;
    // preimage lattice of H-perp inside Z^m
    std::size_t k = h.generators.size();
    IMat cond(k, m + k);
    for (std::size_t r = 0; r < k; ++r) {
        Int d(1);
        std::vector<Rat> row(m);
        for (std::size_t i = 0; i < m; ++i) {
            Coords ei(m, 0);
            ei[i] = 1;
            row[i] = f.b_of(ei, h.generators[r]);
            d = lcm(d, den(row[i]));
        }
        for (std::size_t i = 0; i < m; ++i) cond(r, i) = num(row[i]) * (d / den(row[i]));
        cond(r, m + r) = d;
    }
    IMat ker = integer_kernel(cond); // columns, dimension m+k
    IMat perp_rows(ker.cols(), m);
    for (std::size_t c = 0; c < ker.cols(); ++c)
        for (std::size_t i = 0; i < m; ++i) perp_rows(c, i) = ker(i, c);
    IMat bp = hermite_normal_form(perp_rows);
    IMat b_perp(m, m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) b_perp(i, j) = bp(i, j);

    // lattice of H + relations
    IMat hl(h.generators.size() + m, m);
    for (std::size_t r = 0; r < h.generators.size(); ++r)
        for (std::size_t i = 0; i < m; ++i) hl(r, i) = h.generators[r][i];
    for (std::size_t i = 0; i < m; ++i) hl(h.generators.size() + i, i) = f.factors[i];
    IMat bh_full = hermite_normal_form(hl);
    IMat b_h(m, m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) b_h(i, j) = bh_full(i, j);

    // coefficient matrix C with B_H = C * B_P
    auto bp_inv = inverse(to_rational(b_perp).transposed());
    if (!bp_inv) throw Error("perp lattice is degenerate");
    IMat c(m, m);
    for (std::size_t r = 0; r < m; ++r) {
        std::vector<Rat> rhs(m);
        for (std::size_t j = 0; j < m; ++j) rhs[j] = Rat(b_h(r, j));
        auto sol = solve(to_rational(b_perp).transposed(), rhs);
        if (!sol) throw Error("H not contained in H-perp lattice");
        for (std::size_t j = 0; j < m; ++j) {
            if (!is_integer((*sol)[j])) throw NotIsotropic("H not inside H-perp");
            c(r, j) = num((*sol)[j]);
        }
    }
    SmithResult snf = smith_normal_form(c.transposed());
    auto uinv = inverse(to_rational(snf.u));
    if (!uinv) throw Error("unimodular inverse failed");
    std::vector<long long> orders;
    std::vector<Coords> gens;
    for (std::size_t t = 0; t < m; ++t) {
        Int s = snf.s(t, t);
        if (s <= 1) continue;
        orders.push_back(to_ll(s));
        // coefficient vector = column t of U^{-1}; element = coeff * B_P
        Coords elem(m, 0);
        for (std::size_t i = 0; i < m; ++i) {
            Rat coeff = (*uinv)(i, t);
            if (!is_integer(coeff)) throw Error("non-integral quotient generator");
            for (std::size_t j = 0; j < m; ++j)
                elem[j] += to_ll(num(coeff) * b_perp(i, j) % Int(4) == 99
                                     ? Int(0)
                                     : num(coeff) * b_perp(i, j));
        }
        gens.push_back(f.reduce(elem));
    }
    std::vector<Rat> qv;
    RMat bm(orders.size(), orders.size());
    for (std::size_t i = 0; i < gens.size(); ++i) {
        qv.push_back(f.q_of(gens[i]));
        for (std::size_t j = 0; j < gens.size(); ++j) bm(i, j) = f.b_of(gens[i], gens[j]);
    }
    // q must be H-invariant on cosets
    for (const auto& g : gens)
        for (const auto& hh : h.generators)
            if (f.q_of(f.add(g, hh)) != f.q_of(g))
                throw Error("quotient form not well-defined");
    FiniteQuadraticForm out = detail::normalize_form(orders, qv, bm, std::nullopt);
    if (out.order() * h.order * h.order != f.order())
        throw Error("quotient order mismatch");
    return out;
}

/// Gram matrix of the even overlattice generated by L and the rational lifts
/// of an isotropic subgroup of its discriminant form.
inline GramLattice overlattice_gram(const GramLattice& l, const IsotropicSubgroup& h) {
    FiniteQuadraticForm f = discriminant_form(l);
    for (const auto& g : h.generators) {
        if (f.q_of(g) != 0) throw NotIsotropic("generator has nonzero q");
        for (const auto& g2 : h.generators)
            if (f.b_of(g, g2) != 0) throw NotIsotropic("b does not vanish on H");
    }
    std::size_t n = l.dim();
    const RMat& lifts = *f.lifts;
    std::size_t k = h.generators.size();
    // basis rows: identity plus lifted glue vectors, with common denominator
    Int d(1);
    std::vector<std::vector<Rat>> glue;
    for (std::size_t r = 0; r < k; ++r) {
        std::vector<Rat> v(n, Rat(0));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < f.gens(); ++j)
                v[i] += Rat(h.generators[r][j]) * lifts(i, j);
        for (const Rat& x : v) d = lcm(d, den(x));
        glue.push_back(v);
    }
    IMat stack(n + k, n);
    for (std::size_t i = 0; i < n; ++i) stack(i, i) = d;
    for (std::size_t r = 0; r < k; ++r)
        for (std::size_t i = 0; i < n; ++i)
            stack(n + r, i) = num(glue[r][i]) * (d / den(glue[r][i]));
    IMat hnf = hermite_normal_form(stack);
    RMat basis(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) basis(i, j) = Rat(hnf(i, j), d);
    RMat gr = basis * to_rational(l.gram) * basis.transposed();
    IMat out(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (!is_integer(gr(i, j)))
                throw NonIntegralGlue("overlattice gram is not integral");
            out(i, j) = num(gr(i, j));
        }
    GramLattice m = GramLattice::from(std::move(out), "overlattice");
    if (m.det * h.order * h.order != l.det)
        throw NonIntegralGlue("overlattice determinant inconsistent");
    return m;
}

} // namespace k3pic
