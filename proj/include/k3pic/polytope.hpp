#pragma once

#include "k3pic/errors.hpp"
#include "k3pic/matrix.hpp"
#include "k3pic/weights.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <set>
#include <vector>

namespace k3pic {

using V3 = std::array<long long, 3>;
using V3R = std::array<Rat, 3>;
using V4 = std::array<long long, 4>;
using V4R = std::array<Rat, 4>;

inline V3 operator-(const V3& a, const V3& b) {
    return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}
inline long long dot(const V3& a, const V3& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}
inline V3 cross(const V3& a, const V3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
inline bool is_zero(const V3& a) { return a[0] == 0 && a[1] == 0 && a[2] == 0; }
inline V3 primitive(V3 v) {
    long long g = std::gcd(std::gcd(std::abs(v[0]), std::abs(v[1])), std::abs(v[2]));
    if (g > 1) { v[0] /= g; v[1] /= g; v[2] /= g; }
    return v;
}

/// A facet of the Newton polytope: inward normal n (primitive, in the dual
/// rank-3 lattice) with supporting inequality <n,x> >= -support on the
/// polytope (support is relative to the current origin).
struct Facet {
    V3 normal{};
    long long support = 0;
    std::vector<int> vertex_cycle;   ///< ordered cycle of vertex indices
    std::vector<int> point_ids;      ///< all lattice points on the facet
    int interior_points = 0;         ///< l*(F)
};

struct PolyEdge {
    int v0 = 0, v1 = 0;             ///< endpoint vertex indices
    int f0 = 0, f1 = 0;             ///< the two incident facets
    int lattice_length = 1;         ///< lattice points on the edge, minus one
};

/// Newton polytope of a weight system in projected rank-3 coordinates,
/// together with the rational simplex Q and the polar dual data.
struct LatticePolytope {
    WeightVector weights;
    std::vector<V4R> rational_vertices;        ///< vertices of Q
    std::array<V4, 3> basis{};                 ///< affine basis of {q.x = s}
    V4 base_point{};
    std::vector<V3> vertices;                  ///< vertices of the hull
    std::vector<V3> lattice_points;            ///< all lattice points of Q (== of the hull)
    std::vector<Facet> facets;
    std::vector<PolyEdge> edges;
    int interior_count = 0;
    bool translated = false;                   ///< origin == the unique interior point
    std::vector<V3R> dual_vertices;            ///< vertices of the polar dual
    bool reflexive = false;

    int facet_count() const { return static_cast<int>(facets.size()); }
    int lattice_point_count() const { return static_cast<int>(lattice_points.size()); }
};

namespace detail {

/// Deterministic lattice basis of ker_Z(q) in Z^4, rows in Hermite normal form.
inline std::array<V4, 3> hyperplane_basis(const WeightVector& w) {
    IMat qr(1, 4);
    for (int i = 0; i < 4; ++i) qr(0, i) = w.q[i];
    IMat k = integer_kernel(qr); // 4 x 3, saturated
    IMat rows(3, 4);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 4; ++j) rows(i, j) = k(j, i);
    IMat h = hermite_normal_form(rows);
    std::array<V4, 3> basis{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 4; ++j) basis[i][j] = to_ll(h(i, j));
    return basis;
}

/// Coordinates u of x in the affine frame x = x0 + sum u_i b_i (exact; the
/// input is required to lie on the affine lattice).
inline V3 project_point(const V4& x, const V4& x0, const std::array<V4, 3>& basis) {
    RMat a(4, 3);
    std::vector<Rat> rhs(4);
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 3; ++j) a(i, j) = Rat(basis[j][i]);
        rhs[i] = Rat(x[i] - x0[i]);
    }
    auto sol = solve(a, rhs);
    if (!sol) throw Error("point not on the weight hyperplane");
    V3 u{};
    for (int j = 0; j < 3; ++j) {
        if (!is_integer((*sol)[j])) throw Error("non-integral affine coordinate");
        u[j] = to_ll(num((*sol)[j]));
    }
    return u;
}

struct PlaneKey {
    V3 n;
    long long c; ///< <n,x> >= c for all points, tight on the facet
    bool operator<(const PlaneKey& o) const {
        if (n != o.n) return n < o.n;
        return c < o.c;
    }
};

/// Cyclic order of coplanar points around their centroid; exact, via a 2D
/// coordinate projection dropping the largest normal component.
inline std::vector<int> cyclic_order(const std::vector<int>& ids,
                                     const std::vector<V3>& pts, const V3& normal) {
    int drop = 0;
    for (int i = 1; i < 3; ++i)
        if (std::abs(normal[i]) > std::abs(normal[drop])) drop = i;
    int a = (drop + 1) % 3, b = (drop + 2) % 3;
    long long n = static_cast<long long>(ids.size());
    long long cx = 0, cy = 0;
    for (int id : ids) { cx += pts[id][a]; cy += pts[id][b]; }
    // angle comparison around (cx/n, cy/n), scaled by n to stay integral
    auto rel = [&](int id) {
        return std::pair<long long, long long>(n * pts[id][a] - cx, n * pts[id][b] - cy);
    };
    auto half = [](const std::pair<long long, long long>& p) {
        return (p.second < 0 || (p.second == 0 && p.first < 0)) ? 1 : 0;
    };
    std::vector<int> order = ids;
    std::sort(order.begin(), order.end(), [&](int i, int j) {
        auto pi = rel(i), pj = rel(j);
        if (half(pi) != half(pj)) return half(pi) < half(pj);
        long long crossv = pi.first * pj.second - pi.second * pj.first;
        if (crossv != 0) return crossv > 0;
        return i < j;
    });
    // start at the smallest vertex id for determinism
    auto it = std::min_element(order.begin(), order.end());
    std::rotate(order.begin(), it, order.end());
    return order;
}

} // namespace detail

/// Build the Newton polytope of a weight system: convex hull of the integral
/// points of Q in projected coordinates, with full face combinatorics. If the
/// hull has a unique interior lattice point, coordinates are translated so
/// that it becomes the origin.
inline LatticePolytope build_newton_polytope(
    const WeightVector& w,
    const std::optional<std::array<V4, 3>>& basis_override = std::nullopt) {
    LatticePolytope p;
    p.weights = w;
    for (int i = 0; i < 4; ++i) {
        V4R v{};
        for (int j = 0; j < 4; ++j) v[j] = Rat(0);
        v[i] = Rat(w.s, w.q[i]);
        p.rational_vertices.push_back(v);
    }
    p.base_point = {1, 1, 1, 1}; // always on the hyperplane: sum q_i = s
    p.basis = basis_override ? *basis_override : detail::hyperplane_basis(w);

    for (const auto& m : monomials(w))
        p.lattice_points.push_back(detail::project_point(m, p.base_point, p.basis));
    std::sort(p.lattice_points.begin(), p.lattice_points.end());
    const auto& pts = p.lattice_points;
    int n = static_cast<int>(pts.size());

    // dimension check
    {
        IMat diffs(std::max(n - 1, 0), 3);
        for (int i = 1; i < n; ++i)
            for (int j = 0; j < 3; ++j) diffs(i - 1, j) = pts[i][j] - pts[0][j];
        if (n < 4 || rank(diffs) < 3)
            throw DegeneratePolytope("Newton polytope of " + w.str() +
                                     " is not 3-dimensional");
    }

    // supporting planes by exhaustive triple enumeration; a facet is the full
    // set of points on a supporting plane, so coplanar triangulation
    // artifacts never arise
    std::set<detail::PlaneKey> planes;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int k = j + 1; k < n; ++k) {
                V3 nor = cross(pts[j] - pts[i], pts[k] - pts[i]);
                if (is_zero(nor)) continue;
                nor = primitive(nor);
                long long c = dot(nor, pts[i]);
                bool lo = false, hi = false;
                for (int t = 0; t < n && !(lo && hi); ++t) {
                    long long d = dot(nor, pts[t]);
                    if (d < c) lo = true;
                    if (d > c) hi = true;
                }
                if (lo && hi) continue;
                if (lo) { nor = {-nor[0], -nor[1], -nor[2]}; c = -c; }
                planes.insert({nor, c});
            }

    std::vector<std::vector<int>> facet_points;
    for (const auto& pk : planes) {
        Facet f;
        f.normal = pk.n;
        f.support = -pk.c;
        std::vector<int> on;
        for (int t = 0; t < n; ++t)
            if (dot(pk.n, pts[t]) == pk.c) on.push_back(t);
        f.point_ids = on;
        p.facets.push_back(f);
        facet_points.push_back(on);
    }

    // facet membership per point; vertices lie on >= 3 facets
    std::vector<std::vector<int>> facets_of(n);
    for (int fi = 0; fi < static_cast<int>(facet_points.size()); ++fi)
        for (int t : facet_points[fi]) facets_of[t].push_back(fi);
    std::vector<int> vertex_of_point(n, -1);
    for (int t = 0; t < n; ++t)
        if (facets_of[t].size() >= 3) {
            vertex_of_point[t] = static_cast<int>(p.vertices.size());
            p.vertices.push_back(pts[t]);
        }

    for (auto& f : p.facets) {
        f.interior_points = 0;
        for (int t : f.point_ids)
            if (facets_of[t].size() == 1) ++f.interior_points;
    }
    p.interior_count = 0;
    for (int t = 0; t < n; ++t)
        if (facets_of[t].empty()) ++p.interior_count;

    // edges: pairs of facets sharing >= 2 points
    std::map<std::pair<int, int>, std::vector<int>> shared;
    for (int t = 0; t < n; ++t) {
        const auto& fs = facets_of[t];
        for (std::size_t a = 0; a < fs.size(); ++a)
            for (std::size_t b = a + 1; b < fs.size(); ++b)
                shared[{fs[a], fs[b]}].push_back(t);
    }
    for (const auto& [fp, ids] : shared) {
        if (ids.size() < 2) continue;
        std::vector<V3> line;
        for (int t : ids) line.push_back(pts[t]);
        std::sort(line.begin(), line.end());
        PolyEdge e;
        e.f0 = fp.first;
        e.f1 = fp.second;
        e.lattice_length = static_cast<int>(line.size()) - 1;
        auto vid = [&](const V3& v) {
            int t = static_cast<int>(std::lower_bound(pts.begin(), pts.end(), v) - pts.begin());
            if (vertex_of_point[t] < 0) throw Error("edge endpoint is not a vertex");
            return vertex_of_point[t];
        };
        e.v0 = vid(line.front());
        e.v1 = vid(line.back());
        p.edges.push_back(e);
    }

    // Euler check
    if (static_cast<int>(p.vertices.size()) - static_cast<int>(p.edges.size()) +
            static_cast<int>(p.facets.size()) != 2)
        throw Error("hull combinatorics violate the Euler relation");

    // facet vertex cycles
    for (auto& f : p.facets) {
        std::vector<int> vids;
        for (int t : f.point_ids)
            if (vertex_of_point[t] >= 0) vids.push_back(vertex_of_point[t]);
        std::vector<int> order = detail::cyclic_order(vids, p.vertices, f.normal);
        // cyclic_order works on point indices into an array; map through vertices
        f.vertex_cycle = order;
    }

    // translate the unique interior lattice point to the origin
    if (p.interior_count == 1) {
        V3 c{};
        for (int t = 0; t < n; ++t)
            if (facets_of[t].empty()) c = pts[t];
        for (auto& v : p.vertices) v = v - c;
        for (auto& v : p.lattice_points) v = v - c;
        for (auto& f : p.facets) f.support = -(-f.support - dot(f.normal, c));
        for (int i = 0; i < 4; ++i)
            p.base_point[i] += c[0] * p.basis[0][i] + c[1] * p.basis[1][i] + c[2] * p.basis[2][i];
        p.translated = true;
    }
    return p;
}

/// Vertices of the polar dual and the reflexivity flag; requires a unique
/// interior lattice point (placed at the origin by build_newton_polytope).
inline std::pair<std::vector<V3R>, bool> polar_dual(LatticePolytope& p) {
    if (p.interior_count != 1 || !p.translated)
        throw NoUniqueInteriorPoint("polytope of " + p.weights.str() + " has " +
                                    std::to_string(p.interior_count) +
                                    " interior lattice points (need exactly 1)");
    std::vector<V3R> duals;
    bool reflexive = true;
    for (const auto& f : p.facets) {
        if (f.support <= 0) throw Error("origin is not interior to a facet");
        V3R y{};
        for (int i = 0; i < 3; ++i) y[i] = Rat(f.normal[i], f.support);
        if (f.support != 1) reflexive = false;
        duals.push_back(y);
    }
    p.dual_vertices = duals;
    p.reflexive = reflexive;
    return {duals, reflexive};
}

/// A lattice point of the polar dual together with the set of Delta-vertices
/// whose inequality <y,v> >= -1 is tight (identifying its minimal dual face).
struct DualPoint {
    V3 y{};
    std::vector<int> tight_vertices;
};

/// All lattice points of the polar dual, by direct inequality enumeration.
/// Valid for reflexive polytopes (integral dual vertices as the bounding box).
inline std::vector<DualPoint> dual_lattice_points(const LatticePolytope& p) {
    if (p.dual_vertices.empty()) throw Error("polar dual not computed");
    V3 lo{0, 0, 0}, hi{0, 0, 0};
    for (const auto& dv : p.dual_vertices)
        for (int i = 0; i < 3; ++i) {
            Int fl = floor_div(num(dv[i]), den(dv[i]));
            Int ce = ceil_div(num(dv[i]), den(dv[i]));
            lo[i] = std::min(lo[i], to_ll(fl));
            hi[i] = std::max(hi[i], to_ll(ce));
        }
    std::vector<DualPoint> out;
    for (long long a = lo[0]; a <= hi[0]; ++a)
        for (long long b = lo[1]; b <= hi[1]; ++b)
            for (long long c = lo[2]; c <= hi[2]; ++c) {
                V3 y{a, b, c};
                bool inside = true;
                DualPoint dp;
                dp.y = y;
                for (int vi = 0; vi < static_cast<int>(p.vertices.size()) && inside; ++vi) {
                    long long d = dot(y, p.vertices[vi]);
                    if (d < -1) inside = false;
                    else if (d == -1) dp.tight_vertices.push_back(vi);
                }
                if (inside) out.push_back(dp);
            }
    return out;
}

} // namespace k3pic
