#pragma once

#include "k3pic/matrix.hpp"
#include "k3pic/polytope.hpp"

#include <string>
#include <vector>

namespace k3pic {

/// Resolution data for one edge of the Newton polytope: the 2D normal cone
/// spanned by the incident facet normals, in Hirzebruch-Jung normal form.
struct EdgeResolution {
    int edge_id = 0;
    Int cone_index = 1;                  ///< lattice index d of the 2D cone
    std::vector<long long> hj_entries;   ///< continued-fraction entries, all >= 2
    int a_type = 0;                      ///< exceptional curves per singular point
    int multiplicity = 1;                ///< l(E): singular points on the orbit
    bool gorenstein = true;              ///< every hj entry equals 2
};

enum class CurveKind { Facet, Exceptional, Virtual };

struct CurveVertex {
    int id = 0;
    CurveKind kind = CurveKind::Facet;
    int genus = 0;
    long long self_intersection = -2;
};

struct GraphEdge {
    int a = 0, b = 0;
    int multiplicity = 1;
};

/// Desingularization graph: vertices are curves on the smooth model, edges
/// carry intersection multiplicities, gram is the full intersection matrix.
struct CurveGraph {
    std::vector<CurveVertex> vertices;
    std::vector<GraphEdge> edges;
    IMat gram;

    int size() const { return static_cast<int>(vertices.size()); }
};

struct RankReport {
    int rho = 0;
    int facet_excess = 0;  ///< #facets - 4
    int edge_sum = 0;      ///< sum over edges of l(E) * k_E
    int matrix_rank = 0;
    int matrix_dim = 0;
};

namespace detail {

/// Hirzebruch-Jung continued fraction d/e = a1 - 1/(a2 - ...), all a_i >= 2.
inline std::vector<long long> hj_expansion(Int d, Int e) {
    std::vector<long long> out;
    while (e > 0) {
        Int a = ceil_div(d, e);
        out.push_back(to_ll(a));
        Int next = a * e - d;
        d = e;
        e = next;
    }
    return out;
}

/// Normalize the 2D cone spanned by primitive u1, u2 to <(0,1),(d,-e)> with
/// 0 <= e < d; returns (d, e). d = 1 means a smooth cone.
inline std::pair<Int, Int> cone_normal_form(std::array<Int, 2> u1, std::array<Int, 2> u2) {
    // unimodular T with T u1 = (0,1)
    Int a = u1[0], b = u1[1];
    Int x(0), y(0), g = a, s(1), t(0); // extended gcd on (a,b)
    {
        Int old_r = a, r = b, old_s = Int(1), ss = Int(0), old_t = Int(0), tt = Int(1);
        while (r != 0) {
            Int q = old_r / r;
            Int tmp = old_r - q * r; old_r = r; r = tmp;
            tmp = old_s - q * ss; old_s = ss; ss = tmp;
            tmp = old_t - q * tt; old_t = tt; tt = tmp;
        }
        g = old_r; s = old_s; t = old_t;
        if (g < 0) { g = -g; s = -s; t = -t; }
    }
    // rows of T: (b/g, -a/g) and (s, t); det = 1 after sign fix
    Int r00 = b / g, r01 = -a / g, r10 = s, r11 = t;
    if (r00 * r11 - r01 * r10 < 0) { r00 = -r00; r01 = -r01; }
    x = r00 * u2[0] + r01 * u2[1];
    y = r10 * u2[0] + r11 * u2[1];
    if (x < 0) x = -x; // reflection, type-preserving
    if (x == 0) throw Error("degenerate 2D cone (parallel facet normals)");
    Int d = x;
    Int e = pos_mod(-y, d);
    return {d, e};
}

} // namespace detail

/// Resolve the edge singularities of the toric hypersurface: for each edge of
/// the polytope, the cone spanned by the incident facet normals inside the
/// saturated rank-2 sublattice they span, in normal form.
inline std::vector<EdgeResolution> resolve_edges(const LatticePolytope& p,
                                                 bool strict = false) {
    std::vector<EdgeResolution> out;
    for (int ei = 0; ei < static_cast<int>(p.edges.size()); ++ei) {
        const PolyEdge& e = p.edges[ei];
        const V3 n0 = p.facets[e.f0].normal;
        const V3 n1 = p.facets[e.f1].normal;
        V3 w = primitive(cross(n0, n1));
        if (is_zero(w)) throw Error("incident facet normals are parallel");
        IMat wm(1, 3);
        for (int i = 0; i < 3; ++i) wm(0, i) = w[i];
        IMat plane = integer_kernel(wm); // 3 x 2 basis of the saturated plane lattice
        // coordinates of n0, n1 in the plane basis
        RMat a(3, 2);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 2; ++j) a(i, j) = Rat(plane(i, j));
        auto coords = [&](const V3& v) {
            std::vector<Rat> rhs{Rat(v[0]), Rat(v[1]), Rat(v[2])};
            auto sol = solve(a, rhs);
            if (!sol || !is_integer((*sol)[0]) || !is_integer((*sol)[1]))
                throw Error("facet normal not in its plane lattice");
            return std::array<Int, 2>{num((*sol)[0]), num((*sol)[1])};
        };
        auto [d, eparam] = detail::cone_normal_form(coords(n0), coords(n1));
        EdgeResolution er;
        er.edge_id = ei;
        er.cone_index = d;
        er.multiplicity = e.lattice_length;
        if (d > 1) {
            er.hj_entries = detail::hj_expansion(d, eparam);
            er.a_type = static_cast<int>(er.hj_entries.size());
            for (long long h : er.hj_entries)
                if (h != 2) er.gorenstein = false;
            if (!er.gorenstein && strict)
                throw NonGorensteinEdge("edge " + std::to_string(ei) +
                                        " resolves to a non-A-type chain");
        }
        out.push_back(er);
    }
    return out;
}

/// Desingularization graph: one vertex per facet curve (genus = interior
/// lattice points, self-intersection 2g-2 by adjunction) plus, for each edge
/// with a_type k > 0, l(E) disjoint chains of k exceptional (-2)-curves
/// joining the two facet curves.
inline CurveGraph build_curve_graph(const LatticePolytope& p,
                                    const std::vector<EdgeResolution>& res) {
    CurveGraph g;
    for (int fi = 0; fi < p.facet_count(); ++fi) {
        CurveVertex v;
        v.id = fi;
        v.kind = CurveKind::Facet;
        v.genus = p.facets[fi].interior_points;
        v.self_intersection = 2LL * v.genus - 2;
        g.vertices.push_back(v);
    }
    for (const auto& er : res) {
        const PolyEdge& e = p.edges[er.edge_id];
        if (er.a_type == 0) {
            g.edges.push_back({e.f0, e.f1, er.multiplicity});
            continue;
        }
        // chains separate the facet curves: their direct intersection is 0
        for (int copy = 0; copy < er.multiplicity; ++copy) {
            int prev = e.f0;
            for (int j = 0; j < er.a_type; ++j) {
                CurveVertex v;
                v.id = g.size();
                v.kind = CurveKind::Exceptional;
                v.genus = 0;
                v.self_intersection = -2;
                g.vertices.push_back(v);
                g.edges.push_back({prev, v.id, 1});
                prev = v.id;
            }
            g.edges.push_back({prev, e.f1, 1});
        }
    }
    g.gram = IMat(g.vertices.size(), g.vertices.size());
    for (const auto& v : g.vertices) g.gram(v.id, v.id) = v.self_intersection;
    for (const auto& ge : g.edges) {
        g.gram(ge.a, ge.b) += ge.multiplicity;
        g.gram(ge.b, ge.a) += ge.multiplicity;
    }
    return g;
}

/// Picard rank: rho = 1 + (#facets - 4) + sum l(E) k_E, cross-checked against
/// the exact rational rank of the intersection matrix.
inline RankReport picard_rank(const LatticePolytope& p,
                              const std::vector<EdgeResolution>& res,
                              const CurveGraph& g) {
    RankReport r;
    r.facet_excess = p.facet_count() - 4;
    r.edge_sum = 0;
    for (const auto& er : res) r.edge_sum += er.multiplicity * er.a_type;
    r.rho = 1 + r.facet_excess + r.edge_sum;
    r.matrix_dim = g.size();
    r.matrix_rank = rank(g.gram);
    if (r.matrix_rank != r.rho) throw RankMismatch(r.rho, r.matrix_rank);
    return r;
}

} // namespace k3pic
