#include "k3pic/polytope.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <map>

using namespace k3pic;

namespace {

/// Lattice points of the hull by bounding-box scan against the facet
/// inequalities; independent of the monomial enumeration.
long long count_hull_points(const LatticePolytope& p) {
    V3 lo = p.vertices[0], hi = p.vertices[0];
    for (const auto& v : p.vertices)
        for (int i = 0; i < 3; ++i) {
            lo[i] = std::min(lo[i], v[i]);
            hi[i] = std::max(hi[i], v[i]);
        }
    long long count = 0;
    for (long long a = lo[0]; a <= hi[0]; ++a)
        for (long long b = lo[1]; b <= hi[1]; ++b)
            for (long long c = lo[2]; c <= hi[2]; ++c) {
                V3 x{a, b, c};
                bool inside = true;
                for (const auto& f : p.facets)
                    if (dot(f.normal, x) < -f.support) { inside = false; break; }
                if (inside) ++count;
            }
    return count;
}

std::multiset<int> interior_multiset(const LatticePolytope& p) {
    std::multiset<int> out;
    for (const auto& f : p.facets) out.insert(f.interior_points);
    return out;
}

std::multiset<int> edge_length_multiset(const LatticePolytope& p) {
    std::multiset<int> out;
    for (const auto& e : p.edges) out.insert(e.lattice_length);
    return out;
}

} // namespace

TEST_CASE("quartic simplex: 35 lattice points, 4 facets, 4 vertices") {
    WeightVector w(1, 1, 1, 1);
    auto p = build_newton_polytope(w);
    REQUIRE(p.lattice_point_count() == 35);
    REQUIRE(p.facet_count() == 4);
    REQUIRE(p.vertices.size() == 4);
    REQUIRE(p.edges.size() == 6);
    for (const auto& e : p.edges) REQUIRE(e.lattice_length == 4);
    REQUIRE(p.interior_count == 1);
    auto ms = monomials(w);
    REQUIRE(ms.size() == 35);
    REQUIRE(std::find(ms.begin(), ms.end(), std::array<long long, 4>{4, 0, 0, 0}) != ms.end());
    REQUIRE(std::find(ms.begin(), ms.end(), std::array<long long, 4>{1, 1, 1, 1}) != ms.end());
}

TEST_CASE("weights (1,1,1,2): Q has a non-integral vertex, Delta is smaller") {
    WeightVector w(1, 1, 1, 2);
    auto p = build_newton_polytope(w);
    REQUIRE(p.rational_vertices[3][3] == Rat(5, 2));
    REQUIRE(p.facet_count() == 5);
    // facet interior counts: bottom triangle of side 5 has 6, top slice 0
    auto ms = interior_multiset(p);
    REQUIRE(ms.count(6) == 1);
    REQUIRE(ms.count(0) == 1);
    REQUIRE(ms.count(2) == 3);
}

TEST_CASE("all monomials lie on the weight hyperplane") {
    WeightVector w(1, 6, 14, 21);
    for (const auto& m : monomials(w)) {
        long long s = 0;
        for (int i = 0; i < 4; ++i) s += w.q[i] * m[i];
        REQUIRE(s == 42);
    }
}

TEST_CASE("monomial examples for integral axis points") {
    auto m1 = monomials(WeightVector(1, 1, 1, 3));
    REQUIRE(std::find(m1.begin(), m1.end(), std::array<long long, 4>{0, 0, 0, 2}) != m1.end());
    auto m2 = monomials(WeightVector(1, 2, 3, 6));
    for (std::array<long long, 4> pt :
         {std::array<long long, 4>{12, 0, 0, 0}, {0, 6, 0, 0}, {0, 0, 4, 0}, {0, 0, 0, 2}})
        REQUIRE(std::find(m2.begin(), m2.end(), pt) != m2.end());
}

TEST_CASE("hull point count equals monomial count over sample weights") {
    for (auto w : {WeightVector(1, 1, 1, 1), WeightVector(1, 1, 1, 2),
                   WeightVector(1, 2, 3, 6), WeightVector(2, 4, 5, 9),
                   WeightVector(3, 5, 11, 14)}) {
        auto p = build_newton_polytope(w);
        REQUIRE(count_hull_points(p) == p.lattice_point_count());
        REQUIRE(count_hull_points(p) == static_cast<long long>(monomials(w).size()));
    }
}

TEST_CASE("boundary points partition exactly into open faces") {
    for (auto w : {WeightVector(1, 1, 1, 2), WeightVector(2, 4, 5, 9),
                   WeightVector(1, 6, 14, 21)}) {
        auto p = build_newton_polytope(w);
        long long facet_interior = 0;
        for (const auto& f : p.facets) facet_interior += f.interior_points;
        long long edge_interior = 0;
        for (const auto& e : p.edges) edge_interior += e.lattice_length - 1;
        long long boundary = p.lattice_point_count() - p.interior_count;
        REQUIRE(facet_interior + edge_interior +
                    static_cast<long long>(p.vertices.size()) == boundary);
    }
}

TEST_CASE("polar dual of the quartic is reflexive and duality is an involution") {
    WeightVector w(1, 1, 1, 1);
    auto p = build_newton_polytope(w);
    auto [duals, reflexive] = polar_dual(p);
    REQUIRE(reflexive);
    REQUIRE(duals.size() == 4);
    // (Delta-dual)-dual: facets of the dual hull must support Delta's vertices at -1
    std::vector<V3> dual_pts;
    for (const auto& d : duals)
        dual_pts.push_back({to_ll(num(d[0])), to_ll(num(d[1])), to_ll(num(d[2]))});
    for (const auto& v : p.vertices) {
        long long m = 0;
        for (const auto& d : dual_pts) m = std::min(m, dot(v, d));
        REQUIRE(m == -1);
    }
}

TEST_CASE("non-K3 input without interior point is rejected by polar_dual") {
    WeightVector w(1, 1, 1, 6);
    auto p = build_newton_polytope(w);
    REQUIRE(p.interior_count != 1);
    REQUIRE_THROWS_AS(polar_dual(p), NoUniqueInteriorPoint);
}

TEST_CASE("projection basis choice does not affect invariants") {
    WeightVector w(2, 4, 5, 9);
    auto p1 = build_newton_polytope(w);
    // alternative affine basis: multiply by a fixed unimodular transform
    std::array<V4, 3> alt{};
    auto base = detail::hyperplane_basis(w);
    for (int i = 0; i < 4; ++i) {
        alt[0][i] = base[0][i] + 2 * base[1][i] + 3 * base[2][i];
        alt[1][i] = -base[1][i] + 4 * base[2][i];
        alt[2][i] = base[2][i];
    }
    auto p2 = build_newton_polytope(w, alt);
    REQUIRE(p1.facet_count() == p2.facet_count());
    REQUIRE(edge_length_multiset(p1) == edge_length_multiset(p2));
    REQUIRE(interior_multiset(p1) == interior_multiset(p2));
    REQUIRE(p1.lattice_point_count() == p2.lattice_point_count());
}

TEST_CASE("weight vector invariants") {
    REQUIRE_THROWS_AS(WeightVector(1, 1, 1, 0), ValidationError);
    REQUIRE_THROWS_AS(WeightVector(2, 2, 2, 2), ValidationError);
}
