#include "k3pic/resolution.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace k3pic;

namespace {

struct Pipeline {
    LatticePolytope p;
    std::vector<EdgeResolution> res;
    CurveGraph g;
    RankReport r;
};

Pipeline run(const WeightVector& w) {
    Pipeline out;
    out.p = build_newton_polytope(w);
    polar_dual(out.p);
    out.res = resolve_edges(out.p);
    out.g = build_curve_graph(out.p, out.res);
    out.r = picard_rank(out.p, out.res, out.g);
    return out;
}

} // namespace

TEST_CASE("hirzebruch-jung expansions") {
    REQUIRE(detail::hj_expansion(2, 1) == std::vector<long long>{2});
    REQUIRE(detail::hj_expansion(3, 2) == std::vector<long long>{2, 2});
    REQUIRE(detail::hj_expansion(7, 6) == std::vector<long long>(6, 2));
    REQUIRE(detail::hj_expansion(3, 1) == std::vector<long long>{3});
    REQUIRE(detail::hj_expansion(5, 3) == std::vector<long long>{2, 3});
    REQUIRE(detail::hj_expansion(5, 4) == std::vector<long long>{2, 2, 2, 2});
}

TEST_CASE("cone normal form") {
    using detail::cone_normal_form;
    auto smooth = cone_normal_form({Int(1), Int(0)}, {Int(0), Int(1)});
    REQUIRE(smooth.first == 1);
    auto a1 = cone_normal_form({Int(0), Int(1)}, {Int(2), Int(-1)});
    REQUIRE(a1.first == 2);
    REQUIRE(a1.second == 1);
    auto a2 = cone_normal_form({Int(0), Int(1)}, {Int(3), Int(-2)});
    REQUIRE(a2.first == 3);
    REQUIRE(a2.second == 2);
}

TEST_CASE("quartic in P3: ambient smooth, rho 1") {
    auto pl = run(WeightVector(1, 1, 1, 1));
    for (const auto& er : pl.res) {
        REQUIRE(er.a_type == 0);
        REQUIRE(er.cone_index == 1);
    }
    REQUIRE(pl.r.rho == 1);
    REQUIRE(pl.r.matrix_rank == 1);
    REQUIRE(pl.g.size() == 4);
    // four facet curves of genus 3 joined pairwise with multiplicity 4
    for (const auto& v : pl.g.vertices) {
        REQUIRE(v.kind == CurveKind::Facet);
        REQUIRE(v.genus == 3);
        REQUIRE(v.self_intersection == 4);
    }
    REQUIRE(pl.g.edges.size() == 6);
    for (const auto& e : pl.g.edges) REQUIRE(e.multiplicity == 4);
}

TEST_CASE("weights (1,6,14,21): edge contributions sum to 9") {
    auto pl = run(WeightVector(1, 6, 14, 21));
    REQUIRE(pl.r.facet_excess == 0);
    REQUIRE(pl.r.edge_sum == 9);
    REQUIRE(pl.r.rho == 10);
    REQUIRE(pl.r.matrix_dim == 13);
    for (const auto& er : pl.res) REQUIRE(er.gorenstein);
}

TEST_CASE("sample ranks match the table") {
    REQUIRE(run(WeightVector(1, 1, 1, 2)).r.rho == 2);
    REQUIRE(run(WeightVector(2, 3, 3, 4)).r.rho == 12);
    REQUIRE(run(WeightVector(5, 6, 8, 11)).r.rho == 19);
    REQUIRE(run(WeightVector(1, 2, 2, 3)).r.rho == 7);
    REQUIRE(run(WeightVector(3, 5, 11, 14)).r.rho == 18);
}

TEST_CASE("family 26 graph: 17 vertices, one genus-1 facet curve") {
    auto pl = run(WeightVector(2, 4, 5, 9));
    REQUIRE(pl.r.rho == 14);
    REQUIRE(pl.g.size() == 17);
    int genus1 = 0;
    for (const auto& v : pl.g.vertices)
        if (v.kind == CurveKind::Facet && v.genus == 1) ++genus1;
    REQUIRE(genus1 == 1);
}

TEST_CASE("curve graph gram matrices are even and symmetric") {
    for (auto w : {WeightVector(2, 4, 5, 9), WeightVector(1, 2, 2, 3)}) {
        auto pl = run(w);
        REQUIRE(pl.g.gram.is_symmetric());
        for (int i = 0; i < pl.g.size(); ++i) REQUIRE(pl.g.gram(i, i) % 2 == 0);
        REQUIRE(pl.g.size() == pl.r.rho + 3);
    }
}

TEST_CASE("rank cross-check identity on 4-facet reflexive polytopes") {
    for (auto w : {WeightVector(1, 1, 1, 1), WeightVector(1, 6, 14, 21),
                   WeightVector(2, 4, 5, 9)}) {
        auto pl = run(w);
        if (pl.p.facet_count() != 4) continue;
        REQUIRE(pl.p.reflexive);
        auto duals = dual_lattice_points(pl.p);
        long long dual_total = static_cast<long long>(duals.size());
        // interior points of dual facets (dual facet <-> vertex of Delta)
        std::map<int, long long> dual_facet_interior;
        std::map<std::pair<int, int>, long long> dual_edge_interior;
        for (const auto& dp : duals) {
            if (dp.tight_vertices.size() == 1)
                ++dual_facet_interior[dp.tight_vertices[0]];
            if (dp.tight_vertices.size() == 2)
                ++dual_edge_interior[{dp.tight_vertices[0], dp.tight_vertices[1]}];
        }
        long long facet_term = 0;
        for (auto& [v, c] : dual_facet_interior) facet_term += c;
        long long mixed_term = 0;
        for (const auto& e : pl.p.edges) {
            auto key = std::minmax(e.v0, e.v1);
            auto it = dual_edge_interior.find({key.first, key.second});
            long long dual_int = it == dual_edge_interior.end() ? 0 : it->second;
            mixed_term += static_cast<long long>(e.lattice_length - 1) * dual_int;
        }
        long long lhs = 1 + pl.r.edge_sum;
        REQUIRE(lhs == dual_total - 4 - facet_term + mixed_term);
    }
}
