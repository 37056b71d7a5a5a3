#include "k3pic/matrix.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace k3pic;

namespace {

IMat from_rows(const std::vector<std::vector<long long>>& rows) {
    IMat m(rows.size(), rows.empty() ? 0 : rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
    return m;
}

Int det_by_cofactor(const IMat& m) {
    std::size_t n = m.rows();
    if (n == 1) return m(0, 0);
    Int total = 0;
    for (std::size_t c = 0; c < n; ++c) {
        if (m(0, c) == 0) continue;
        IMat sub(n - 1, n - 1);
        for (std::size_t i = 1; i < n; ++i) {
            std::size_t jj = 0;
            for (std::size_t j = 0; j < n; ++j) {
                if (j == c) continue;
                sub(i - 1, jj++) = m(i, j);
            }
        }
        Int term = m(0, c) * det_by_cofactor(sub);
        total += (c % 2 == 0) ? term : -term;
    }
    return total;
}

} // namespace

TEST_CASE("determinant agrees with cofactor expansion on random matrices") {
    std::mt19937 rng(12345);
    std::uniform_int_distribution<int> dist(-6, 6);
    for (int trial = 0; trial < 60; ++trial) {
        std::size_t n = 1 + trial % 5;
        IMat m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) m(i, j) = dist(rng);
        REQUIRE(det(m) == det_by_cofactor(m));
    }
}

TEST_CASE("smith normal form: transforms are unimodular and s = u a v") {
    std::mt19937 rng(999);
    std::uniform_int_distribution<int> dist(-8, 8);
    for (int trial = 0; trial < 40; ++trial) {
        std::size_t rows = 1 + trial % 4, cols = 1 + (trial / 2) % 4;
        IMat a(rows, cols);
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j) a(i, j) = dist(rng);
        SmithResult r = smith_normal_form(a);
        REQUIRE(abs(det(r.u)) == 1);
        REQUIRE(abs(det(r.v)) == 1);
        REQUIRE(r.u * a * r.v == r.s);
        Int prev = -1;
        for (std::size_t t = 0; t < std::min(rows, cols); ++t) {
            for (std::size_t j = 0; j < cols; ++j)
                if (j != t) REQUIRE(r.s(t, j) == 0);
            REQUIRE(r.s(t, t) >= 0);
            if (prev > 0 && r.s(t, t) != 0) REQUIRE(r.s(t, t) % prev == 0);
            if (r.s(t, t) != 0) prev = r.s(t, t);
        }
    }
}

TEST_CASE("smith normal form of a known matrix") {
    IMat a = from_rows({{2, 4, 4}, {-6, 6, 12}, {10, 4, 16}});
    SmithResult r = smith_normal_form(a);
    REQUIRE(r.s(0, 0) == 2);
    REQUIRE(r.s(1, 1) == 2);
    REQUIRE(r.s(2, 2) == 156);
}

TEST_CASE("integer kernel is saturated") {
    IMat a = from_rows({{1, 6, 14, 21}});
    IMat k = integer_kernel(a);
    REQUIRE(k.cols() == 3);
    for (std::size_t j = 0; j < 3; ++j) {
        Int s = 0;
        for (std::size_t i = 0; i < 4; ++i) s += a(0, i) * k(i, j);
        REQUIRE(s == 0);
    }
    // saturation: stacking with the kernel basis must give full rank 4 lattice
    IMat stack(4, 4);
    for (std::size_t i = 0; i < 4; ++i) stack(0, i) = a(0, i);
    for (std::size_t j = 0; j < 3; ++j)
        for (std::size_t i = 0; i < 4; ++i) stack(j + 1, i) = k(i, j);
    REQUIRE(rank(stack) == 4);
}

TEST_CASE("signature of definite and hyperbolic forms") {
    IMat u = from_rows({{0, 1}, {1, 0}});
    REQUIRE(signature(u) == std::pair<int, int>(1, 1));
    IMat a2 = from_rows({{-2, 1}, {1, -2}});
    REQUIRE(signature(a2) == std::pair<int, int>(0, 2));
    IMat pos = from_rows({{2, 1}, {1, 2}});
    REQUIRE(signature(pos) == std::pair<int, int>(2, 0));
    IMat mixed = from_rows({{2, 1}, {1, -2}});
    REQUIRE(signature(mixed) == std::pair<int, int>(1, 1));
}

TEST_CASE("hermite normal form spans the same row lattice") {
    IMat a = from_rows({{4, 2, 0}, {2, 8, 2}, {6, 10, 2}});
    IMat h = hermite_normal_form(a);
    // every original row must be an integer combination of the HNF rows
    RMat hr(3, 3);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) hr(j, i) = Rat(h(i, j)); // transposed
    for (std::size_t r = 0; r < 3; ++r) {
        std::vector<Rat> rhs{Rat(a(r, 0)), Rat(a(r, 1)), Rat(a(r, 2))};
        auto sol = solve(hr, rhs);
        REQUIRE(sol.has_value());
        for (const Rat& x : *sol) REQUIRE(is_integer(x));
    }
}

TEST_CASE("exact solve and inverse") {
    RMat a(2, 2);
    a(0, 0) = Rat(2); a(0, 1) = Rat(1); a(1, 0) = Rat(1); a(1, 1) = Rat(-2);
    auto inv = inverse(a);
    REQUIRE(inv.has_value());
    REQUIRE((*inv)(0, 0) == Rat(2, 5));
    auto sol = solve(a, {Rat(1), Rat(0)});
    REQUIRE(sol.has_value());
    REQUIRE((*sol)[0] == Rat(2, 5));
    REQUIRE((*sol)[1] == Rat(1, 5));
}
