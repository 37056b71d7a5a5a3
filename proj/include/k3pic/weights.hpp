#pragma once

#include "k3pic/errors.hpp"

#include <array>
#include <numeric>
#include <string>
#include <vector>

namespace k3pic {

/// Weight vector (q1,..,q4) of a weighted projective 3-space; the
/// hypersurface degree s = q1+q2+q3+q4.
struct WeightVector {
    std::array<long long, 4> q{};
    long long s = 0;

    WeightVector() = default;
    explicit WeightVector(std::array<long long, 4> weights) : q(weights) {
        for (long long w : q)
            if (w <= 0) throw ValidationError("weights must be positive");
        long long g = 0;
        for (long long w : q) g = std::gcd(g, w);
        if (g != 1) throw ValidationError("weights must have gcd 1");
        s = q[0] + q[1] + q[2] + q[3];
    }
    WeightVector(long long a, long long b, long long c, long long d)
        : WeightVector(std::array<long long, 4>{a, b, c, d}) {}

    std::string str() const {
        std::string out = "(";
        for (int i = 0; i < 4; ++i) out += std::to_string(q[i]) + (i < 3 ? "," : ")");
        return out;
    }
};

/// All exponent vectors of weighted-degree-s monomials, i.e. the integral
/// points of the rational simplex Q in ambient coordinates.
inline std::vector<std::array<long long, 4>> monomials(const WeightVector& w) {
    std::vector<std::array<long long, 4>> out;
    for (long long a = 0; a * w.q[0] <= w.s; ++a)
        for (long long b = 0; a * w.q[0] + b * w.q[1] <= w.s; ++b)
            for (long long c = 0; a * w.q[0] + b * w.q[1] + c * w.q[2] <= w.s; ++c) {
                long long rem = w.s - a * w.q[0] - b * w.q[1] - c * w.q[2];
                if (rem % w.q[3] == 0)
                    out.push_back({a, b, c, rem / w.q[3]});
            }
    return out;
}

} // namespace k3pic
