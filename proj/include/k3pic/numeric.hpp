#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <numeric>
#include <string>

namespace k3pic {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Int num(const Rat& r) { return boost::multiprecision::numerator(r); }
inline Int den(const Rat& r) { return boost::multiprecision::denominator(r); }

inline Int gcd(const Int& a, const Int& b) { return boost::multiprecision::gcd(a, b); }
inline Int lcm(const Int& a, const Int& b) { return boost::multiprecision::lcm(a, b); }
inline Int abs(const Int& a) { return boost::multiprecision::abs(a); }

inline bool is_integer(const Rat& r) { return den(r) == 1; }

/// Floor division for possibly negative operands.
inline Int floor_div(const Int& a, const Int& b) {
    Int q = a / b, r = a % b;
    if (r != 0 && ((r < 0) != (b < 0))) --q;
    return q;
}

inline Int ceil_div(const Int& a, const Int& b) { return -floor_div(-a, b); }

/// a mod m reduced to [0, m), m > 0.
inline Int pos_mod(const Int& a, const Int& m) {
    Int r = a % m;
    if (r < 0) r += m;
    return r;
}

/// Rational reduced mod the integer m into [0, m).
inline Rat rat_mod(const Rat& r, const Int& m) {
    Int d = den(r);
    Int n = pos_mod(num(r), m * d);
    return Rat(n, d);
}

inline std::string to_string(const Int& v) { return v.str(); }

inline std::string to_string(const Rat& v) {
    if (is_integer(v)) return num(v).str();
    return num(v).str() + "/" + den(v).str();
}

inline long long to_ll(const Int& v) { return static_cast<long long>(v); }

} // namespace k3pic
