#pragma once

#include <stdexcept>
#include <string>

namespace k3pic {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DegeneratePolytope : Error {
    using Error::Error;
};
struct NoUniqueInteriorPoint : Error {
    using Error::Error;
};
struct NonGorensteinEdge : Error {
    using Error::Error;
};
struct RankMismatch : Error {
    int formula_rank;
    int matrix_rank;
    RankMismatch(int formula, int matrix)
        : Error("picard rank formula gives " + std::to_string(formula) +
                " but intersection matrix has rank " + std::to_string(matrix)),
          formula_rank(formula), matrix_rank(matrix) {}
};
struct ParseError : Error {
    std::size_t position;
    ParseError(const std::string& msg, std::size_t pos)
        : Error(msg + " (at position " + std::to_string(pos) + ")"), position(pos) {}
};
struct ValidationError : Error {
    using Error::Error;
};
struct DegenerateLattice : Error {
    using Error::Error;
};
struct NonIntegerDiscriminant : Error {
    using Error::Error;
};
struct InvalidFormParams : Error {
    using Error::Error;
};
struct CapExceeded : Error {
    using Error::Error;
};
struct NotIsotropic : Error {
    using Error::Error;
};
struct NonIntegralGlue : Error {
    using Error::Error;
};
struct NoFibreFound : Error {
    using Error::Error;
};
struct Overfull : Error {
    using Error::Error;
};
struct InfiniteMW : Error {
    using Error::Error;
};
struct HasSection : Error {
    using Error::Error;
};

} // namespace k3pic
