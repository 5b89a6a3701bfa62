#pragma once

#include <stdexcept>
#include <string>

namespace boxpp {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : Error {
    using Error::Error;
};

// direction matrix does not have full row rank
struct DegenerateMatrix : Error {
    using Error::Error;
};

struct SingularMatrix : Error {
    using Error::Error;
};

struct NoSuchVector : Error {
    using Error::Error;
};

// a column selection that should be invertible is not
struct SingularSelection : Error {
    using Error::Error;
};

// a frequency sample hit a pole of the Green's function
struct PoleAtOmega : Error {
    using Error::Error;
};

struct CenterOnKnotPlane : Error {
    using Error::Error;
};

struct OnKnotPlane : Error {
    using Error::Error;
};

struct NoSplit : Error {
    using Error::Error;
};

}  // namespace boxpp
