#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace nld {

// Points carry two coordinates; one-dimensional code only reads [0].
using Point = std::array<double, 2>;

inline Point point1(double x) { return {x, 0.0}; }

inline double norm(const Point& z, int dim) {
    return dim == 1 ? std::abs(z[0]) : std::hypot(z[0], z[1]);
}

inline Point sub(const Point& a, const Point& b) { return {a[0] - b[0], a[1] - b[1]}; }

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = 3.14159265358979323846;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad input: unknown keys, malformed documents, out-of-range parameters.
class ConfigError : public Error {
public:
    using Error::Error;
};

// Quadrature, eigen or fixed-point iteration that did not settle.
class NumericError : public Error {
public:
    using Error::Error;
};

// A required kernel condition was checked and found violated.
class PreconditionError : public Error {
public:
    using Error::Error;
};

class DiscreteKernelNontrivial : public NumericError {
public:
    using NumericError::NumericError;
};

}  // namespace nld
