#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace liftkit {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr double kMachineEps = std::numeric_limits<double>::epsilon();

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NonSquare : public Error {
public:
    using Error::Error;
};

class BackendFailure : public Error {
public:
    using Error::Error;
};

class ZeroVector : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

/// The inflated component of a lifted nullvector is too small to carry information.
class DegenerateLift : public Error {
public:
    using Error::Error;
};

class SpectralCollision : public Error {
public:
    using Error::Error;
};

/// A ratio error was requested but its denominator component vanishes.
class DivisionDegenerate : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class IoError : public Error {
public:
    using Error::Error;
};

inline bool all_finite(const Matrix& m) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) {
                return false;
            }
        }
    }
    return true;
}

}  // namespace liftkit
