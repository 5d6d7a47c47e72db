#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mvtlab {

/// Raised by the expression parser. `offset()` is a byte offset into the source.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t offset, const std::string& message, std::string expected = {})
        : std::runtime_error(message), offset_(offset), expected_(std::move(expected)) {}

    std::size_t offset() const noexcept { return offset_; }
    const std::string& expected() const noexcept { return expected_; }

private:
    std::size_t offset_;
    std::string expected_;
};

/// A function could not be evaluated where a kernel needed finite values.
class DomainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class QuadratureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A theorem precondition that is a hard requirement (not a reported flag) failed.
class HypothesisError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// No sign change of a residual was found. Carries the grid point with the
/// smallest |residual| for diagnostics.
class NoRootFound : public std::runtime_error {
public:
    NoRootFound(const std::string& message, double closest_x, double closest_residual)
        : std::runtime_error(message), closest_x_(closest_x), closest_residual_(closest_residual) {}

    double closest_x() const noexcept { return closest_x_; }
    double closest_residual() const noexcept { return closest_residual_; }

private:
    double closest_x_;
    double closest_residual_;
};

} // namespace mvtlab
