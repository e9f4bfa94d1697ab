#pragma once

#include <stdexcept>
#include <string>

namespace fixpoint {

// Malformed domain values: bad dimensions, non-finite coordinates,
// out-of-range parameters.
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A closed-form operator power left the representable range.
class PowerOverflow : public std::range_error {
public:
    using std::range_error::range_error;
};

// Thrown by checkers whose contract requires an exact fixed point.
class FixedPointPrecondition : public std::runtime_error {
public:
    FixedPointPrecondition(const std::string& what, double residual)
        : std::runtime_error(what), residual_(residual) {}

    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

}  // namespace fixpoint
