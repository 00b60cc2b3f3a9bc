#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dkf {

// Base of every library exception. The CLI maps the subclasses onto exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed or out-of-contract input (exit code 2).
class InputError : public Error {
public:
    using Error::Error;
};

class ParseError : public InputError {
public:
    ParseError(const std::string& msg, std::size_t position)
        : InputError("parse error at position " + std::to_string(position) + ": " + msg),
          position_(position) {}

    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

// A result could not be certified at the precision that was available (exit code 3).
class PrecisionError : public Error {
public:
    using Error::Error;
};

// Enumeration or factorial size caps exceeded.
class ResourceLimitError : public InputError {
public:
    using InputError::InputError;
};

// Mathematical precondition violated (zero operand, wrong valuation sign, ...).
class DomainError : public InputError {
public:
    using InputError::InputError;
};

} // namespace dkf
