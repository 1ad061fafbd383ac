#pragma once

#include <stdexcept>
#include <string>

namespace hiact {

/// Malformed input text (skeleton lines, CSV rows, config entries).
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t line = 0)
        : std::runtime_error(line ? what + " (line " + std::to_string(line) + ")" : what),
          line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Joint schema and skeleton disagree, or a named joint is missing.
class SchemaError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Shapes of descriptors, labelings and parameters do not line up.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Negative histogram entries and similar out-of-domain arguments.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A constraint set leaves some frame without an admissible state.
class InfeasibleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Enumeration oracle refused an instance above its size guard.
class GuardError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace hiact
