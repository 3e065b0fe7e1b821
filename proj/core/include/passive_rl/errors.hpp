#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace passive_rl {

/// Malformed input text. Carries the 1-based line number of the offending line.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// A value violates a documented invariant or precondition.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A distribution puts mass on a cell where the reference distribution has none.
class SupportError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A numerical routine could not reach its stated tolerance.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Exhaustive enumeration refused because the history space is too large.
class EnumerationGuardError : public std::length_error {
public:
    using std::length_error::length_error;
};

} // namespace passive_rl
