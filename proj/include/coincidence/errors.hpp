#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace coincidence {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A computed probability left [0, 1] by more than rounding noise.
class ConsistencyError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Malformed case-file syntax. line() is 1-based; 0 when unknown.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t line)
        : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Well-formed input that violates a data invariant.
class ValidationError : public std::runtime_error {
public:
    ValidationError(std::string ward, std::string field, const std::string& message)
        : std::runtime_error(ward.empty() ? message : "ward '" + ward + "': " + message),
          ward_(std::move(ward)), field_(std::move(field)) {}

    const std::string& ward() const noexcept { return ward_; }
    const std::string& field() const noexcept { return field_; }

private:
    std::string ward_;
    std::string field_;
};

} // namespace coincidence
