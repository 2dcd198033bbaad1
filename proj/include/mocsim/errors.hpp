#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mocsim {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A precondition on the inputs was not met (wrong length, empty input, ...).
class ContractViolation : public Error {
public:
    using Error::Error;
};

/// A numeric argument lies outside the function's domain.
class DomainError : public Error {
public:
    using Error::Error;
};

class MissingMetric : public Error {
public:
    using Error::Error;
};

class AlignmentError : public Error {
public:
    using Error::Error;
};

class SchemaError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(std::size_t row, const std::string& what)
        : Error("row " + std::to_string(row) + ": " + what), row_(row) {}

    std::size_t row() const noexcept { return row_; }

private:
    std::size_t row_;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

} // namespace mocsim
