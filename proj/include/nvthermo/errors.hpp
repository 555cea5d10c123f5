// Copyright 2026 The nvthermo Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace nvthermo {

// Base of every error the library raises. Callers that only need a
// diagnostic can catch this and print what().
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

// Input that violates a structural invariant (asymmetric tensor, empty grid, ...).
class ValidationError : public Error {
public:
    using Error::Error;
};

// Hilbert space larger than the dense solver is configured for.
class CapacityError : public Error {
public:
    using Error::Error;
};

class NumericError : public Error {
public:
    using Error::Error;
};

// Eigenstates that cannot be assigned a product-basis label with confidence.
class AmbiguityError : public Error {
public:
    using Error::Error;
};

class LookupError : public Error {
public:
    using Error::Error;
};

// Normal equations are singular: the data do not identify every parameter.
class RankError : public Error {
public:
    using Error::Error;
};

// Caller broke a documented precondition of a model (validity window, fixed field, ...).
class ContractError : public Error {
public:
    using Error::Error;
};

class ExtrapolationError : public Error {
public:
    using Error::Error;
};

// Malformed input file. The message is prefixed with path:line:column.
class ParseError : public Error {
public:
    ParseError(const std::string& path, std::size_t line, std::size_t column, const std::string& what)
        : Error(path + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + what),
          line_(line),
          column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

}  // namespace nvthermo
