#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace peeragree {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input text. `row()` is 1-based and counts the header line; 0 when unknown.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t row)
        : Error(row == 0 ? what : "row " + std::to_string(row) + ": " + what), row_(row) {}
    std::size_t row() const noexcept { return row_; }

private:
    std::size_t row_;
};

/// A record or configuration value violates a documented invariant.
class ValidationError : public Error {
public:
    ValidationError(const std::string& what, std::string record_id = {})
        : Error(record_id.empty() ? what : "record '" + record_id + "': " + what),
          record_id_(std::move(record_id)) {}
    const std::string& record_id() const noexcept { return record_id_; }

private:
    std::string record_id_;
};

/// An OLS fit cannot be computed (too few points or a constant predictor).
class DegenerateFitError : public Error {
public:
    using Error::Error;
};

}  // namespace peeragree
