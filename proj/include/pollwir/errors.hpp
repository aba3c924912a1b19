#pragma once

#include <stdexcept>
#include <string>

namespace pollwir {

/// Base for all toolkit errors. Subclasses of ValidationError signal bad
/// input (CLI exit code 2); anything else is an internal failure (exit 1).
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

class DimensionError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class ArgumentError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// Raised when data violates a physical bound (negative intensity,
/// |Q| > I, ...). The message names the first offending location.
class PhysicalityError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// Structured parse failure carrying file position.
class ParseError : public ValidationError {
public:
    ParseError(const std::string& path, long line, const std::string& what)
        : ValidationError(path + ":" + std::to_string(line) + ": " + what),
          path_(path),
          line_(line) {}

    explicit ParseError(const std::string& what) : ValidationError(what), line_(0) {}

    const std::string& path() const { return path_; }
    long line() const { return line_; }

private:
    std::string path_;
    long line_;
};

}  // namespace pollwir
