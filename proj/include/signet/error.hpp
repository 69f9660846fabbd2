#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace signet {

// Error taxonomy shared by the library and the CLI. The numeric values are
// the CLI exit codes (0 = success is not an error).
enum class ErrorKind : int {
    parse = 2,
    validation = 3,
    numeric = 4,
    io = 5,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }
    int exit_code() const noexcept { return static_cast<int>(kind_); }

private:
    ErrorKind kind_;
};

// Malformed input. `line` is 1-based; 0 means the location is unknown
// (e.g. structural JSON errors).
class ParseError : public Error {
public:
    ParseError(const std::string& message, std::size_t line = 0)
        : Error(ErrorKind::parse,
                line ? "line " + std::to_string(line) + ": " + message : message),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// Same pair listed twice in one episode with opposite signs.
class ConflictError : public ParseError {
public:
    using ParseError::ParseError;
};

class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& message)
        : Error(ErrorKind::validation, message) {}
};

// Undefined or degenerate numeric results where the contract demands a hard
// error (insufficient data, zero variance scales, singular matrices, ...).
class NumericError : public Error {
public:
    explicit NumericError(const std::string& message)
        : Error(ErrorKind::numeric, message) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& message)
        : Error(ErrorKind::io, message) {}
};

} // namespace signet
