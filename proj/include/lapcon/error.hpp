#pragma once

#include <stdexcept>
#include <string>

namespace lapcon {

/// Base for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionMismatch : Error {
    using Error::Error;
};

struct SingularMatrix : Error {
    using Error::Error;
};

/// An iterative routine hit its cap without meeting its tolerance.
struct NotConverged : Error {
    using Error::Error;
};

/// Input exceeds a hard size guard (e.g. exact forest enumeration).
struct SizeLimit : Error {
    using Error::Error;
};

struct TauOutOfRange : Error {
    using Error::Error;
};

struct InvalidInput : Error {
    using Error::Error;
};

/// Text input could not be parsed; carries the 1-based line number (0 = n/a).
struct ParseError : Error {
    int line = 0;
    explicit ParseError(const std::string& msg, int line_no = 0)
        : Error(line_no > 0 ? "line " + std::to_string(line_no) + ": " + msg : msg),
          line(line_no) {}
};

}  // namespace lapcon
