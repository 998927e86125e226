#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace archheight {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual const char* kind() const noexcept { return "Error"; }
};

#define ARCHHEIGHT_DEFINE_ERROR(Name)                                     \
    class Name : public Error {                                           \
    public:                                                               \
        using Error::Error;                                               \
        const char* kind() const noexcept override { return #Name; }      \
    };

ARCHHEIGHT_DEFINE_ERROR(SingularCurve)
ARCHHEIGHT_DEFINE_ERROR(DegeneratePoint)
ARCHHEIGHT_DEFINE_ERROR(RootFindingFailure)
ARCHHEIGHT_DEFINE_ERROR(NumericBreakdown)
ARCHHEIGHT_DEFINE_ERROR(NonMonotoneSequence)
ARCHHEIGHT_DEFINE_ERROR(SamplingExhausted)
ARCHHEIGHT_DEFINE_ERROR(NotOnCurve)
ARCHHEIGHT_DEFINE_ERROR(ConfigError)
ARCHHEIGHT_DEFINE_ERROR(IoError)
ARCHHEIGHT_DEFINE_ERROR(ArityError)

#undef ARCHHEIGHT_DEFINE_ERROR

/// Malformed input text. Line and column are 1-based.
class ParseError : public Error {
public:
    ParseError(const std::string& message, std::size_t line, std::size_t column)
        : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
                message),
          line_(line),
          column_(column) {}

    const char* kind() const noexcept override { return "ParseError"; }
    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

}  // namespace archheight
