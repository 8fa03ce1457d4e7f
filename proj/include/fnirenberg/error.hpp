#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fnir {

enum class ErrorKind {
    DimensionMismatch,
    InvalidInput,
    CoincidentPoints,
    NorthPole,
    ChartOverflow,
    Syntax,
    Domain,
    UnknownVariable,
    KNotPositive,
    DegenerateK,
    AxisDegenerate,
    NotFlat,
    DivergentIntegral,
    IntegralFailure,
    WrongStratum,
    CensusTooLarge,
    StiffStep,
    Io,
    Usage,
};

/// Stable kebab-case tag for an error kind, used in reports and messages.
std::string_view kind_name(ErrorKind kind) noexcept;

/// Every failure raised by the library carries a machine-readable kind.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(kind_name(kind)) + ": " + message), kind_(kind), message_(message) {}

    ErrorKind kind() const noexcept { return kind_; }
    /// The message without the kind prefix.
    const std::string& message() const noexcept { return message_; }

private:
    ErrorKind kind_;
    std::string message_;
};

/// Syntax errors additionally report the byte offset and the tokens that would have been accepted.
class SyntaxError : public Error {
public:
    SyntaxError(std::size_t offset, std::string expected, const std::string& detail)
        : Error(ErrorKind::Syntax, detail + " at offset " + std::to_string(offset) +
                                       " (expected " + expected + ")"),
          offset_(offset), expected_(std::move(expected)) {}

    std::size_t offset() const noexcept { return offset_; }
    const std::string& expected() const noexcept { return expected_; }

private:
    std::size_t offset_;
    std::string expected_;
};

}  // namespace fnir
