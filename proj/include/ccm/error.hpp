#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ccm {

enum class Errc {
    NonFiniteValue,
    TooShort,
    EmptyManifold,
    InvalidArgument,
    DegenerateOrbit,
    ManifoldTooSmall,
    InsufficientNeighbors,
    LengthMismatch,
    TooFewPoints,
    LibraryTooLarge,
    ConfigInvalid,
    InsufficientLValues,
    WorkerPanic,
    MissingColumn,
    RaggedRows,
    ParseError,
    IoError,
    UnknownScenario,
    MalformedSkillsFile,
};

std::string_view to_string(Errc code) noexcept;

// Base for every failure raised by the library. The code is the stable,
// machine-checkable part; the message is for humans.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

class NonFiniteValue : public Error {
public:
    explicit NonFiniteValue(std::size_t index)
        : Error(Errc::NonFiniteValue, "non-finite value at index " + std::to_string(index)),
          index_(index) {}

    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

class MissingColumn : public Error {
public:
    explicit MissingColumn(std::string column)
        : Error(Errc::MissingColumn, "column '" + column + "' not found in header"),
          column_(std::move(column)) {}

    const std::string& column() const noexcept { return column_; }

private:
    std::string column_;
};

// Row numbers are 1-based and count the header line; columns are 1-based.
class ParseError : public Error {
public:
    ParseError(std::size_t row, std::size_t column, const std::string& cell)
        : Error(Errc::ParseError, "row " + std::to_string(row) + ", column " +
                                      std::to_string(column) + ": cannot parse '" + cell + "'"),
          row_(row), column_(column) {}

    std::size_t row() const noexcept { return row_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t row_;
    std::size_t column_;
};

}  // namespace ccm
