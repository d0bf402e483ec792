#pragma once

#include <stdexcept>
#include <string>

namespace mlc {

// Base for all library errors. `detail` carries the witness (offending
// element, pair, line/col, ...) separately from the headline message so the
// CLI can emit {error, detail} without re-parsing text.
class Error : public std::runtime_error {
public:
    Error(std::string message, std::string detail = {})
        : std::runtime_error(message), detail_(std::move(detail)) {}
    const std::string& detail() const noexcept { return detail_; }

private:
    std::string detail_;
};

class ParseError : public Error {
public:
    ParseError(int line, int col, const std::string& message)
        : Error("parse error at " + std::to_string(line) + ":" + std::to_string(col) + ": " + message),
          line_(line), col_(col) {}
    int line() const noexcept { return line_; }
    int col() const noexcept { return col_; }

private:
    int line_, col_;
};

class StructureError : public Error {
public:
    using Error::Error;
};

class EvalError : public Error {
public:
    using Error::Error;
};

class GroupError : public Error {
public:
    using Error::Error;
};

// A product (or inverse) fell outside an enumerated ball.
class UndefinedProductError : public EvalError {
public:
    using EvalError::EvalError;
};

class MatchingError : public Error {
public:
    using Error::Error;
};

class BudgetError : public Error {
public:
    using Error::Error;
};

class RepError : public Error {
public:
    using Error::Error;
};

} // namespace mlc
