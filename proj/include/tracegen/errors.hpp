#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace tracegen {

// Bad parameter values: epsilon out of range, unknown family, empty counts...
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A TraceProfile whose triplet is inconsistent (e.g. p_irm = 1 without g).
class ProfileError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

// Text that failed to parse. line/column are 1-based; 0 means unknown or
// not applicable (a single command-line value has no line).
class ParseError : public ValidationError {
public:
    ParseError(const std::string& what, std::size_t line, std::size_t column = 0)
        : ValidationError(format(what, line, column)), reason_(what), line_(line), column_(column) {}

    /// The message without the position prefix.
    const std::string& reason() const noexcept { return reason_; }

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    static std::string format(const std::string& what, std::size_t line, std::size_t column) {
        std::string out;
        if (line != 0) out = "line " + std::to_string(line);
        if (column != 0) out += (out.empty() ? "column " : ", column ") + std::to_string(column);
        return out.empty() ? what : out + ": " + what;
    }
    std::string reason_;
    std::size_t line_;
    std::size_t column_;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed file content. offset is a byte offset for binary formats and a
// 1-based line number for text formats.
class FormatError : public IoError {
public:
    FormatError(const std::string& what, std::uint64_t offset)
        : IoError(what), offset_(offset) {}
    std::uint64_t offset() const noexcept { return offset_; }

private:
    std::uint64_t offset_;
};

}  // namespace tracegen
