#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace atmos {

enum class ErrorKind {
    InvalidTruncation,
    Dimension,
    Domain,
    Parse,
    SingularImpedance,
    Elimination,
    EigenSolve,
    DegenerateMode,
    Config,
    Io,
};

[[nodiscard]] const char* to_string(ErrorKind kind) noexcept;

/// Single exception type for the library; callers dispatch on kind().
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}
    Error(ErrorKind kind, const std::string& what, int line)
        : std::runtime_error("line " + std::to_string(line) + ": " + what),
          kind_(kind), line_(line) {}

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }
    [[nodiscard]] std::optional<int> line() const noexcept { return line_; }

private:
    ErrorKind kind_;
    std::optional<int> line_;
};

}  // namespace atmos
