#pragma once

#include <stdexcept>
#include <string>

namespace corners {

/// Violation of a module contract (bad input, failed construction check).
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed file or unreadable input.
class FormatError : public Error {
public:
    FormatError(const std::string& what, int line = 0)
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

    int line() const noexcept { return line_; }

private:
    int line_;
};

}  // namespace corners
