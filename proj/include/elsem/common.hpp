#pragma once

#include <stdexcept>
#include <string>

namespace elsem {

inline constexpr const char* kVersion = "0.2.0";

/// Error in a text input (graph file, CSV, config). Carries 1-based position.
struct ParseError : std::runtime_error {
    int line;
    int column;
    ParseError(const std::string& msg, int line_, int column_ = 0)
        : std::runtime_error("line " + std::to_string(line_) +
                             (column_ > 0 ? ":" + std::to_string(column_) : "") + ": " + msg),
          line(line_),
          column(column_) {}
};

/// Numerical failure that is not a usage error (singular matrix, failed factorization).
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace elsem
