#pragma once

#include <stdexcept>
#include <string>

namespace mswr {

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad user input: malformed config, invalid parameter combinations.
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

// Operand shapes do not match.
class DimensionError : public Error {
public:
    DimensionError(const std::string& what, long a, long b)
        : Error(what + ": " + std::to_string(a) + " vs " + std::to_string(b)) {}
};

// Factorization hit a pivot below the relative threshold.
class SingularMatrixError : public Error {
public:
    SingularMatrixError(int row, const std::string& context)
        : Error("singular matrix: pivot at row " + std::to_string(row) +
                " below threshold (" + context + ")"),
          pivot_row(row) {}
    int pivot_row;
};

// A structural validation report did not pass.
class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& msg) : Error(msg) {}
};

}  // namespace mswr
