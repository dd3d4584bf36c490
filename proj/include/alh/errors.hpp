#pragma once

#include <stdexcept>
#include <string>

namespace alh {

// Base class for all harness failures.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input data. `line` is the physical line number in
// the offending file (header = line 1), or 0 when not tied to a line.
struct DataError : Error {
    explicit DataError(const std::string& msg, std::size_t line = 0)
        : Error(line ? msg + " (line " + std::to_string(line) + ")" : msg), line_number(line) {}
    std::size_t line_number;
};

// Invalid configuration value or key.
struct ConfigError : Error {
    using Error::Error;
};

// Classifier training failure (divergence, degenerate class weights, ...).
struct TrainError : Error {
    using Error::Error;
};

}  // namespace alh
