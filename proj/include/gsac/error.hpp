#pragma once

#include <stdexcept>
#include <string>

namespace gsac {

/// Malformed or semantically invalid input data (scene files, configs, degenerate geometry).
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Failures while running a pipeline on valid data (shape mismatch, non-finite values, saturation).
class ComputeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace gsac
